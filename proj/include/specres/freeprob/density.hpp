#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "specres/freeprob/deep_linear.hpp"
#include "specres/freeprob/model.hpp"

namespace specres {

// Dispatches to the single-layer polynomial, the deep-linear equation or the
// identity law (p = 0) depending on the model.
class StieltjesEvaluator {
public:
  explicit StieltjesEvaluator(const TheoryModel& model);

  StieltjesSample operator()(cplx z) const;
  std::vector<StieltjesSample> path(double x, std::span<const double> heights) const;

  const TheoryModel& model() const { return model_; }
  ModelTag tag() const { return model_tag(model_); }

private:
  TheoryModel model_;
  std::optional<DeepLinearSolver> deep_;
};

// Right end of the support: the single-layer norm bound, or the deep-linear
// edge from lambda_max_endpoint.
double theory_support_bound(const TheoryModel& model);

struct InversionOptions {
  double epsilon = 1e-6;
  // Re-evaluate at 2 eps and flag points that move by more than 1%.
  bool richardson = true;
  std::size_t threads = 0;
};

// rho(l) = max(0, -Im G(l + i eps) / pi) on the given ascending grid, values
// below 1e-12 flushed to zero.
DensityCurve invert_to_density(const TheoryModel& model, std::span<const double> grid, const InversionOptions& options = {});

struct AdaptiveOptions {
  std::optional<double> lo;  // default 0
  std::optional<double> hi;  // default 1.05 * theory_support_bound
  std::size_t base_points = 2001;
  // Bound on the trapezoid error estimate of each interval, weighted by
  // max(1, l^2) so that second moments stay accurate.
  double tolerance = 1e-7;
  // Upper bound on rho * width for every interval.
  double max_mass = 5e-4;
  std::size_t max_points = 200000;
  InversionOptions inversion;
};

// Density on a grid refined where rho is steep or singular.
DensityCurve density_curve(const TheoryModel& model, const AdaptiveOptions& options = {});

// Splits intervals until max rho * width < max_mass.
DensityCurve refine_curve(const DensityCurve& curve, const TheoryModel& model, double max_mass = 1e-3,
                          std::size_t max_points = 400000, std::size_t threads = 0);

// Outermost grid points with rho > threshold, if any.
std::optional<std::pair<double, double>> support_interval(const DensityCurve& curve, double threshold = 1e-6);

} // namespace specres
