#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "specres/freeprob/model.hpp"
#include "specres/spectra.hpp"

namespace specres {

// Piecewise-linear CDF of a density curve, 0 left of the grid and 1 right of it.
struct CdfTable {
  std::vector<double> lambdas;
  std::vector<double> values;

  double operator()(double x) const;
};

// Cumulative trapezoid integral renormalized to end at 1. Throws
// IntegrityError when the curve's mass is off by more than 1e-2.
CdfTable theory_cdf(const DensityCurve& curve);

// sup |F_emp - F_theory| over both sides of every empirical jump.
double ks_distance(const std::vector<double>& sorted_samples, const CdfTable& cdf);
double ks_distance(const EmpiricalSpectrum& spectrum, const DensityCurve& curve);

// Exact integral of |F_emp - F_theory| over the union of both supports.
double wasserstein1(const std::vector<double>& sorted_samples, const CdfTable& cdf);
double wasserstein1(const EmpiricalSpectrum& spectrum, const DensityCurve& curve);

struct ComparisonReport {
  double ks = 0.0;
  double w1 = 0.0;
  double m1_rel_err = 0.0;
  double m2_rel_err = 0.0;
  // Fraction of eigenvalues outside the curve's support widened by 1e-3.
  double support_mismatch = 0.0;
  std::size_t n = 0;
  std::string model_tag;
};

// Refines the curve until max rho * d(lambda) < 1e-3, then fills every
// metric. Moments are compared against the closed forms for `model`.
ComparisonReport compare(const EmpiricalSpectrum& spectrum, const DensityCurve& curve, const TheoryModel& model);

} // namespace specres
