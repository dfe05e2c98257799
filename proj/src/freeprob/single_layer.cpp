#include "specres/freeprob/single_layer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "continuation.hpp"
#include "specres/error.hpp"
#include "specres/freeprob/polynomial.hpp"

namespace specres {

std::vector<cplx> gaussian_quartic(double s, double p, cplx z) {
  const double s2 = s * s;
  return {
      s2 * z * (z - 1.0),
      s * z * ((2.0 * p - 1.0) * s - 2.0 * z + 2.0),
      s2 * p * (p - 1.0) + (z - 1.0) * (z - 1.0) - s * (2.0 * p - 1.0) * (z + 1.0),
      cplx(s),
      cplx(-1.0),
  };
}

std::vector<cplx> orthogonal_cubic(double s, double p, cplx z) {
  const double s2 = s * s;
  const cplx zm1 = z - 1.0;
  return {
      -z * zm1 * (s2 + zm1 * zm1 - 2.0 * s * (z + 1.0)),
      z * ((1.0 - 2.0 * p) * s2 - zm1 * zm1 + 2.0 * s * (p * (z + 3.0) - 2.0)),
      -(p - 1.0) * p * s2 - z + z * z + (p - 1.0) * s * (z + 1.0),
      z + s * (p - 1.0),
  };
}

std::vector<cplx> single_layer_coefficients(const TheoryModel& model, cplx z) {
  return model.scheme.variant == WeightScheme::gaussian ? gaussian_quartic(model.scheme.sigma2, model.p, z)
                                                        : orthogonal_cubic(model.scheme.sigma2, model.p, z);
}

double single_layer_support_bound(const TheoryModel& model) {
  const double sigma = std::sqrt(model.scheme.sigma2);
  const double norm = model.scheme.variant == WeightScheme::gaussian ? 2.0 * sigma : sigma;
  return (1.0 + norm) * (1.0 + norm);
}

namespace {

bool admissible(cplx g) { return g.imag() <= 1e-9 * std::max(1.0, std::abs(g)); }

struct RootPick {
  std::size_t index = 0;
  double d1 = 0.0;
  double d2 = 0.0;
};

RootPick nearest_root(const std::vector<cplx>& roots, cplx target) {
  RootPick out;
  out.d1 = out.d2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double d = std::abs(roots[k] - target);
    if (d < out.d1) {
      out.d2 = out.d1;
      out.d1 = d;
      out.index = k;
    } else if (d < out.d2) {
      out.d2 = d;
    }
  }
  return out;
}

// Picks among roots comparably close to g: Im G <= 0 first, then the
// smallest residual.
cplx break_tie(const std::vector<cplx>& roots, const std::vector<cplx>& coeffs, cplx g, double d1) {
  std::vector<cplx> close;
  for (const cplx& c : roots)
    if (std::abs(c - g) <= 4.0 * d1) close.push_back(c);
  std::stable_sort(close.begin(), close.end(), [&](cplx a, cplx b) {
    if (admissible(a) != admissible(b)) return admissible(a);
    return polynomial_residual(coeffs, a) < polynomial_residual(coeffs, b);
  });
  return close.front();
}

cplx make_admissible(const std::vector<cplx>& coeffs, cplx g, cplx z, double top) {
  if (admissible(g)) return g;
  // The tracked root left the lower half-plane; fall back to the closest
  // admissible root, if any.
  const auto roots = polynomial_roots(coeffs);
  double best = std::numeric_limits<double>::infinity();
  std::optional<cplx> pick;
  for (const cplx& c : roots) {
    if (admissible(c) && std::abs(c - g) < best) {
      best = std::abs(c - g);
      pick = c;
    }
  }
  if (!pick) throw BranchError("no admissible root with Im G <= 0 along " + detail::path_description(z, top));
  return *pick;
}

} // namespace

std::vector<StieltjesSample> single_layer_path(const TheoryModel& model, double x, std::span<const double> heights) {
  model.validate();
  if (model.depth != 1) throw ParameterError("single-layer solver needs depth 1");
  std::vector<StieltjesSample> out;
  out.reserve(heights.size());
  for (std::size_t k = 0; k < heights.size(); ++k) {
    if (!(heights[k] > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
    if (k > 0 && !(heights[k] < heights[k - 1])) throw ParameterError("heights must be strictly descending");
  }
  if (heights.empty()) return out;
  if (model.degenerate()) {
    for (double h : heights) out.push_back({cplx(x, h), 1.0 / (cplx(x, h) - 1.0), 0.0});
    return out;
  }

  const double top = std::max(heights.front(),
                              10.0 * std::max({1.0, std::abs(cplx(x, heights.front())), single_layer_support_bound(model)}));
  auto coeffs_at = [&](double eta) { return single_layer_coefficients(model, cplx(x, eta)); };

  const auto r0 = polynomial_roots(coeffs_at(top));
  cplx g = r0[nearest_root(r0, 1.0 / cplx(x, top)).index];
  double eta = top;
  for (double target : heights) {
    if (target < eta) {
      detail::descend(x, eta, target, [&](double h, bool forced) {
        const auto c = coeffs_at(h);
        const auto r = polynomial_roots(c);
        const RootPick pick = nearest_root(r, g);
        if (pick.d1 <= 0.25 * pick.d2) {
          g = r[pick.index];
          return true;
        }
        if (!forced) return false;
        g = break_tie(r, c, g, pick.d1);
        return true;
      });
      eta = target;
    }
    const cplx z(x, target);
    const auto c = single_layer_coefficients(model, z);
    g = make_admissible(c, g, z, top);
    out.push_back({z, g, polynomial_residual(c, g)});
  }
  return out;
}

StieltjesSample solve_single_layer_G(const TheoryModel& model, cplx z) {
  if (!(z.imag() > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
  const double h[] = {z.imag()};
  return single_layer_path(model, z.real(), h).front();
}

} // namespace specres
