#include "specres/freeprob/endpoint.hpp"

#include <cmath>
#include <sstream>

#include "specres/error.hpp"

namespace specres {

namespace {

struct KValue {
  double k, dk;
};

// K(u) and K'(u) of the normalized deep-linear equation G K(zG)^L = zG - 1.
KValue k_of_u(const InitScheme& scheme, double u) {
  const double s = scheme.sigma2;
  if (scheme.variant == WeightScheme::gaussian) {
    const double r = std::sqrt((s - 1.0) * (s - 1.0) + 4.0 * s * u);
    return {(r + 1.0 - s + 2.0 * s * u) / 2.0, s * (1.0 / r + 1.0)};
  }
  const double r = std::sqrt((1.0 - s) * (1.0 - s) + 4.0 * s * u * u);
  const double num = (s + 1.0) * u + r;
  const double dnum = (s + 1.0) + 4.0 * s * u / r;
  return {num / (u + 1.0), dnum / (u + 1.0) - num / ((u + 1.0) * (u + 1.0))};
}

void check(const InitScheme& scheme, std::size_t depth) {
  scheme.validate();
  if (depth < 1) throw ParameterError("depth must be >= 1");
}

} // namespace

double endpoint_condition(const InitScheme& scheme, std::size_t depth, double u) {
  const KValue kv = k_of_u(scheme, u);
  return static_cast<double>(depth) * u * (u - 1.0) * kv.dk / kv.k - 1.0;
}

double endpoint_lambda(const InitScheme& scheme, std::size_t depth, double u) {
  const KValue kv = k_of_u(scheme, u);
  return std::exp(std::log(u) + static_cast<double>(depth) * std::log(kv.k) - std::log(u - 1.0));
}

double lambda_max_endpoint(const InitScheme& scheme, std::size_t depth) {
  check(scheme, depth);
  if (scheme.variant == WeightScheme::orthogonal && depth == 1) {
    // The condition tends to 0 from below as u -> infinity: the single
    // orthogonal layer has a hard edge at (1 + sigma)^2 with no finite root.
    const double edge = 1.0 + std::sqrt(scheme.sigma2);
    return edge * edge;
  }
  constexpr int points = 10000;
  constexpr double t_lo = 1e-9, t_hi = 1e6;
  const double log_lo = std::log(t_lo), log_hi = std::log(t_hi);
  auto t_at = [&](int k) { return std::exp(log_lo + (log_hi - log_lo) * k / (points - 1)); };

  double prev_t = t_at(0);
  double prev_f = endpoint_condition(scheme, depth, 1.0 + prev_t);
  for (int k = 1; k < points; ++k) {
    const double t = t_at(k);
    const double f = endpoint_condition(scheme, depth, 1.0 + t);
    if ((prev_f < 0.0) != (f < 0.0)) {
      double a = prev_t, b = t, fa = prev_f;
      for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = endpoint_condition(scheme, depth, 1.0 + m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      return endpoint_lambda(scheme, depth, 1.0 + 0.5 * (a + b));
    }
    prev_t = t;
    prev_f = f;
  }
  std::ostringstream os;
  os << "no sign change of the edge condition for u - 1 in [" << t_lo << ", " << t_hi << "] (" << points
     << " log-spaced points)";
  throw BranchError(os.str());
}

double lambda_max_asymptotic(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("c must be a finite value >= 0");
  const double r = std::sqrt(c * c + 2.0 * c);
  return (1.0 + c + r) * std::exp(r);
}

double recommend_sigma2(std::size_t depth, std::size_t unit_depth, double target) {
  if (depth < 1) throw ParameterError("depth must be >= 1");
  if (unit_depth < 1) throw ParameterError("unit depth must be >= 1");
  if (!(target > 0.0) || !std::isfinite(target)) throw ParameterError("target must be positive");
  return target * std::pow(static_cast<double>(depth), -1.0 / static_cast<double>(unit_depth));
}

} // namespace specres
