#include "specres/compare.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specres/error.hpp"
#include "specres/freeprob/density.hpp"
#include "specres/freeprob/moments.hpp"

namespace specres {

double CdfTable::operator()(double x) const {
  if (lambdas.empty() || x < lambdas.front()) return 0.0;
  if (x >= lambdas.back()) return 1.0;
  const auto it = std::upper_bound(lambdas.begin(), lambdas.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - lambdas.begin());
  const double a = lambdas[k - 1], b = lambdas[k];
  const double t = (x - a) / (b - a);
  return values[k - 1] + t * (values[k] - values[k - 1]);
}

CdfTable theory_cdf(const DensityCurve& curve) {
  if (curve.size() < 2) throw IntegrityError("density curve needs at least two grid points");
  CdfTable t;
  t.lambdas = curve.lambdas;
  t.values.assign(curve.size(), 0.0);
  for (std::size_t k = 1; k < curve.size(); ++k)
    t.values[k] = t.values[k - 1] + 0.5 * (curve.rho[k] + curve.rho[k - 1]) * (curve.lambdas[k] - curve.lambdas[k - 1]);
  const double mass = t.values.back();
  if (!(std::abs(mass - 1.0) <= 1e-2))
    throw IntegrityError("density curve integrates to " + std::to_string(mass) + ", not 1");
  double prev = 0.0;
  for (double& v : t.values) {
    v = std::clamp(v / mass, 0.0, 1.0);
    v = std::max(v, prev);
    prev = v;
  }
  t.values.back() = 1.0;
  return t;
}

namespace {

const std::vector<double>& sorted_or_copy(const std::vector<double>& in, std::vector<double>& buf) {
  if (std::is_sorted(in.begin(), in.end())) return in;
  buf = in;
  std::sort(buf.begin(), buf.end());
  return buf;
}

void require_samples(const std::vector<double>& s) {
  if (s.empty()) throw ParameterError("empirical spectrum is empty");
}

} // namespace

double ks_distance(const std::vector<double>& samples, const CdfTable& cdf) {
  require_samples(samples);
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(j) / n)});
    i = j;
  }
  return std::min(d, 1.0);
}

double ks_distance(const EmpiricalSpectrum& spectrum, const DensityCurve& curve) {
  std::vector<double> buf;
  return ks_distance(sorted_or_copy(spectrum.eigenvalues, buf), theory_cdf(curve));
}

double wasserstein1(const std::vector<double>& samples, const CdfTable& cdf) {
  require_samples(samples);
  const double n = static_cast<double>(samples.size());
  std::vector<double> xs;
  xs.reserve(samples.size() + cdf.lambdas.size());
  std::merge(samples.begin(), samples.end(), cdf.lambdas.begin(), cdf.lambdas.end(), std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double total = 0.0;
  std::size_t below = 0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double a = xs[k], b = xs[k + 1];
    while (below < samples.size() && samples[below] <= a) ++below;
    const double e = static_cast<double>(below) / n;
    // F_theory is linear on [a, b] because every grid point is a breakpoint.
    const double d0 = e - cdf(a);
    const double d1 = e - cdf(b);
    const double h = b - a;
    if ((d0 >= 0.0) == (d1 >= 0.0)) {
      total += h * std::abs(0.5 * (d0 + d1));
    } else {
      total += h * (d0 * d0 + d1 * d1) / (2.0 * (std::abs(d0) + std::abs(d1)));
    }
  }
  return total;
}

double wasserstein1(const EmpiricalSpectrum& spectrum, const DensityCurve& curve) {
  std::vector<double> buf;
  return wasserstein1(sorted_or_copy(spectrum.eigenvalues, buf), theory_cdf(curve));
}

ComparisonReport compare(const EmpiricalSpectrum& spectrum, const DensityCurve& curve, const TheoryModel& model) {
  require_samples(spectrum.eigenvalues);
  const DensityCurve fine = refine_curve(curve, model, 1e-3);
  std::vector<double> buf;
  const std::vector<double>& xs = sorted_or_copy(spectrum.eigenvalues, buf);
  const CdfTable cdf = theory_cdf(fine);

  ComparisonReport r;
  r.n = xs.size();
  r.model_tag = std::string(to_string(fine.model_tag));
  r.ks = ks_distance(xs, cdf);
  r.w1 = wasserstein1(xs, cdf);

  const MomentSummary emp = empirical_moments(xs);
  const MomentSummary th = theory_moments(model);
  r.m1_rel_err = std::abs(emp.m1 - th.m1) / std::abs(th.m1);
  r.m2_rel_err = std::abs(emp.m2 - th.m2) / std::abs(th.m2);

  const auto support = support_interval(fine);
  std::size_t outside = xs.size();
  if (support) {
    const double lo = support->first - 1e-3, hi = support->second + 1e-3;
    outside = static_cast<std::size_t>(std::count_if(xs.begin(), xs.end(), [&](double x) { return x < lo || x > hi; }));
  }
  r.support_mismatch = static_cast<double>(outside) / static_cast<double>(xs.size());
  return r;
}

} // namespace specres
