#include <doctest.h>

#include <cmath>

#include "specres/compare.hpp"
#include "specres/error.hpp"
#include "specres/freeprob.hpp"
#include "specres/rng.hpp"
#include "support.hpp"

using namespace specres;
using testing::cached_curve;
using testing::gaussian;
using testing::orthogonal;

namespace {

DensityCurve uniform_curve(double lo, double hi, int n = 1001) {
  DensityCurve c;
  for (int k = 0; k < n; ++k) {
    c.lambdas.push_back(lo + (hi - lo) * k / (n - 1));
    c.rho.push_back(1.0 / (hi - lo));
  }
  return c;
}

// Inverse-CDF sampling of the piecewise-linear theory CDF.
EmpiricalSpectrum sample_from(const DensityCurve& curve, std::size_t n, std::uint64_t seed) {
  const CdfTable cdf = theory_cdf(curve);
  RandomStream rng(seed);
  EmpiricalSpectrum s;
  s.trials = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf.values.begin(), cdf.values.end(), u);
    const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf.values.begin()), 1, cdf.values.size() - 1);
    const double f0 = cdf.values[k - 1], f1 = cdf.values[k];
    const double t = f1 > f0 ? (u - f0) / (f1 - f0) : 0.0;
    s.eigenvalues.push_back(cdf.lambdas[k - 1] + t * (cdf.lambdas[k] - cdf.lambdas[k - 1]));
  }
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

} // namespace

TEST_CASE("theory CDF") {
  DensityCurve delta;
  delta.lambdas = {0.0, 0.999, 1.0, 1.001, 2.0};
  delta.rho = {0.0, 0.0, 1000.0, 0.0, 0.0};
  const CdfTable d = theory_cdf(delta);
  CHECK(d(0.99) < 1e-12);
  CHECK(d(1.01) == 1.0);

  const CdfTable u = theory_cdf(uniform_curve(0.0, 2.0));
  CHECK(u(1.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(u(-1.0) == 0.0);
  CHECK(u(3.0) == 1.0);
  CHECK(std::is_sorted(u.values.begin(), u.values.end()));

  const CdfTable g = theory_cdf(cached_curve(gaussian(1.0)));
  CHECK(g(2.0) > 0.5);
  CHECK(g(2.0) < 0.9);

  DensityCurve half = uniform_curve(0.0, 1.0);
  for (double& r : half.rho) r *= 0.5;
  CHECK_THROWS_AS(theory_cdf(half), IntegrityError);
}

TEST_CASE("KS of exact samples obeys the DKW scale and shrinks with n") {
  const DensityCurve& c = cached_curve(gaussian(1.0));
  double prev = 1.0;
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    const double ks = ks_distance(sample_from(c, n, 17), c);
    CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)) * 1.5);
    CHECK(ks < prev);
    prev = ks;
  }
}

TEST_CASE("disjoint supports") {
  const DensityCurve c = uniform_curve(0.0, 1.0);
  EmpiricalSpectrum s;
  for (int i = 0; i < 100; ++i) s.eigenvalues.push_back(1.5 + i / 100.0);
  CHECK(ks_distance(s, c) == doctest::Approx(1.0));
}

TEST_CASE("Wasserstein distance") {
  const DensityCurve at1 = uniform_curve(0.9995, 1.0005, 11);
  EmpiricalSpectrum two;
  two.eigenvalues.assign(50, 2.0);
  CHECK(wasserstein1(two, at1) == doctest::Approx(1.0).epsilon(1e-6));

  const DensityCurve& c = cached_curve(orthogonal(0.1, 0.5));
  const EmpiricalSpectrum s = sample_from(c, 100000, 3);
  CHECK(wasserstein1(s, c) < 5e-3);

  EmpiricalSpectrum empty;
  CHECK_THROWS_AS(wasserstein1(empty, c), ParameterError);
}

TEST_CASE("W1 is bounded by KS times the support length") {
  const DensityCurve& c = cached_curve(gaussian(0.1, 0.5));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const EmpiricalSpectrum s = sample_from(c, 2000, seed);
    const double lo = std::min(s.eigenvalues.front(), c.lambdas.front());
    const double hi = std::max(s.eigenvalues.back(), c.lambdas.back());
    CHECK(wasserstein1(s, c) <= ks_distance(s, c) * (hi - lo) + 1e-12);
  }
}

TEST_CASE("KS handles ties on both sides of the jump") {
  const DensityCurve c = uniform_curve(0.0, 1.0);
  EmpiricalSpectrum s;
  s.eigenvalues = {0.5, 0.5, 0.5, 0.5};
  CHECK(ks_distance(s, c) == doctest::Approx(0.5));
}

TEST_CASE("full comparison report") {
  const TheoryModel m = gaussian(1.0);
  const DensityCurve& c = cached_curve(m);
  const EmpiricalSpectrum s = sample_from(c, 20000, 5);
  const ComparisonReport r = compare(s, c, m);
  CHECK(r.n == 20000);
  CHECK(r.ks < 0.02);
  CHECK(r.w1 < 0.05);
  CHECK(r.m1_rel_err < 0.02);
  CHECK(r.m2_rel_err < 0.04);
  CHECK(r.support_mismatch == 0.0);
  CHECK(r.model_tag == "quartic-gaussian");

  const ComparisonReport again = compare(s, c, m);
  CHECK(again.ks == r.ks);
  CHECK(again.w1 == r.w1);

  // Gaussian samples against the orthogonal law: m2 7 vs 6.
  const TheoryModel om = orthogonal(1.0);
  const EmpiricalSpectrum big = sample_from(c, 200000, 8);
  const ComparisonReport x = compare(big, cached_curve(om), om);
  CHECK(x.m2_rel_err == doctest::Approx(1.0 / 6.0).epsilon(0.05));
  CHECK(x.support_mismatch > 0.0);

  EmpiricalSpectrum empty;
  CHECK_THROWS_AS(compare(empty, c, m), ParameterError);
}
