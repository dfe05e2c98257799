#include <doctest.h>

#include <cmath>

#include "specres/error.hpp"
#include "specres/freeprob.hpp"
#include "specres/spectra.hpp"
#include "support.hpp"

using namespace specres;
using testing::cached_curve;
using testing::gaussian;
using testing::orthogonal;

TEST_CASE("single-layer closed forms") {
  const MomentSummary g = single_layer_moments(gaussian(1.0));
  CHECK(g.m1 == 2.0);
  CHECK(g.m2 == 7.0);
  CHECK(g.variance == 3.0);
  const MomentSummary o = single_layer_moments(orthogonal(1.0));
  CHECK(o.m1 == 2.0);
  CHECK(o.m2 == 6.0);
  CHECK(o.variance == 2.0);
  for (auto m : {gaussian(0.4, 0.0), orthogonal(3.0, 0.0)}) {
    const MomentSummary z = single_layer_moments(m);
    CHECK(z.m1 == 1.0);
    CHECK(z.m2 == 1.0);
    CHECK(z.variance == 0.0);
  }
}

TEST_CASE("orthogonal variance with partial gates") {
  for (double s : {0.1, 1.0, 2.5})
    for (double p : {0.2, 0.5, 1.0}) {
      const MomentSummary o = single_layer_moments(orthogonal(s, p));
      CHECK(o.variance == doctest::Approx(s * p * (2.0 + s * (1.0 - p))).epsilon(1e-14));
    }
}

TEST_CASE("orthogonal second moment with partial gates agrees with Monte Carlo") {
  NetworkConfig cfg;
  cfg.width = 400;
  cfg.scheme = {WeightScheme::orthogonal, 1.0};
  cfg.gates = SurrogateGates{{0.5}};
  cfg.seed = 99;
  const MomentSummary emp = empirical_moments(empirical_spectrum(cfg, 10));
  CHECK(emp.m2 == doctest::Approx(single_layer_moments(orthogonal(1.0, 0.5)).m2).epsilon(0.03));
}

TEST_CASE("multi-layer product formula") {
  const LayerSpec one{{WeightScheme::gaussian, 0.3}, 0.6};
  const MomentSummary a = multi_layer_moments(std::span<const LayerSpec>(&one, 1));
  const MomentSummary b = layer_moments(one);
  CHECK(a.m1 == b.m1);
  CHECK(a.m2 == b.m2);
  CHECK(a.variance == b.variance);

  const std::vector<LayerSpec> two(2, LayerSpec{{WeightScheme::gaussian, 1.0}, 1.0});
  const MomentSummary t = multi_layer_moments(two);
  CHECK(t.mean == doctest::Approx(4.0));
  CHECK(t.variance == doctest::Approx(24.0));

  const MomentSummary deep = theory_moments(gaussian(0.01, 1.0, 100));
  CHECK(deep.mean == doctest::Approx(std::pow(1.01, 100)).epsilon(1e-12));
  CHECK(deep.mean == doctest::Approx(2.7048).epsilon(1e-4));

  const std::vector<LayerSpec> mixed{{{WeightScheme::gaussian, 0.2}, 0.5}, {{WeightScheme::orthogonal, 0.4}, 1.0}};
  CHECK(multi_layer_moments(mixed).mean == doctest::Approx(1.1 * 1.4));
  CHECK_THROWS_AS(multi_layer_moments(std::vector<LayerSpec>{}), ParameterError);
}

TEST_CASE("moments of a narrow curve around 1") {
  DensityCurve c;
  c.lambdas = {0.999, 1.0, 1.001};
  c.rho = {0.0, 1000.0, 0.0};
  const auto m = stieltjes_to_moments(c, 4);
  for (double v : m) CHECK(v == doctest::Approx(1.0).epsilon(1e-5));
  c.rho[1] = 500.0;
  CHECK_THROWS_AS(stieltjes_to_moments(c, 2), IntegrityError);
  CHECK_THROWS_AS(stieltjes_to_moments(c, 0), ParameterError);
}

TEST_CASE("moments of solved curves") {
  const auto g = stieltjes_to_moments(cached_curve(gaussian(1.0)), 2);
  CHECK(g[0] == doctest::Approx(2.0).epsilon(5e-3));
  CHECK(g[1] == doctest::Approx(7.0).epsilon(7e-3));
  const auto d = stieltjes_to_moments(cached_curve(gaussian(0.2, 1.0, 5)), 1);
  CHECK(d[0] == doctest::Approx(2.48832).epsilon(0.01));
}
