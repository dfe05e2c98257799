#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specres/error.hpp"
#include "specres/freeprob.hpp"
#include "support.hpp"

using namespace specres;
using testing::gaussian;
using testing::orthogonal;

namespace {

// m_k = (1 / 2 pi i) \oint z^k G(z) dz on a circle enclosing the support,
// using G(conj z) = conj G(z) below the axis.
std::vector<double> contour_moments(const TheoryModel& m, double radius, int points, int k_max) {
  std::vector<double> out(static_cast<std::size_t>(k_max), 0.0);
  for (int j = 0; j < points; ++j) {
    const double theta = 2.0 * std::numbers::pi * (j + 0.5) / points;
    const cplx z = std::polar(radius, theta);
    const cplx g = z.imag() > 0 ? solve_single_layer_G(m, z).G : std::conj(solve_single_layer_G(m, std::conj(z)).G);
    cplx zk = z * z;
    for (int k = 0; k < k_max; ++k) {
      out[static_cast<std::size_t>(k)] += (zk * g).real() / points;
      zk *= z;
    }
  }
  return out;
}

} // namespace

TEST_CASE("vanishing weights give the identity law") {
  for (auto m : {gaussian(1e-12, 0.3), gaussian(1e-12, 1.0), orthogonal(1e-12, 0.3), orthogonal(1e-12, 1.0)}) {
    const cplx z(2.0, 1e-6);
    const StieltjesSample s = solve_single_layer_G(m, z);
    CHECK(std::abs(s.G - 1.0 / (z - 1.0)) < 1e-4);
  }
}

TEST_CASE("p = 0 is short-circuited to 1 / (z - 1)") {
  const cplx z(0.7, 0.01);
  CHECK(std::abs(solve_single_layer_G(gaussian(1.0, 0.0), z).G - 1.0 / (z - 1.0)) < 1e-14);
}

TEST_CASE("far from the support G ~ 1 / z") {
  for (auto m : {gaussian(1.0), orthogonal(1.0), gaussian(0.1, 0.5)}) {
    const StieltjesSample s = solve_single_layer_G(m, cplx(100.0, 1.0));
    CHECK(std::abs(s.G.real() - 0.01) < 1e-3);
    CHECK(s.G.imag() < 0.0);
    CHECK(s.residual < 1e-10);
  }
}

TEST_CASE("contour moments of the selected branch match the closed forms") {
  const auto g = contour_moments(gaussian(1.0), 20.0, 256, 2);
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(g[1] == doctest::Approx(7.0).epsilon(1e-9));
  const auto o = contour_moments(orthogonal(1.0, 0.5), 20.0, 256, 2);
  CHECK(o[0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(o[1] == doctest::Approx(3.5).epsilon(1e-9));
}

TEST_CASE("branch validity along the real axis, sigma2 in {0.1, 1}, p in {0.5, 1}") {
  for (auto scheme : {WeightScheme::gaussian, WeightScheme::orthogonal})
    for (double s2 : {0.1, 1.0})
      for (double p : {0.5, 1.0}) {
        const TheoryModel m{{scheme, s2}, p, 1};
        const double hi = 1.05 * single_layer_support_bound(m);
        double worst_res = 0.0, worst_im = -1.0;
        for (int k = 0; k < 150; ++k) {
          const StieltjesSample s = solve_single_layer_G(m, cplx(hi * (k + 0.5) / 150.0, 1e-6));
          worst_res = std::max(worst_res, s.residual);
          worst_im = std::max(worst_im, s.G.imag());
        }
        CHECK(worst_res < 1e-10);
        CHECK(worst_im <= 1e-9);
      }
}

TEST_CASE("polynomial coefficients vanish at the solution") {
  const TheoryModel m = orthogonal(0.1, 0.5);
  const cplx z(1.2, 1e-3);
  const StieltjesSample s = solve_single_layer_G(m, z);
  CHECK(polynomial_residual(orthogonal_cubic(0.1, 0.5, z), s.G) < 1e-12);
  CHECK(single_layer_coefficients(m, z).size() == 4);
  CHECK(single_layer_coefficients(gaussian(0.1), z).size() == 5);
}

TEST_CASE("path reports each requested height") {
  const double heights[] = {1.0, 1e-3, 1e-6};
  const auto path = single_layer_path(gaussian(1.0), 1.5, heights);
  REQUIRE(path.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(path[i].z == cplx(1.5, heights[i]));
    CHECK(std::abs(path[i].G - solve_single_layer_G(gaussian(1.0), path[i].z).G) < 1e-10);
  }
  const double bad[] = {1e-3, 1.0};
  CHECK_THROWS_AS(single_layer_path(gaussian(1.0), 1.5, bad), ParameterError);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(solve_single_layer_G(gaussian(1.0), cplx(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(solve_single_layer_G(gaussian(1.0, 1.0, 2), cplx(1.0, 1.0)), ParameterError);
  CHECK_THROWS_AS(solve_single_layer_G(gaussian(1.0, 1.5), cplx(1.0, 1.0)), ParameterError);
  CHECK_THROWS_AS(solve_single_layer_G(gaussian(-1.0), cplx(1.0, 1.0)), ParameterError);
}
