#include "specres/freeprob/polynomial.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "specres/error.hpp"

namespace specres {

cplx polynomial_value(std::span<const cplx> coeffs, cplx x) {
  cplx acc = 0.0;
  for (const cplx& c : coeffs) acc = acc * x + c;
  return acc;
}

double polynomial_residual(std::span<const cplx> coeffs, cplx x) {
  double scale = 0.0;
  const double ax = std::abs(x);
  for (const cplx& c : coeffs) scale = scale * ax + std::abs(c);
  const double r = std::abs(polynomial_value(coeffs, x));
  return scale > 0.0 ? r / scale : r;
}

namespace {

// Parlett-Reinsch diagonal balancing (radix 2).
void balance(Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / 2.0, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= 2.0;
        c *= 4.0;
      }
      g = r * 2.0;
      while (c > g) {
        f /= 2.0;
        c /= 4.0;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

cplx polish(std::span<const cplx> coeffs, cplx x) {
  for (int it = 0; it < 3; ++it) {
    cplx p = 0.0, dp = 0.0;
    for (const cplx& c : coeffs) {
      dp = dp * x + p;
      p = p * x + c;
    }
    if (dp == cplx(0.0)) break;
    const cplx next = x - p / dp;
    if (!(std::abs(polynomial_value(coeffs, next)) < std::abs(p))) break;
    x = next;
  }
  return x;
}

} // namespace

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs) {
  std::size_t lead = 0;
  while (lead < coeffs.size() && coeffs[lead] == cplx(0.0)) ++lead;
  const auto poly = coeffs.subspan(lead);
  if (poly.size() < 2) return {};
  const auto degree = static_cast<Eigen::Index>(poly.size() - 1);

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (Eigen::Index k = 0; k < degree; ++k) companion(0, k) = -poly[static_cast<std::size_t>(k + 1)] / poly[0];
  for (Eigen::Index k = 1; k < degree; ++k) companion(k, k - 1) = 1.0;
  balance(companion);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalError("companion eigensolver failed");

  std::vector<cplx> roots;
  roots.reserve(static_cast<std::size_t>(degree));
  for (Eigen::Index k = 0; k < degree; ++k) roots.push_back(polish(poly, solver.eigenvalues()(k)));
  return roots;
}

} // namespace specres
