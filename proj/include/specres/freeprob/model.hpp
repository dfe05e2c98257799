#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "specres/types.hpp"

namespace specres {

using cplx = std::complex<double>;

// Parameters of a limiting-spectrum model: weight scheme, gate probability p
// and number of residual layers. Depth > 1 curves exist only for p = 1.
struct TheoryModel {
  InitScheme scheme;
  double p = 1.0;
  std::size_t depth = 1;

  void validate() const;
  // p = 0 gives the identity Jacobian; its spectrum is a point mass at 1.
  bool degenerate() const { return p == 0.0; }
};

enum class ModelTag { quartic_gaussian, cubic_orthogonal, deep_linear_gaussian, deep_linear_orthogonal };

std::string_view to_string(ModelTag tag);
ModelTag model_tag(const TheoryModel& model);

// G(z) together with the residual of the equation it was solved from.
struct StieltjesSample {
  cplx z;
  cplx G;
  double residual = 0.0;
};

// rho(lambda) = -Im G(lambda + i eps) / pi on an ascending grid.
struct DensityCurve {
  std::vector<double> lambdas;
  std::vector<double> rho;
  double epsilon = 1e-6;
  ModelTag model_tag = ModelTag::quartic_gaussian;
  // Grid indices where re-evaluation at 2*eps moved the extrapolated density
  // by more than 1%. Expected near support edges.
  std::vector<std::size_t> richardson_flags;

  std::size_t size() const { return lambdas.size(); }
};

} // namespace specres
