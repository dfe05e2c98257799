#pragma once

#include <cstddef>

#include "specres/types.hpp"

namespace specres {

// Left-hand side minus right-hand side of the edge condition dz/du = 0 for
// the linear residual product, u = zG, normalized as L u (u-1) K'(u)/K(u) - 1.
// Negative just above u = 1 and positive for large u.
double endpoint_condition(const InitScheme& scheme, std::size_t depth, double u);

// z(u) = u K(u)^L / (u - 1) on the real axis, evaluated in logs.
double endpoint_lambda(const InitScheme& scheme, std::size_t depth, double u);

// Right edge of the spectrum of J J^T for L linear residual layers (p = 1).
// Brackets u - 1 over [1e-9, 1e6] on a 10^4-point log grid, then bisects.
// Throws BranchError when no sign change is found. A single orthogonal layer
// has no finite root; its edge (1 + sigma)^2 is returned directly.
double lambda_max_endpoint(const InitScheme& scheme, std::size_t depth);

// Large-depth limit of lambda_max_endpoint with sigma2 = c / L:
// (1 + c + sqrt(c^2 + 2c)) exp(sqrt(c^2 + 2c)).
double lambda_max_asymptotic(double c);

// sigma2 = target * L^(-1/m) for a network of depth L built from units of
// depth m.
double recommend_sigma2(std::size_t depth, std::size_t unit_depth, double target = 1.0);

} // namespace specres
