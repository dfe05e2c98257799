#pragma once

#include "specres/freeprob/model.hpp"

namespace specres {

// R-transform of the symmetrized singular law of a Haar unitary,
// (sqrt(4 + w^-2) - w^-1) / 2, evaluated as (sqrt(1 + 4w^2) - 1) / (2w) with
// the principal root (the branch with R(w) -> 0 as w -> 0).
cplx r_tilde_haar(cplx w);

// R-transform of the symmetrized singular law of W D for Gaussian W with
// variance sigma2 / N and Bernoulli(p) gates D:
// (-w^-1 + sigma2 w + sqrt(4 p sigma2 + (w^-1 - sigma2 w)^2)) / 2, with the
// square root taken as w^-1 sqrt(4 p sigma2 w^2 + (1 - sigma2 w^2)^2).
cplx r_tilde_gated(cplx w, double sigma2, double p);

// Solves sqrt(z) = R_U(sqrt(z) G) + R_WD(sqrt(z) G) + 1/(sqrt(z) G) for G
// directly (Newton along a vertical path from a large anchor, square-root
// branches continued along the path). Gaussian single-layer models only.
StieltjesSample solve_master_equation(const TheoryModel& model, cplx z);

// |sqrt(z) - R_U(w) - R_WD(w) - 1/w| at w = sqrt(z) G, with the R-transform
// branches fixed by continuation of the master equation's own solution from
// the large-|z| anchor to z. Does not use the quartic.
double master_equation_residual(const TheoryModel& model, cplx z, cplx G);

} // namespace specres
