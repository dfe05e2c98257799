#pragma once

#include <span>
#include <vector>

#include "specres/freeprob/model.hpp"

namespace specres {

// Coefficients are ordered from the highest degree down to the constant.
cplx polynomial_value(std::span<const cplx> coeffs, cplx x);

// |P(x)| / sum_k |c_k| |x|^k, a backward-error style residual.
double polynomial_residual(std::span<const cplx> coeffs, cplx x);

// All roots via eigenvalues of the balanced companion matrix, each polished
// by Newton steps on the original polynomial. Leading coefficients that are
// exactly zero are dropped.
std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs);

} // namespace specres
