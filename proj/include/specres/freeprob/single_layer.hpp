#pragma once

#include <span>
#include <vector>

#include "specres/freeprob/model.hpp"

namespace specres {

// Gaussian weights: quartic c4 G^4 + ... + c0 = 0 in G = G_{JJ^T}(z).
std::vector<cplx> gaussian_quartic(double sigma2, double p, cplx z);

// Orthogonal weights: cubic c3 G^3 + ... + c0 = 0.
std::vector<cplx> orthogonal_cubic(double sigma2, double p, cplx z);

std::vector<cplx> single_layer_coefficients(const TheoryModel& model, cplx z);

// Upper bound on the single-layer spectrum: (1 + 2 sigma)^2 for Gaussian,
// (1 + sigma)^2 for orthogonal weights.
double single_layer_support_bound(const TheoryModel& model);

// The root of the single-layer polynomial continued from G ~ 1/z at a large
// anchor straight down to z. Throws BranchError if the tracked root is not
// a valid Stieltjes transform value (Im G > 0).
StieltjesSample solve_single_layer_G(const TheoryModel& model, cplx z);

// The same root continued down the vertical line Re z = x, reported at each
// of the strictly descending heights.
std::vector<StieltjesSample> single_layer_path(const TheoryModel& model, double x, std::span<const double> heights);

} // namespace specres
