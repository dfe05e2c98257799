#pragma once

#include <span>
#include <vector>

#include "specres/freeprob/model.hpp"
#include "specres/types.hpp"

namespace specres {

// One residual layer I + W D in a heterogeneous stack.
struct LayerSpec {
  InitScheme scheme;
  double p = 1.0;
};

// First two moments of the spectrum of J J^T for a single layer.
//   Gaussian:   m1 = 1 + s p, m2 = 1 + s p (4 + s + s p)
//   orthogonal: m1 = 1 + s p, m2 = 1 + s p (4 + s)
MomentSummary single_layer_moments(const TheoryModel& model);
MomentSummary layer_moments(const LayerSpec& layer);

// mean = prod m1_l, variance = mean^2 * sum (m2_l - m1_l^2) / m1_l^2.
MomentSummary multi_layer_moments(std::span<const LayerSpec> layers);

// Homogeneous stack of model.depth layers.
MomentSummary theory_moments(const TheoryModel& model);

// m_1 .. m_kmax by the trapezoid rule. Throws IntegrityError if the curve's
// mass differs from 1 by more than 1e-2.
std::vector<double> stieltjes_to_moments(const DensityCurve& curve, int k_max);

// Trapezoid integral of rho over the curve's grid.
double curve_mass(const DensityCurve& curve);

} // namespace specres
