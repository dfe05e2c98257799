#pragma once

#include <span>
#include <vector>

#include "specres/freeprob/model.hpp"

namespace specres {

// Stieltjes transform of J J^T for L linear residual layers (p = 1), from
//   Gaussian:   G (sqrt((s-1)^2 + 4 s zG) + 1 - s + 2 s zG)^L = 2^L (zG - 1)
//   orthogonal: G ((s+1) zG + sqrt((1-s)^2 + 4 s (zG)^2))^L = (zG + 1)^L (zG - 1)
// with s = sigma2. Both are solved in the normalized form
// G K(zG)^L - (zG - 1) = 0 and the reported residual is |G K^L - zG + 1|.
class DeepLinearSolver {
public:
  explicit DeepLinearSolver(const TheoryModel& model);

  StieltjesSample operator()(cplx z) const;
  // G continued down Re z = x, reported at each strictly descending height.
  std::vector<StieltjesSample> path(double x, std::span<const double> heights) const;

  const TheoryModel& model() const { return model_; }
  // Height of the continuation anchor above the real axis.
  double anchor_scale() const { return anchor_scale_; }

private:
  TheoryModel model_;
  double anchor_scale_;
};

StieltjesSample deep_linear_G(const TheoryModel& model, cplx z);

} // namespace specres
