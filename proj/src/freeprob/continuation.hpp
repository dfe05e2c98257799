#pragma once

#include <cmath>
#include <sstream>

#include "specres/error.hpp"
#include "specres/freeprob/model.hpp"

namespace specres::detail {

// Walks Im z from `top` down to `bottom` (Re z fixed) on a geometric ladder.
// step(eta, forced) tries to move the tracked state to height eta and
// returns false to request a smaller step; after max_halvings the step is
// retried with forced = true and must be taken.
template <class Step>
void descend(double x, double top, double bottom, Step&& step, int per_decade = 16, int max_halvings = 12) {
  const double ratio = std::pow(10.0, -1.0 / per_decade);
  double eta = top;
  while (eta > bottom) {
    double next = std::max(eta * ratio, bottom);
    int halvings = 0;
    while (!step(next, false)) {
      if (++halvings > max_halvings) {
        step(next, true);
        break;
      }
      next = std::sqrt(eta * next);
    }
    eta = next;
  }
  (void)x;
}

inline std::string path_description(cplx z, double top) {
  std::ostringstream os;
  os << "vertical path Re z = " << z.real() << ", Im z from " << top << " down to " << z.imag();
  return os.str();
}

// Square root on the branch closest to a reference value.
inline cplx continued_sqrt(cplx arg, cplx reference) {
  const cplx s = std::sqrt(arg);
  return std::abs(s - reference) <= std::abs(-s - reference) ? s : -s;
}

} // namespace specres::detail
