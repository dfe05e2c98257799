#pragma once

#include <map>
#include <mutex>
#include <tuple>

#include "specres/freeprob.hpp"

namespace testing {

// Adaptive curves are a few seconds each; share them between test cases.
inline const specres::DensityCurve& cached_curve(const specres::TheoryModel& m, double eps = 1e-6) {
  using Key = std::tuple<int, double, double, std::size_t, double>;
  static std::map<Key, specres::DensityCurve> cache;
  static std::mutex mu;
  std::lock_guard lock(mu);
  const Key key{static_cast<int>(m.scheme.variant), m.scheme.sigma2, m.p, m.depth, eps};
  auto it = cache.find(key);
  if (it == cache.end()) {
    specres::AdaptiveOptions opt;
    opt.inversion.epsilon = eps;
    it = cache.emplace(key, specres::density_curve(m, opt)).first;
  }
  return it->second;
}

inline specres::TheoryModel gaussian(double sigma2, double p = 1.0, std::size_t depth = 1) {
  return {{specres::WeightScheme::gaussian, sigma2}, p, depth};
}

inline specres::TheoryModel orthogonal(double sigma2, double p = 1.0, std::size_t depth = 1) {
  return {{specres::WeightScheme::orthogonal, sigma2}, p, depth};
}

} // namespace testing
