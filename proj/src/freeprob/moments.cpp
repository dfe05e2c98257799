#include "specres/freeprob/moments.hpp"

#include <cmath>
#include <string>

#include "specres/error.hpp"

namespace specres {

MomentSummary layer_moments(const LayerSpec& layer) {
  layer.scheme.validate();
  if (!(layer.p >= 0.0 && layer.p <= 1.0)) throw ParameterError("gate probability p must lie in [0,1]");
  const double s = layer.scheme.sigma2;
  const double sp = s * layer.p;
  const double m1 = 1.0 + sp;
  const double m2 = layer.scheme.variant == WeightScheme::gaussian ? 1.0 + sp * (4.0 + s + sp) : 1.0 + sp * (4.0 + s);
  return MomentSummary::from_moments(m1, m2);
}

MomentSummary single_layer_moments(const TheoryModel& model) {
  model.validate();
  return layer_moments({model.scheme, model.p});
}

MomentSummary multi_layer_moments(std::span<const LayerSpec> layers) {
  if (layers.empty()) throw ParameterError("need at least one layer");
  if (layers.size() == 1) return layer_moments(layers.front());
  double mean = 1.0;
  double spread = 0.0;
  for (const LayerSpec& layer : layers) {
    const MomentSummary m = layer_moments(layer);
    mean *= m.m1;
    spread += m.variance / (m.m1 * m.m1);
  }
  const double variance = mean * mean * spread;
  MomentSummary out;
  out.m1 = mean;
  out.mean = mean;
  out.variance = variance;
  out.m2 = variance + mean * mean;
  return out;
}

MomentSummary theory_moments(const TheoryModel& model) {
  model.validate();
  std::vector<LayerSpec> layers(model.depth, LayerSpec{model.scheme, model.p});
  return multi_layer_moments(layers);
}

double curve_mass(const DensityCurve& curve) {
  double mass = 0.0;
  for (std::size_t k = 1; k < curve.size(); ++k)
    mass += 0.5 * (curve.rho[k] + curve.rho[k - 1]) * (curve.lambdas[k] - curve.lambdas[k - 1]);
  return mass;
}

std::vector<double> stieltjes_to_moments(const DensityCurve& curve, int k_max) {
  if (k_max < 1) throw ParameterError("k_max must be >= 1");
  if (curve.size() < 2) throw IntegrityError("density curve needs at least two grid points");
  const double mass = curve_mass(curve);
  if (!(std::abs(mass - 1.0) <= 1e-2))
    throw IntegrityError("density curve integrates to " + std::to_string(mass) + ", not 1");
  std::vector<double> out(static_cast<std::size_t>(k_max), 0.0);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double h = curve.lambdas[i] - curve.lambdas[i - 1];
    double pa = curve.lambdas[i - 1], pb = curve.lambdas[i];
    for (int k = 0; k < k_max; ++k) {
      out[static_cast<std::size_t>(k)] += 0.5 * h * (curve.rho[i - 1] * pa + curve.rho[i] * pb);
      pa *= curve.lambdas[i - 1];
      pb *= curve.lambdas[i];
    }
  }
  return out;
}

} // namespace specres
