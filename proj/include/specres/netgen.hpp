#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "specres/rng.hpp"
#include "specres/types.hpp"

namespace specres {

// Gates are phi'(x^{l-1}) from an actual forward pass.
struct ForwardPassGates {};

// Gates are i.i.d. Bernoulli(p_l), drawn independently of the weights. A
// single probability applies to every layer; otherwise one per layer.
struct SurrogateGates {
  std::vector<double> p;

  double probability(std::size_t layer) const { return p.size() == 1 ? p.front() : p.at(layer); }
};

using GateMode = std::variant<ForwardPassGates, SurrogateGates>;

// One random residual-network ensemble x^l = x^{l-1} + W^l phi(x^{l-1}) + b^l.
struct NetworkConfig {
  std::size_t width = 1;
  std::size_t depth = 1;
  InitScheme scheme;
  Nonlinearity nonlinearity = Nonlinearity::relu;
  double bias_sigma2 = 0.0;
  std::uint64_t seed = 0;
  GateMode gates = ForwardPassGates{};

  void validate() const;

  // Canonical text form; stable across runs and used for digests/manifests.
  std::string canonical() const;
  // 16 hex digits (FNV-1a over canonical()).
  std::string digest() const;
};

// Per-layer Jacobians I + W^l D^l, stored in layer order l = 1..L.
struct JacobianFactors {
  std::vector<Eigen::MatrixXd> factors;
  std::vector<double> gate_fractions;

  std::size_t width() const { return factors.empty() ? 0 : static_cast<std::size_t>(factors.front().rows()); }
  std::size_t depth() const { return factors.size(); }
};

struct GateSample {
  std::vector<Eigen::VectorXd> diagonals;
  std::vector<double> fractions;
};

Eigen::MatrixXd sample_gaussian_weights(std::size_t n, double sigma2, RandomStream& rng);

// sigma * Q with Q Haar distributed: QR of a Gaussian matrix, columns
// re-signed so that R has a positive diagonal.
Eigen::MatrixXd sample_orthogonal_weights(std::size_t n, double sigma2, RandomStream& rng);

Eigen::MatrixXd sample_weights(std::size_t n, const InitScheme& scheme, RandomStream& rng);

// i.i.d. Bernoulli(p) diagonal.
Eigen::VectorXd sample_surrogate_gates(std::size_t n, double p, RandomStream& rng);

// Standard normal input vector for a trial.
Eigen::VectorXd sample_input(std::size_t n, const StreamSource& streams);

double activation(Nonlinearity nl, double x);
double activation_derivative(Nonlinearity nl, double x);

// Runs the network on x0 with the trial's weights and returns the gate
// diagonals D^l_ii = phi'(x_i^{l-1}). Requires ForwardPassGates.
// Throws DivergenceError on non-finite activations.
GateSample forward_pass(const NetworkConfig& config, const Eigen::VectorXd& x0, const StreamSource& streams);

// Streams the Jacobian factors of one trial layer by layer so that callers
// can accumulate the product without holding all L matrices.
class LayerSampler {
public:
  LayerSampler(const NetworkConfig& config, const StreamSource& streams);

  bool done() const { return layer_ >= config_.depth; }
  std::size_t layer() const { return layer_; }

  // Returns I + W^l D^l for the current layer and advances.
  Eigen::MatrixXd next(double* gate_fraction = nullptr);

private:
  NetworkConfig config_;
  StreamSource streams_;
  std::size_t layer_ = 0;
  Eigen::VectorXd x_;
};

JacobianFactors assemble_jacobian(const NetworkConfig& config, const StreamSource& streams);

} // namespace specres
