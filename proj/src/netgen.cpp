#include "specres/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "specres/error.hpp"

namespace specres {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double fraction_nonzero(const Eigen::VectorXd& d) {
  if (d.size() == 0) return 0.0;
  return static_cast<double>((d.array() != 0.0).count()) / static_cast<double>(d.size());
}

// I + W diag(d), without forming diag(d).
Eigen::MatrixXd residual_factor(Eigen::MatrixXd w, const Eigen::VectorXd& d) {
  w.array().rowwise() *= d.transpose().array();
  w.diagonal().array() += 1.0;
  return w;
}

} // namespace

void NetworkConfig::validate() const {
  if (width < 1) throw ParameterError("width must be >= 1");
  if (depth < 1) throw ParameterError("depth must be >= 1");
  scheme.validate();
  if (!(bias_sigma2 >= 0.0) || !std::isfinite(bias_sigma2)) {
    throw ParameterError("bias_sigma2 must be nonnegative");
  }
  if (const auto* s = std::get_if<SurrogateGates>(&gates)) {
    if (s->p.empty()) throw ParameterError("surrogate gates need at least one probability");
    if (s->p.size() != 1 && s->p.size() != depth) {
      throw ParameterError("surrogate gates need 1 or depth (" + std::to_string(depth) + ") probabilities, got " +
                           std::to_string(s->p.size()));
    }
    for (double p : s->p) {
      if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("gate probability outside [0,1]: " + format_double(p));
    }
  }
}

std::string NetworkConfig::canonical() const {
  std::ostringstream os;
  os << "width=" << width << ";depth=" << depth << ";scheme=" << to_string(scheme.variant)
     << ";sigma2=" << format_double(scheme.sigma2) << ";nonlinearity=" << to_string(nonlinearity)
     << ";bias_sigma2=" << format_double(bias_sigma2) << ";seed=" << seed << ";gates=";
  if (const auto* s = std::get_if<SurrogateGates>(&gates)) {
    os << "surrogate:";
    for (std::size_t i = 0; i < s->p.size(); ++i) os << (i ? "," : "") << format_double(s->p[i]);
  } else {
    os << "forward";
  }
  return os.str();
}

std::string NetworkConfig::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Eigen::MatrixXd sample_gaussian_weights(std::size_t n, double sigma2, RandomStream& rng) {
  const double scale = std::sqrt(sigma2 / static_cast<double>(n));
  Eigen::MatrixXd w(n, n);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = scale * rng.normal();
  return w;
}

Eigen::MatrixXd sample_orthogonal_weights(std::size_t n, double sigma2, RandomStream& rng) {
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = rng.normal();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return std::sqrt(sigma2) * q;
}

Eigen::MatrixXd sample_weights(std::size_t n, const InitScheme& scheme, RandomStream& rng) {
  return scheme.variant == WeightScheme::gaussian ? sample_gaussian_weights(n, scheme.sigma2, rng)
                                                  : sample_orthogonal_weights(n, scheme.sigma2, rng);
}

Eigen::VectorXd sample_surrogate_gates(std::size_t n, double p, RandomStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("gate probability outside [0,1]: " + format_double(p));
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = rng.uniform() < p ? 1.0 : 0.0;
  return d;
}

Eigen::VectorXd sample_input(std::size_t n, const StreamSource& streams) {
  auto rng = streams.stream(0, Purpose::input);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
  return x;
}

double activation(Nonlinearity nl, double x) {
  switch (nl) {
    case Nonlinearity::linear: return x;
    case Nonlinearity::relu: return x > 0.0 ? x : 0.0;
    case Nonlinearity::hardtanh: return std::clamp(x, -1.0, 1.0);
  }
  return x;
}

double activation_derivative(Nonlinearity nl, double x) {
  switch (nl) {
    case Nonlinearity::linear: return 1.0;
    case Nonlinearity::relu: return x > 0.0 ? 1.0 : 0.0;
    case Nonlinearity::hardtanh: return std::abs(x) < 1.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

namespace {

// One step of x^l = x^{l-1} + W^l phi(x^{l-1}) + b^l. Returns D^l.
Eigen::VectorXd advance(const NetworkConfig& config, const StreamSource& streams, std::size_t layer,
                        const Eigen::MatrixXd& w, Eigen::VectorXd& x) {
  const auto nl = config.nonlinearity;
  Eigen::VectorXd d = x.unaryExpr([nl](double v) { return activation_derivative(nl, v); });
  Eigen::VectorXd phi = x.unaryExpr([nl](double v) { return activation(nl, v); });
  x += w * phi;
  if (config.bias_sigma2 > 0.0) {
    auto rng = streams.stream(layer, Purpose::bias);
    const double sd = std::sqrt(config.bias_sigma2);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += sd * rng.normal();
  }
  if (!x.allFinite()) throw DivergenceError(layer + 1, "non-finite activation after residual update");
  return d;
}

} // namespace

GateSample forward_pass(const NetworkConfig& config, const Eigen::VectorXd& x0, const StreamSource& streams) {
  config.validate();
  if (!std::holds_alternative<ForwardPassGates>(config.gates)) {
    throw ParameterError("forward_pass requires forward-pass gate mode");
  }
  if (static_cast<std::size_t>(x0.size()) != config.width) {
    throw ParameterError("input length " + std::to_string(x0.size()) + " != width " + std::to_string(config.width));
  }
  if (!x0.allFinite()) throw DivergenceError(0, "non-finite input");

  GateSample out;
  Eigen::VectorXd x = x0;
  for (std::size_t l = 0; l < config.depth; ++l) {
    auto rng = streams.stream(l, Purpose::weights);
    const Eigen::MatrixXd w = sample_weights(config.width, config.scheme, rng);
    Eigen::VectorXd d = advance(config, streams, l, w, x);
    out.fractions.push_back(fraction_nonzero(d));
    out.diagonals.push_back(std::move(d));
  }
  return out;
}

LayerSampler::LayerSampler(const NetworkConfig& config, const StreamSource& streams)
    : config_(config), streams_(streams) {
  config_.validate();
  if (std::holds_alternative<ForwardPassGates>(config_.gates)) x_ = sample_input(config_.width, streams_);
}

Eigen::MatrixXd LayerSampler::next(double* gate_fraction) {
  if (done()) throw ParameterError("LayerSampler exhausted");
  const std::size_t l = layer_++;
  auto wrng = streams_.stream(l, Purpose::weights);
  Eigen::MatrixXd w = sample_weights(config_.width, config_.scheme, wrng);

  Eigen::VectorXd d;
  if (const auto* s = std::get_if<SurrogateGates>(&config_.gates)) {
    auto grng = streams_.stream(l, Purpose::gates);
    d = sample_surrogate_gates(config_.width, s->probability(l), grng);
  } else {
    d = advance(config_, streams_, l, w, x_);
  }
  if (gate_fraction) *gate_fraction = fraction_nonzero(d);
  return residual_factor(std::move(w), d);
}

JacobianFactors assemble_jacobian(const NetworkConfig& config, const StreamSource& streams) {
  LayerSampler sampler(config, streams);
  JacobianFactors out;
  out.factors.reserve(config.depth);
  while (!sampler.done()) {
    double frac = 0.0;
    out.factors.push_back(sampler.next(&frac));
    out.gate_fractions.push_back(frac);
  }
  return out;
}

} // namespace specres
