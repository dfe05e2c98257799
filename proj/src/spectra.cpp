#include "specres/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include "specres/error.hpp"
#include "specres/parallel.hpp"

namespace specres {

void accumulate_factor(Eigen::MatrixXd& product, const Eigen::MatrixXd& factor) {
  product = (factor * product).eval();
}

Eigen::MatrixXd jacobian_product(const JacobianFactors& factors) {
  if (factors.factors.empty()) throw ParameterError("empty factor list");
  const auto n = factors.factors.front().rows();
  for (const auto& f : factors.factors) {
    if (f.rows() != n || f.cols() != n) throw ParameterError("inconsistent factor shapes");
  }
  Eigen::MatrixXd j = factors.factors.front();
  for (std::size_t l = 1; l < factors.factors.size(); ++l) accumulate_factor(j, factors.factors[l]);
  return j;
}

std::vector<double> gram_eigenvalues(const Eigen::MatrixXd& jacobian) {
  if (jacobian.rows() == 0 || jacobian.rows() != jacobian.cols()) throw ParameterError("jacobian must be square");
  if (!jacobian.allFinite()) throw NumericalError("jacobian has non-finite entries");

  Eigen::MatrixXd gram(jacobian.rows(), jacobian.rows());
  gram.setZero();
  gram.selfadjointView<Eigen::Lower>().rankUpdate(jacobian);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "symmetric eigensolver did not converge (n=" << gram.rows() << ", trace=" << gram.trace()
       << ", max |entry|=" << gram.cwiseAbs().maxCoeff() << ")";
    throw NumericalError(os.str());
  }
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end());
  const double tol = -1e-8 * std::max(1.0, ev.back());
  if (ev.front() < tol) {
    std::ostringstream os;
    os << "negative Gram eigenvalue " << ev.front() << " below tolerance " << tol
       << " (condition estimate lambda_max/|lambda_min| = " << ev.back() / std::abs(ev.front()) << ")";
    throw NumericalError(os.str());
  }
  for (double& v : ev) v = std::max(v, 0.0);
  return ev;
}

std::vector<double> gram_eigenvalues(const JacobianFactors& factors) {
  return gram_eigenvalues(jacobian_product(factors));
}

namespace {

std::vector<double> trial_eigenvalues(const NetworkConfig& config, std::size_t trial) {
  LayerSampler sampler(config, StreamSource(config.seed, trial));
  Eigen::MatrixXd j = sampler.next();
  while (!sampler.done()) accumulate_factor(j, sampler.next());
  return gram_eigenvalues(j);
}

} // namespace

EmpiricalSpectrum empirical_spectrum(const NetworkConfig& config, std::size_t trials, SpectrumOptions options) {
  config.validate();
  if (trials < 1) throw ParameterError("trials must be >= 1");

  std::vector<std::vector<double>> blocks(trials);
  parallel_for(trials, options.threads, [&](std::size_t t) {
    blocks[t] = trial_eigenvalues(config, options.first_trial + t);
  });

  EmpiricalSpectrum out;
  out.trials = trials;
  out.config_digest = config.digest();
  out.eigenvalues.reserve(trials * config.width);
  for (const auto& b : blocks) out.eigenvalues.insert(out.eigenvalues.end(), b.begin(), b.end());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

EmpiricalSpectrum merge_spectra(const EmpiricalSpectrum& a, const EmpiricalSpectrum& b) {
  if (!a.config_digest.empty() && !b.config_digest.empty() && a.config_digest != b.config_digest) {
    throw ParameterError("cannot merge spectra of different configs");
  }
  EmpiricalSpectrum out;
  out.trials = a.trials + b.trials;
  out.config_digest = a.config_digest.empty() ? b.config_digest : a.config_digest;
  out.eigenvalues.reserve(a.eigenvalues.size() + b.eigenvalues.size());
  std::merge(a.eigenvalues.begin(), a.eigenvalues.end(), b.eigenvalues.begin(), b.eigenvalues.end(),
             std::back_inserter(out.eigenvalues));
  return out;
}

MomentSummary empirical_moments(const std::vector<double>& eigenvalues) {
  if (eigenvalues.empty()) throw ParameterError("empty spectrum");
  double s1 = 0.0, s2 = 0.0;
  for (double v : eigenvalues) {
    s1 += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(eigenvalues.size());
  return MomentSummary::from_moments(s1 / n, s2 / n);
}

MomentSummary empirical_moments(const EmpiricalSpectrum& spectrum) { return empirical_moments(spectrum.eigenvalues); }

double median(const EmpiricalSpectrum& spectrum) {
  const auto& ev = spectrum.eigenvalues;
  if (ev.empty()) throw ParameterError("empty spectrum");
  const std::size_t n = ev.size();
  return n % 2 ? ev[n / 2] : 0.5 * (ev[n / 2 - 1] + ev[n / 2]);
}

std::vector<HistogramBin> histogram(const EmpiricalSpectrum& spectrum, std::optional<std::size_t> bins,
                                    std::optional<std::pair<double, double>> range) {
  const auto& ev = spectrum.eigenvalues;
  if (ev.empty()) throw ParameterError("empty spectrum");
  if (bins && *bins < 1) throw ParameterError("bins must be >= 1");

  double lo = ev.front(), hi = ev.back();
  if (range) {
    lo = range->first;
    hi = range->second;
    if (!(lo < hi)) throw ParameterError("histogram range needs lo < hi");
  } else if (!(lo < hi)) {
    // Degenerate spectrum: one unit-width bin around the common value.
    lo -= 0.5;
    hi += 0.5;
  }

  std::size_t nbins = 0;
  if (bins) {
    nbins = *bins;
  } else {
    const std::size_t n = ev.size();
    const auto quantile = [&](double q) { return ev[static_cast<std::size_t>(q * static_cast<double>(n - 1))]; };
    const double iqr = quantile(0.75) - quantile(0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
    nbins = width > 0.0 ? static_cast<std::size_t>(std::ceil((hi - lo) / width)) : 1;
    nbins = std::clamp<std::size_t>(nbins, 1, 10000);
  }

  const double width = (hi - lo) / static_cast<double>(nbins);
  std::vector<double> counts(nbins, 0.0);
  std::size_t inside = 0;
  for (double v : ev) {
    if (v < lo || v > hi) continue;
    auto k = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(k, nbins - 1)] += 1.0;
    ++inside;
  }
  std::vector<HistogramBin> out(nbins);
  for (std::size_t k = 0; k < nbins; ++k) {
    out[k].center = lo + (static_cast<double>(k) + 0.5) * width;
    out[k].density = inside ? counts[k] / (static_cast<double>(inside) * width) : 0.0;
  }
  return out;
}

} // namespace specres
