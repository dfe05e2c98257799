#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specres/netgen.hpp"
#include "specres/types.hpp"

namespace specres {

// Pooled eigenvalues of J J^T, sorted ascending.
struct EmpiricalSpectrum {
  std::vector<double> eigenvalues;
  std::size_t trials = 0;
  std::string config_digest;
};

struct HistogramBin {
  double center;
  double density;
};

// J = F_L ... F_1, the chain-rule product of the layer factors.
Eigen::MatrixXd jacobian_product(const JacobianFactors& factors);

// Left-multiplies the running product by one more factor.
void accumulate_factor(Eigen::MatrixXd& product, const Eigen::MatrixXd& factor);

// Eigenvalues of J J^T for a given J, sorted ascending. Round-off negatives
// down to -1e-8 * max(1, lambda_max) are clamped to zero; anything below
// that raises NumericalError.
std::vector<double> gram_eigenvalues(const Eigen::MatrixXd& jacobian);
std::vector<double> gram_eigenvalues(const JacobianFactors& factors);

struct SpectrumOptions {
  std::size_t threads = 0; // 0: hardware concurrency
  std::size_t first_trial = 0;
};

// Pools N * trials eigenvalues over trials first_trial .. first_trial+trials-1.
EmpiricalSpectrum empirical_spectrum(const NetworkConfig& config, std::size_t trials, SpectrumOptions options = {});

// Sorted union of two pooled spectra of the same config.
EmpiricalSpectrum merge_spectra(const EmpiricalSpectrum& a, const EmpiricalSpectrum& b);

MomentSummary empirical_moments(const EmpiricalSpectrum& spectrum);
MomentSummary empirical_moments(const std::vector<double>& eigenvalues);

// Density histogram normalized to unit mass over the chosen range. With no
// bin count the Freedman-Diaconis rule is used; with no range, [min, max].
std::vector<HistogramBin> histogram(const EmpiricalSpectrum& spectrum, std::optional<std::size_t> bins = std::nullopt,
                                    std::optional<std::pair<double, double>> range = std::nullopt);

double median(const EmpiricalSpectrum& spectrum);

} // namespace specres
