#pragma once

#include <string>
#include <string_view>

namespace specres {

enum class WeightScheme { gaussian, orthogonal };

// Weight initialization: Gaussian entries with variance sigma2 / N, or a
// scaled Haar orthogonal matrix with W W^T = sigma2 I.
struct InitScheme {
  WeightScheme variant = WeightScheme::gaussian;
  double sigma2 = 1.0;

  void validate() const;
};

enum class Nonlinearity { linear, relu, hardtanh };

// First two spectral moments m_k = \int rho(l) l^k dl.
struct MomentSummary {
  double m1 = 0.0;
  double m2 = 0.0;
  double mean = 0.0;
  double variance = 0.0;

  static MomentSummary from_moments(double m1, double m2) {
    return MomentSummary{m1, m2, m1, m2 - m1 * m1};
  }
};

std::string_view to_string(WeightScheme s);
std::string_view to_string(Nonlinearity n);
WeightScheme parse_scheme(std::string_view s);
Nonlinearity parse_nonlinearity(std::string_view s);

} // namespace specres
