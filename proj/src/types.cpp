#include "specres/types.hpp"

#include <cmath>

#include "specres/error.hpp"

namespace specres {

void InitScheme::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw ParameterError("sigma2 must be positive and finite, got " + std::to_string(sigma2));
  }
}

std::string_view to_string(WeightScheme s) {
  return s == WeightScheme::gaussian ? "gaussian" : "orthogonal";
}

std::string_view to_string(Nonlinearity n) {
  switch (n) {
    case Nonlinearity::linear: return "linear";
    case Nonlinearity::relu: return "relu";
    case Nonlinearity::hardtanh: return "hardtanh";
  }
  return "unknown";
}

WeightScheme parse_scheme(std::string_view s) {
  if (s == "gaussian") return WeightScheme::gaussian;
  if (s == "orthogonal") return WeightScheme::orthogonal;
  throw ParameterError("unknown weight scheme '" + std::string(s) + "'");
}

Nonlinearity parse_nonlinearity(std::string_view s) {
  if (s == "linear") return Nonlinearity::linear;
  if (s == "relu") return Nonlinearity::relu;
  if (s == "hardtanh") return Nonlinearity::hardtanh;
  throw ParameterError("unknown nonlinearity '" + std::string(s) + "'");
}

} // namespace specres
