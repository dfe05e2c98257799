#include "specres/freeprob/model.hpp"

#include "specres/error.hpp"

namespace specres {

void TheoryModel::validate() const {
  scheme.validate();
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("gate probability p must lie in [0,1]");
  if (depth < 1) throw ParameterError("depth must be >= 1");
}

std::string_view to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::quartic_gaussian: return "quartic-gaussian";
    case ModelTag::cubic_orthogonal: return "cubic-orthogonal";
    case ModelTag::deep_linear_gaussian: return "deep-linear-gaussian";
    case ModelTag::deep_linear_orthogonal: return "deep-linear-orthogonal";
  }
  return "unknown";
}

ModelTag model_tag(const TheoryModel& model) {
  const bool gauss = model.scheme.variant == WeightScheme::gaussian;
  if (model.depth == 1) return gauss ? ModelTag::quartic_gaussian : ModelTag::cubic_orthogonal;
  return gauss ? ModelTag::deep_linear_gaussian : ModelTag::deep_linear_orthogonal;
}

} // namespace specres
