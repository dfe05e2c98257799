#include "specres/freeprob/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "continuation.hpp"
#include "specres/error.hpp"
#include "specres/freeprob/single_layer.hpp"

namespace specres {

cplx r_tilde_haar(cplx w) {
  if (w == cplx(0.0)) throw DomainError("R-transform undefined at w = 0");
  return (std::sqrt(1.0 + 4.0 * w * w) - 1.0) / (2.0 * w);
}

cplx r_tilde_gated(cplx w, double sigma2, double p) {
  if (w == cplx(0.0)) throw DomainError("R-transform undefined at w = 0");
  const cplx q = 1.0 - sigma2 * w * w;
  const cplx b = std::sqrt(4.0 * p * sigma2 * w * w + q * q);
  return (-1.0 + sigma2 * w * w + b) / (2.0 * w);
}

namespace {

// w = sqrt(z) G together with the continued square roots
// A = sqrt(1 + 4 w^2) and B = sqrt(4 p s w^2 + (1 - s w^2)^2).
struct MasterState {
  cplx w, a, b;
};

struct MasterTerms {
  cplx a, b, f, df;
};

MasterTerms master_terms(cplx sz, cplx w, double s, double p, cplx a_ref, cplx b_ref) {
  const cplx w2 = w * w;
  const cplx q = 1.0 - s * w2;
  const cplx a = detail::continued_sqrt(1.0 + 4.0 * w2, a_ref);
  const cplx b = detail::continued_sqrt(4.0 * p * s * w2 + q * q, b_ref);
  const cplx da = 4.0 * w / a;
  const cplx db = (4.0 * p * s * w - 2.0 * s * w * q) / b;
  const cplx f = sz - (a + b) / (2.0 * w) - 0.5 * s * w;
  const cplx df = -(da + db) / (2.0 * w) + (a + b) / (2.0 * w2) - 0.5 * s;
  return {a, b, f, df};
}

// Newton on the master equation at fixed z, starting from `st`.
bool master_newton(cplx z, double s, double p, MasterState& st) {
  const cplx sz = std::sqrt(z);
  MasterState cur = st;
  for (int it = 0; it < 80; ++it) {
    const MasterTerms t = master_terms(sz, cur.w, s, p, cur.a, cur.b);
    cur.a = t.a;
    cur.b = t.b;
    if (t.df == cplx(0.0) || !std::isfinite(std::abs(t.df))) return false;
    const cplx dw = t.f / t.df;
    cur.w -= dw;
    if (!std::isfinite(std::abs(cur.w))) return false;
    if (std::abs(dw) <= 1e-15 * std::max(1e-300, std::abs(cur.w))) {
      const MasterTerms fin = master_terms(sz, cur.w, s, p, cur.a, cur.b);
      cur.a = fin.a;
      cur.b = fin.b;
      st = cur;
      return true;
    }
  }
  const MasterTerms fin = master_terms(sz, cur.w, s, p, cur.a, cur.b);
  if (std::abs(fin.f) > 1e-10 * std::max(1.0, std::abs(sz))) return false;
  cur.a = fin.a;
  cur.b = fin.b;
  st = cur;
  return true;
}

MasterState track_master(const TheoryModel& model, cplx z) {
  model.validate();
  if (model.depth != 1) throw ParameterError("master equation applies to a single layer");
  if (model.scheme.variant != WeightScheme::gaussian)
    throw ParameterError("master equation check is implemented for Gaussian weights only");
  if (!(z.imag() > 0.0)) throw DomainError("master equation needs Im z > 0");
  const double s = model.scheme.sigma2;
  const double p = model.p;
  const double x = z.real();
  const double top = 10.0 * std::max({1.0, std::abs(z), single_layer_support_bound(model)});

  const double anchor = std::max(top, z.imag());
  const cplx za(x, anchor);
  MasterState st{1.0 / std::sqrt(za), 1.0, 1.0};
  if (!master_newton(za, s, p, st))
    throw BranchError("master equation Newton failed at the anchor of " + detail::path_description(z, anchor));
  if (anchor > z.imag()) {
    detail::descend(x, anchor, z.imag(), [&](double eta, bool forced) {
      MasterState trial = st;
      const bool ok = master_newton(cplx(x, eta), s, p, trial);
      const bool jump = std::abs(trial.w - st.w) > 0.3 * std::abs(st.w);
      if (!forced && (!ok || jump)) return false;
      if (forced && !ok)
        throw BranchError("master equation Newton failed at Im z = " + std::to_string(eta) + " on " +
                          detail::path_description(z, anchor));
      st = trial;
      return true;
    });
  }
  return st;
}

} // namespace

StieltjesSample solve_master_equation(const TheoryModel& model, cplx z) {
  const MasterState st = track_master(model, z);
  const cplx sz = std::sqrt(z);
  const MasterTerms t = master_terms(sz, st.w, model.scheme.sigma2, model.p, st.a, st.b);
  return {z, st.w / sz, std::abs(t.f)};
}

double master_equation_residual(const TheoryModel& model, cplx z, cplx G) {
  if (G == cplx(0.0)) throw DomainError("master equation residual undefined at G = 0");
  const MasterState st = track_master(model, z);
  const cplx sz = std::sqrt(z);
  const MasterTerms t = master_terms(sz, sz * G, model.scheme.sigma2, model.p, st.a, st.b);
  return std::abs(t.f);
}

} // namespace specres
