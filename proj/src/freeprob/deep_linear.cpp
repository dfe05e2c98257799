#include "specres/freeprob/deep_linear.hpp"

#include <algorithm>
#include <cmath>

#include "continuation.hpp"
#include "specres/error.hpp"
#include "specres/freeprob/endpoint.hpp"

namespace specres {

namespace {

struct Eval {
  cplx f, df, root;
};

// F(G) = G K(u)^L - (u - 1) with u = zG; `root` is the continued square root
// inside K.
Eval evaluate(const TheoryModel& m, cplx z, cplx g, cplx root_ref) {
  const double s = m.scheme.sigma2;
  const double L = static_cast<double>(m.depth);
  const cplx u = z * g;
  cplx k, dk, root;
  if (m.scheme.variant == WeightScheme::gaussian) {
    root = detail::continued_sqrt((s - 1.0) * (s - 1.0) + 4.0 * s * u, root_ref);
    k = (root + 1.0 - s + 2.0 * s * u) / 2.0;
    dk = s * (1.0 / root + 1.0);
  } else {
    root = detail::continued_sqrt((1.0 - s) * (1.0 - s) + 4.0 * s * u * u, root_ref);
    const cplx num = (s + 1.0) * u + root;
    const cplx dnum = (s + 1.0) + 4.0 * s * u / root;
    k = num / (u + 1.0);
    dk = dnum / (u + 1.0) - num / ((u + 1.0) * (u + 1.0));
  }
  const cplx kl1 = std::pow(k, L - 1.0);
  const cplx kl = kl1 * k;
  return {g * kl - (u - 1.0), kl + g * L * kl1 * dk * z - z, root};
}

struct State {
  cplx g, root;
};

bool converged(const Eval& e, cplx z, cplx g) { return std::abs(e.f) <= 1e-10 * std::max(1.0, std::abs(z * g)); }

// Damped Newton at fixed z.
bool newton(const TheoryModel& m, cplx z, State& st) {
  State cur = st;
  Eval e = evaluate(m, z, cur.g, cur.root);
  cur.root = e.root;
  for (int it = 0; it < 100; ++it) {
    if (e.df == cplx(0.0) || !std::isfinite(std::abs(e.df))) return false;
    const cplx step = e.f / e.df;
    if (std::abs(step) <= 1e-14 * std::abs(cur.g)) {
      cur.g -= step;
      e = evaluate(m, z, cur.g, cur.root);
      cur.root = e.root;
      st = cur;
      return converged(e, z, cur.g);
    }
    double lambda = 1.0;
    State next;
    Eval en;
    bool decreased = false;
    for (int halvings = 0; halvings <= 40; ++halvings, lambda *= 0.5) {
      next.g = cur.g - lambda * step;
      en = evaluate(m, z, next.g, cur.root);
      next.root = en.root;
      if (std::isfinite(std::abs(en.f)) && std::abs(en.f) < std::abs(e.f)) {
        decreased = true;
        break;
      }
    }
    if (!decreased) {
      // No descent possible: either converged to rounding level or stuck.
      if (!converged(e, z, cur.g)) return false;
      st = cur;
      return true;
    }
    cur = next;
    e = en;
  }
  if (!converged(e, z, cur.g)) return false;
  st = cur;
  return true;
}

double initial_root(const TheoryModel& m) { return m.scheme.sigma2 + 1.0; }

} // namespace

DeepLinearSolver::DeepLinearSolver(const TheoryModel& model) : model_(model) {
  model_.validate();
  if (model_.p != 1.0) throw ParameterError("deep-linear curves require p = 1");
  try {
    anchor_scale_ = lambda_max_endpoint(model_.scheme, model_.depth);
  } catch (const BranchError&) {
    anchor_scale_ = std::pow(1.0 + model_.scheme.sigma2, static_cast<double>(model_.depth)) * 4.0;
  }
  anchor_scale_ = std::max(1.0, anchor_scale_);
}

std::vector<StieltjesSample> DeepLinearSolver::path(double x, std::span<const double> heights) const {
  std::vector<StieltjesSample> out;
  out.reserve(heights.size());
  for (std::size_t k = 0; k < heights.size(); ++k) {
    if (!(heights[k] > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
    if (k > 0 && !(heights[k] < heights[k - 1])) throw ParameterError("heights must be strictly descending");
  }
  if (heights.empty()) return out;
  const cplx first(x, heights.front());
  const double top = std::max(heights.front(), 10.0 * std::max({1.0, std::abs(first), anchor_scale_}));
  const cplx za(x, top);
  State st{1.0 / za, initial_root(model_)};
  if (!newton(model_, za, st))
    throw BranchError("Newton failed at the anchor of " + detail::path_description(first, top));
  double eta = top;
  for (double target : heights) {
    if (target < eta) {
      detail::descend(x, eta, target, [&](double h, bool forced) {
        State trial = st;
        const bool ok = newton(model_, cplx(x, h), trial);
        const bool jump = std::abs(trial.g - st.g) > 0.3 * std::abs(st.g);
        if (ok && !jump) {
          st = trial;
          return true;
        }
        if (!forced) return false;
        throw BranchError("Newton diverged at Im z = " + std::to_string(h) + " on " +
                          detail::path_description(cplx(x, target), top));
      });
      eta = target;
    }
    const cplx z(x, target);
    const Eval e = evaluate(model_, z, st.g, st.root);
    out.push_back({z, st.g, std::abs(e.f)});
  }
  return out;
}

StieltjesSample DeepLinearSolver::operator()(cplx z) const {
  if (!(z.imag() > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
  const double h[] = {z.imag()};
  return path(z.real(), h).front();
}

StieltjesSample deep_linear_G(const TheoryModel& model, cplx z) { return DeepLinearSolver(model)(z); }

} // namespace specres
