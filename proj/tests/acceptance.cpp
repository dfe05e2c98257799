// Acceptance gate: one PASS/FAIL line per criterion, followed by the
// individual measurements. Usage: acceptance [criterion ...] (default: all).
#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "specres/compare.hpp"
#include "specres/freeprob.hpp"
#include "specres/spectra.hpp"

using namespace specres;

namespace {

struct Check {
  std::string what;
  bool ok;
};

struct Outcome {
  std::string title;
  std::vector<Check> checks;

  void add(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::add(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  checks.push_back({buf, ok});
}

bool within(double value, double target, double rel) { return std::abs(value - target) <= rel * std::abs(target); }

NetworkConfig surrogate(std::size_t n, std::size_t depth, InitScheme scheme, std::vector<double> p, std::uint64_t seed) {
  NetworkConfig cfg;
  cfg.width = n;
  cfg.depth = depth;
  cfg.scheme = scheme;
  cfg.gates = SurrogateGates{std::move(p)};
  cfg.seed = seed;
  return cfg;
}

Outcome criterion1() {
  Outcome o{"single-layer moments at N=1000, sigma2=1, p=1, 20 trials", {}};
  struct Row {
    WeightScheme scheme;
    double variance;
  };
  for (Row r : {Row{WeightScheme::gaussian, 3.0}, Row{WeightScheme::orthogonal, 2.0}}) {
    const auto s = empirical_spectrum(surrogate(1000, 1, {r.scheme, 1.0}, {1.0}, 1001), 20);
    const MomentSummary m = empirical_moments(s);
    const std::string name(to_string(r.scheme));
    o.add(within(m.mean, 2.0, 0.03), "%s mean %.5f vs 2 (tol 3%%)", name.c_str(), m.mean);
    o.add(within(m.variance, r.variance, 0.08), "%s variance %.5f vs %g (tol 8%%)", name.c_str(), m.variance, r.variance);
  }
  return o;
}

Outcome criterion2() {
  Outcome o{"theory density normalization and moments, sigma2 in {0.1, 1}, p in {0.5, 1}", {}};
  for (auto scheme : {WeightScheme::gaussian, WeightScheme::orthogonal})
    for (double s2 : {0.1, 1.0})
      for (double p : {0.5, 1.0}) {
        const TheoryModel m{{scheme, s2}, p, 1};
        const DensityCurve c = density_curve(m);
        const double mass = curve_mass(c);
        const auto mom = stieltjes_to_moments(c, 2);
        const MomentSummary th = single_layer_moments(m);
        const std::string name(to_string(scheme));
        o.add(std::abs(mass - 1.0) <= 5e-3, "%s sigma2=%g p=%g mass %.6f (tol 5e-3, %zu points)", name.c_str(), s2, p,
              mass, c.size());
        o.add(within(mom[0], th.m1, 0.01), "%s sigma2=%g p=%g m1 %.6f vs %.6f (tol 1%%)", name.c_str(), s2, p, mom[0],
              th.m1);
        o.add(within(mom[1], th.m2, 0.02), "%s sigma2=%g p=%g m2 %.6f vs %.6f (tol 2%%)", name.c_str(), s2, p, mom[1],
              th.m2);
      }
  return o;
}

Outcome criterion3() {
  Outcome o{"quartic roots satisfy the master equation on a 200-point grid", {}};
  for (double s2 : {0.1, 1.0})
    for (double p : {0.5, 1.0}) {
      const TheoryModel m{{WeightScheme::gaussian, s2}, p, 1};
      double worst = 0.0, at = 0.0;
      for (int k = 0; k < 200; ++k) {
        const double x = 0.05 * std::pow(1000.0, k / 199.0);
        const cplx z = x * cplx(1.0, 1e-6);
        const double r = master_equation_residual(m, z, solve_single_layer_G(m, z).G);
        if (r > worst) {
          worst = r;
          at = x;
        }
      }
      o.add(worst < 1e-8, "gaussian sigma2=%g p=%g max residual %.3g at lambda=%.4g (tol 1e-8)", s2, p, worst, at);
    }
  return o;
}

Outcome criterion4() {
  Outcome o{"single-layer KS(empirical N=400 x 10 trials, theory) < 0.05", {}};
  for (double p : {0.5, 1.0}) {
    int k = 0;
    for (auto scheme : {WeightScheme::gaussian, WeightScheme::orthogonal})
      for (double s2 : {0.1, 1.0}) {
        const TheoryModel m{{scheme, s2}, p, 1};
        const auto s = empirical_spectrum(surrogate(400, 1, m.scheme, {p}, 4000 + k), 10);
        const ComparisonReport r = compare(s, density_curve(m), m);
        o.add(r.ks < 0.05, "%s sigma2=%g p=%g: ks %.4f w1 %.4f m1 err %.4f m2 err %.4f",
              std::string(to_string(scheme)).c_str(), s2, p, r.ks, r.w1, r.m1_rel_err, r.m2_rel_err);
        ++k;
      }
  }
  return o;
}

Outcome criterion5() {
  Outcome o{"deep-linear solver at L=1 agrees with the single-layer solver (1e-8)", {}};
  for (auto scheme : {WeightScheme::gaussian, WeightScheme::orthogonal})
    for (double s2 : {0.1, 1.0}) {
      const TheoryModel m{{scheme, s2}, 1.0, 1};
      const DeepLinearSolver deep(m);
      const double hi = 1.05 * single_layer_support_bound(m);
      double worst = 0.0;
      for (int k = 0; k < 400; ++k) {
        const cplx z(hi * (k + 0.5) / 400.0, 1e-6);
        worst = std::max(worst, std::abs(deep(z).G - solve_single_layer_G(m, z).G));
      }
      o.add(worst < 1e-8, "%s sigma2=%g max |dG| %.3g over 400 points", std::string(to_string(scheme)).c_str(), s2, worst);
    }
  return o;
}

Outcome criterion6() {
  Outcome o{"lambda_max law at L=256", {}};
  const std::size_t L = 256;
  for (auto scheme : {WeightScheme::gaussian, WeightScheme::orthogonal})
    for (double c : {0.5, 1.0, 2.0}) {
      const std::string name(to_string(scheme));
      const double target = lambda_max_asymptotic(c);
      const double v = lambda_max_endpoint({scheme, c / L}, L);
      o.add(within(v, target, 0.01), "%s sigma2=c/L c=%g: lambda_max %.5f vs %.5f, rel gap %.4f (tol 0.01)", name.c_str(),
            c, v, target, std::abs(v - target) / target);
      const double w = lambda_max_endpoint({scheme, c * c / double(L * L)}, L);
      o.add(within(w, 1.0, 0.01), "%s sigma=c/L c=%g: lambda_max %.5f vs 1, rel gap %.4f (tol 0.01)", name.c_str(), c, w,
            std::abs(w - 1.0));
    }
  return o;
}

Outcome criterion7() {
  Outcome o{"empirical deep-linear edge at N=1000, L=64, sigma2=1/64, 5 trials", {}};
  NetworkConfig cfg;
  cfg.width = 1000;
  cfg.depth = 64;
  cfg.scheme = {WeightScheme::gaussian, 1.0 / 64};
  cfg.nonlinearity = Nonlinearity::linear;
  cfg.seed = 7007;
  const auto s = empirical_spectrum(cfg, 5);
  const double target = lambda_max_asymptotic(1.0);
  const double top = s.eigenvalues.back();
  o.add(top >= 0.7 * target && top <= 1.1 * target, "largest eigenvalue %.4f, window [%.4f, %.4f]; L=64 edge %.4f", top,
        0.7 * target, 1.1 * target, lambda_max_endpoint(cfg.scheme, 64));
  return o;
}

Outcome criterion8() {
  Outcome o{"multi-layer mean with measured ReLU gate fractions, N=1000, L=10, sigma2=0.1", {}};
  NetworkConfig fwd;
  fwd.width = 1000;
  fwd.depth = 10;
  fwd.scheme = {WeightScheme::gaussian, 0.1};
  fwd.nonlinearity = Nonlinearity::relu;
  fwd.seed = 8008;
  const StreamSource src(fwd.seed, 0);
  const GateSample g = forward_pass(fwd, sample_input(fwd.width, src), src);

  std::vector<LayerSpec> layers;
  for (double p : g.fractions) layers.push_back({fwd.scheme, p});
  const double predicted = multi_layer_moments(layers).mean;
  const auto s = empirical_spectrum(surrogate(1000, 10, fwd.scheme, g.fractions, 8009), 3);
  const double m1 = empirical_moments(s).m1;
  o.add(within(m1, predicted, 0.05), "empirical m1 %.5f vs prod(1 + sigma2 p_l) %.5f (tol 5%%); p_l in [%.3f, %.3f]", m1,
        predicted, *std::min_element(g.fractions.begin(), g.fractions.end()),
        *std::max_element(g.fractions.begin(), g.fractions.end()));
  return o;
}

Outcome criterion9() {
  Outcome o{"unscaled ReLU regime is ill-conditioned (N=400, L=10, sigma2=2, 10 trials)", {}};
  NetworkConfig cfg;
  cfg.width = 400;
  cfg.depth = 10;
  cfg.scheme = {WeightScheme::gaussian, 2.0};
  cfg.nonlinearity = Nonlinearity::relu;
  cfg.seed = 9009;
  const auto s = empirical_spectrum(cfg, 10);
  o.add(s.eigenvalues.back() > 1e4, "lambda_max %.4g (> 1e4)", s.eigenvalues.back());
  o.add(median(s) < 1.0, "median %.4g (< 1)", median(s));
  return o;
}

} // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 9; ++i) which.push_back(i);

  bool all = true;
  for (int k : which) {
    if (k < 1 || k > 9) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    bool ok = true;
    try {
      o = criteria[static_cast<std::size_t>(k - 1)]();
      for (const auto& c : o.checks) ok = ok && c.ok;
    } catch (const std::exception& e) {
      o.checks.push_back({std::string("exception: ") + e.what(), false});
      ok = false;
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", k, o.title.c_str(), dt);
    for (const auto& c : o.checks) std::printf("    [%s] %s\n", c.ok ? "ok" : "FAIL", c.what.c_str());
    std::fflush(stdout);
    all = all && ok;
  }
  return all ? 0 : 1;
}
