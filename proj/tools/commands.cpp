#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "io.hpp"
#include "specres/compare.hpp"
#include "specres/error.hpp"
#include "specres/freeprob.hpp"
#include "specres/netgen.hpp"
#include "specres/spectra.hpp"

namespace specres::cli {

namespace {

std::size_t resolve_threads(std::size_t flag) {
  if (const char* env = std::getenv("SPECRES_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<std::size_t>(v);
  }
  return flag;
}

GateMode parse_gates(const std::string& text) {
  if (text == "forward") return ForwardPassGates{};
  const std::string prefix = "surrogate:";
  if (text.rfind(prefix, 0) != 0) throw UsageError("--gates must be 'forward' or 'surrogate:p[,p...]'");
  SurrogateGates g;
  std::stringstream ss(text.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      g.p.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("bad gate probability '" + item + "'");
    }
  }
  if (g.p.empty()) throw UsageError("--gates surrogate needs at least one probability");
  return g;
}

std::string gates_text(const GateMode& g) {
  if (std::holds_alternative<ForwardPassGates>(g)) return "forward";
  std::string out = "surrogate:";
  const auto& p = std::get<SurrogateGates>(g).p;
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? "," : "") + format_double(p[i]);
  return out;
}

struct Grid {
  double lo = 0.0, hi = 0.0;
  std::size_t n = 0;
};

Grid parse_grid(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) )
    throw UsageError("--grid must be lo:hi:n");
  Grid g;
  try {
    g.lo = std::stod(a);
    g.hi = std::stod(b);
    g.n = static_cast<std::size_t>(std::stoul(c));
  } catch (const std::logic_error&) {
    throw UsageError("--grid must be lo:hi:n");
  }
  if (!(g.lo < g.hi) || g.n < 2) throw UsageError("--grid needs lo < hi and n >= 2");
  return g;
}

InitScheme make_scheme(const std::string& scheme, double sigma2) {
  InitScheme s{parse_scheme(scheme), sigma2};
  s.validate();
  return s;
}

TheoryModel make_model(const std::string& scheme, double sigma2, double p, std::size_t depth) {
  TheoryModel m{make_scheme(scheme, sigma2), p, depth};
  m.validate();
  return m;
}

json model_json(const TheoryModel& m) {
  return {{"scheme", std::string(to_string(m.scheme.variant))},
          {"sigma2", m.scheme.sigma2},
          {"p", m.p},
          {"depth", m.depth}};
}

json moments_json(const MomentSummary& m) {
  return {{"m1", m.m1}, {"m2", m.m2}, {"mean", m.mean}, {"variance", m.variance}};
}

void emit(const json& j, const std::string& out, Manifest& manifest) {
  std::cout << j.dump(2) << '\n';
  if (out.empty()) return;
  write_json(out, j);
  manifest.add_output(out);
  manifest.write(out);
}

struct Options {
  std::size_t threads = 0;

  // empirical
  std::size_t width = 400;
  std::size_t depth = 1;
  std::string scheme = "gaussian";
  double sigma2 = 1.0;
  std::string nonlinearity = "relu";
  std::string gates = "forward";
  double bias_sigma2 = 0.0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string out;

  // theory / moments
  double p = 1.0;
  std::string grid;
  double eps = 1e-6;

  // compare
  std::string empirical;
  std::string theory;
  std::string model;

  // lambda-max
  std::optional<double> sigma2_opt;
  std::optional<double> c;
  std::string scaling = "variance";

  // recommend
  std::size_t unit_depth = 1;
  double target = 1.0;

  // replay
  std::string manifest;
  std::string out_dir;
};

int cmd_empirical(const Options& o, Manifest& manifest) {
  if (o.out.empty()) throw UsageError("--out is required");
  NetworkConfig cfg;
  cfg.width = o.width;
  cfg.depth = o.depth;
  cfg.scheme = make_scheme(o.scheme, o.sigma2);
  cfg.nonlinearity = parse_nonlinearity(o.nonlinearity);
  cfg.bias_sigma2 = o.bias_sigma2;
  cfg.seed = o.seed;
  cfg.gates = parse_gates(o.gates);
  cfg.validate();
  if (o.trials < 1) throw UsageError("--trials must be >= 1");

  SpectrumOptions so;
  so.threads = resolve_threads(o.threads);
  const EmpiricalSpectrum spec = empirical_spectrum(cfg, o.trials, so);
  write_eigenvalue_csv(o.out, spec.eigenvalues);

  manifest.set_seed(o.seed);
  manifest.set_config({{"width", cfg.width},
                       {"depth", cfg.depth},
                       {"scheme", std::string(to_string(cfg.scheme.variant))},
                       {"sigma2", cfg.scheme.sigma2},
                       {"nonlinearity", std::string(to_string(cfg.nonlinearity))},
                       {"gates", gates_text(cfg.gates)},
                       {"bias_sigma2", cfg.bias_sigma2},
                       {"trials", o.trials},
                       {"seed", cfg.seed},
                       {"digest", spec.config_digest},
                       {"eigenvalues", spec.eigenvalues.size()}});
  manifest.add_output(o.out);
  manifest.write(o.out);
  return 0;
}

int cmd_theory(const Options& o, Manifest& manifest) {
  if (o.out.empty()) throw UsageError("--out is required");
  const TheoryModel model = make_model(o.scheme, o.sigma2, o.p, o.depth);
  if (model.depth > 1 && model.p != 1.0) throw UsageError("curves for depth > 1 exist only for --p 1 (linear layers)");
  if (!(o.eps > 0.0)) throw UsageError("--eps must be positive");

  InversionOptions inv;
  inv.epsilon = o.eps;
  inv.threads = resolve_threads(o.threads);
  DensityCurve curve;
  json grid_cfg;
  if (!o.grid.empty()) {
    const Grid g = parse_grid(o.grid);
    std::vector<double> lambdas(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
      lambdas[i] = g.lo + (g.hi - g.lo) * static_cast<double>(i) / static_cast<double>(g.n - 1);
    lambdas.back() = g.hi;
    curve = invert_to_density(model, lambdas, inv);
    grid_cfg = {{"kind", "uniform"}, {"lo", g.lo}, {"hi", g.hi}, {"n", g.n}};
  } else {
    AdaptiveOptions ad;
    ad.inversion = inv;
    curve = density_curve(model, ad);
    grid_cfg = {{"kind", "adaptive"}, {"n", curve.size()}};
  }
  write_density_csv(o.out, curve.lambdas, curve.rho);

  json cfg = model_json(model);
  cfg["eps"] = o.eps;
  cfg["grid"] = grid_cfg;
  cfg["model_tag"] = std::string(to_string(curve.model_tag));
  cfg["mass"] = curve_mass(curve);
  cfg["richardson_flags"] = curve.richardson_flags.size();
  manifest.set_config(cfg);
  manifest.add_output(o.out);
  manifest.write(o.out);
  return 0;
}

int cmd_compare(const Options& o, Manifest& manifest) {
  if (o.empirical.empty() || o.theory.empty() || o.model.empty())
    throw UsageError("compare needs --empirical, --theory and --model");
  json mj;
  if (!o.model.empty() && o.model.front() == '{') {
    try {
      mj = json::parse(o.model);
    } catch (const json::exception& e) {
      throw UsageError(std::string("--model: ") + e.what());
    }
  } else {
    mj = read_json(o.model);
  }
  TheoryModel model;
  double eps = 1e-6;
  try {
    model = make_model(mj.at("scheme").get<std::string>(), mj.at("sigma2").get<double>(), mj.value("p", 1.0),
                       mj.value("depth", std::size_t{1}));
    eps = mj.value("eps", 1e-6);
  } catch (const json::exception& e) {
    throw UsageError(o.model + ": " + e.what());
  }

  EmpiricalSpectrum spec;
  spec.eigenvalues = read_eigenvalue_csv(o.empirical);
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());
  spec.trials = 1;
  if (spec.eigenvalues.empty()) throw UsageError(o.empirical + ": no eigenvalues");
  DensityCurve curve;
  read_density_csv(o.theory, curve.lambdas, curve.rho);
  curve.epsilon = eps;
  curve.model_tag = model_tag(model);

  const ComparisonReport r = compare(spec, curve, model);
  const json out = {{"ks", r.ks},
                    {"w1", r.w1},
                    {"m1_rel_err", r.m1_rel_err},
                    {"m2_rel_err", r.m2_rel_err},
                    {"support_mismatch", r.support_mismatch},
                    {"n", r.n},
                    {"model_tag", r.model_tag}};
  json cfg = model_json(model);
  cfg["eps"] = eps;
  cfg["empirical"] = {{"path", o.empirical}, {"sha256", sha256_file(o.empirical)}};
  cfg["theory"] = {{"path", o.theory}, {"sha256", sha256_file(o.theory)}};
  manifest.set_config(cfg);
  emit(out, o.out, manifest);
  return 0;
}

int cmd_moments(const Options& o, Manifest& manifest) {
  const TheoryModel model = make_model(o.scheme, o.sigma2, o.p, o.depth);
  manifest.set_config(model_json(model));
  emit(moments_json(theory_moments(model)), o.out, manifest);
  return 0;
}

int cmd_lambda_max(const Options& o, Manifest& manifest) {
  if (o.sigma2_opt.has_value() == o.c.has_value()) throw UsageError("give exactly one of --sigma2 and --c");
  if (o.depth < 1) throw UsageError("--depth must be >= 1");
  if (o.scaling != "variance" && o.scaling != "std") throw UsageError("--scaling must be variance or std");
  const WeightScheme scheme = parse_scheme(o.scheme);
  const double L = static_cast<double>(o.depth);

  double sigma2 = 0.0;
  double asymptotic = 1.0;
  json cfg = {{"scheme", o.scheme}, {"depth", o.depth}};
  if (o.c) {
    if (!(*o.c >= 0.0)) throw UsageError("--c must be >= 0");
    if (o.scaling == "variance") {
      sigma2 = *o.c / L;
      asymptotic = lambda_max_asymptotic(*o.c);
    } else {
      // sigma = c / L: the effective variance constant c^2 / L vanishes,
      // so the large-depth limit is 1.
      sigma2 = *o.c * *o.c / (L * L);
      cfg["effective_c"] = *o.c * *o.c / L;
      cfg["asymptotic_effective"] = lambda_max_asymptotic(*o.c * *o.c / L);
    }
    cfg["c"] = *o.c;
    cfg["scaling"] = o.scaling;
  } else {
    sigma2 = *o.sigma2_opt;
    if (!(sigma2 >= 0.0)) throw UsageError("--sigma2 must be >= 0");
    asymptotic = lambda_max_asymptotic(sigma2 * L);
  }
  cfg["sigma2"] = sigma2;
  const double lmax = sigma2 == 0.0 ? 1.0 : lambda_max_endpoint({scheme, sigma2}, o.depth);
  manifest.set_config(cfg);
  const json out = {{"lambda_max", lmax}, {"asymptotic", asymptotic}, {"rel_gap", std::abs(lmax - asymptotic) / asymptotic}};
  emit(out, o.out, manifest);
  return 0;
}

int cmd_recommend(const Options& o, Manifest& manifest) {
  manifest.set_config({{"depth", o.depth}, {"unit_depth", o.unit_depth}, {"target", o.target}});
  emit({{"sigma2", recommend_sigma2(o.depth, o.unit_depth, o.target)}}, o.out, manifest);
  return 0;
}

int cmd_replay(const Options& o) {
  const json m = read_json(o.manifest);
  std::vector<std::string> args;
  std::vector<json> recorded;
  try {
    args = m.at("args").get<std::vector<std::string>>();
    for (const auto& e : m.at("outputs")) recorded.push_back(e);
  } catch (const json::exception& e) {
    throw UsageError(o.manifest + ": " + e.what());
  }
  if (!args.empty() && args.front() == "replay") throw UsageError("cannot replay a replay");

  auto relocate = [&](const std::string& path) {
    if (o.out_dir.empty()) return path;
    return (std::filesystem::path(o.out_dir) / std::filesystem::path(path).filename()).string();
  };
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--out") args[i + 1] = relocate(args[i + 1]);
  }
  const int code = run(args);
  if (code != 0) return code;

  bool same = true;
  json report = json::array();
  for (const auto& e : recorded) {
    const std::string path = relocate(e.at("path").get<std::string>());
    const std::string digest = sha256_file(path);
    const bool ok = digest == e.at("sha256").get<std::string>();
    same = same && ok;
    report.push_back({{"path", path}, {"sha256", digest}, {"match", ok}});
  }
  std::cout << json{{"match", same}, {"outputs", report}}.dump(2) << '\n';
  return same ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Singular-value spectra of residual-network Jacobians"};
  app.set_version_flag("--version", std::string(SPECRES_VERSION));
  app.require_subcommand(1);
  Options o;

  auto add_threads = [&](CLI::App* c) { c->add_option("--threads", o.threads, "Worker threads (0: all cores)"); };
  auto add_model = [&](CLI::App* c) {
    c->add_option("--scheme", o.scheme, "gaussian or orthogonal")->capture_default_str();
    c->add_option("--sigma2", o.sigma2, "Weight variance")->capture_default_str();
    c->add_option("--p", o.p, "Gate probability")->capture_default_str();
    c->add_option("--depth", o.depth, "Number of residual layers")->capture_default_str();
  };

  auto* emp = app.add_subcommand("empirical", "Monte Carlo eigenvalues of J J^T");
  emp->add_option("--width", o.width, "Width N")->capture_default_str();
  emp->add_option("--depth", o.depth, "Depth L")->capture_default_str();
  emp->add_option("--scheme", o.scheme, "gaussian or orthogonal")->capture_default_str();
  emp->add_option("--sigma2", o.sigma2, "Weight variance")->capture_default_str();
  emp->add_option("--nonlinearity", o.nonlinearity, "linear, relu or hardtanh")->capture_default_str();
  emp->add_option("--gates", o.gates, "forward or surrogate:p[,p...]")->capture_default_str();
  emp->add_option("--bias-sigma2", o.bias_sigma2, "Bias variance")->capture_default_str();
  emp->add_option("--trials", o.trials, "Independent networks pooled")->capture_default_str();
  emp->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  emp->add_option("--out", o.out, "Eigenvalue CSV")->required();
  add_threads(emp);

  auto* th = app.add_subcommand("theory", "Limiting density of J J^T");
  add_model(th);
  th->add_option("--grid", o.grid, "lo:hi:n uniform grid (default: adaptive)");
  th->add_option("--eps", o.eps, "Inversion offset")->capture_default_str();
  th->add_option("--out", o.out, "Density CSV")->required();
  add_threads(th);

  auto* cmp = app.add_subcommand("compare", "KS / W1 / moment comparison");
  cmp->add_option("--empirical", o.empirical, "Eigenvalue CSV")->required();
  cmp->add_option("--theory", o.theory, "Density CSV")->required();
  cmp->add_option("--model", o.model, "Model JSON file or inline {scheme, sigma2, p, depth, eps}")->required();
  cmp->add_option("--out", o.out, "Report JSON");

  auto* mom = app.add_subcommand("moments", "Closed-form m1, m2, mean, variance");
  add_model(mom);
  mom->add_option("--out", o.out, "JSON output");

  auto* lm = app.add_subcommand("lambda-max", "Right edge of the deep-linear spectrum");
  lm->add_option("--scheme", o.scheme, "gaussian or orthogonal")->capture_default_str();
  lm->add_option("--depth", o.depth, "Depth L")->capture_default_str();
  auto* s2 = lm->add_option("--sigma2", o.sigma2_opt, "Weight variance");
  auto* cc = lm->add_option("--c", o.c, "Depth-scaled constant");
  s2->excludes(cc);
  lm->add_option("--scaling", o.scaling, "variance (sigma2 = c/L) or std (sigma = c/L)")->capture_default_str();
  lm->add_option("--out", o.out, "JSON output");

  auto* rec = app.add_subcommand("recommend", "sigma2 = target * L^(-1/m)");
  rec->add_option("--depth", o.depth, "Depth L")->required();
  rec->add_option("--unit-depth", o.unit_depth, "Depth m of one residual unit")->required();
  rec->add_option("--target", o.target, "Target constant")->capture_default_str();
  rec->add_option("--out", o.out, "JSON output");

  auto* rp = app.add_subcommand("replay", "Re-run a manifest and check output digests");
  rp->add_option("--manifest", o.manifest, "Manifest JSON")->required();
  rp->add_option("--out-dir", o.out_dir, "Write outputs here instead of over the originals");

  std::vector<std::string> argv_store{"specres"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  Manifest manifest(sub->get_name(), args);
  try {
    if (sub == emp) return cmd_empirical(o, manifest);
    if (sub == th) return cmd_theory(o, manifest);
    if (sub == cmp) return cmd_compare(o, manifest);
    if (sub == mom) return cmd_moments(o, manifest);
    if (sub == lm) return cmd_lambda_max(o, manifest);
    if (sub == rec) return cmd_recommend(o, manifest);
    return cmd_replay(o);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const BranchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

} // namespace specres::cli
