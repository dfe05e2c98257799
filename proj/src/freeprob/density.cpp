#include "specres/freeprob/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "specres/error.hpp"
#include "specres/freeprob/endpoint.hpp"
#include "specres/freeprob/single_layer.hpp"
#include "specres/parallel.hpp"

namespace specres {

StieltjesEvaluator::StieltjesEvaluator(const TheoryModel& model) : model_(model) {
  model_.validate();
  if (model_.depth > 1 && !model_.degenerate()) deep_.emplace(model_);
}

std::vector<StieltjesSample> StieltjesEvaluator::path(double x, std::span<const double> heights) const {
  if (deep_) return deep_->path(x, heights);
  if (model_.degenerate()) {
    std::vector<StieltjesSample> out;
    for (double h : heights) {
      if (!(h > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
      out.push_back({cplx(x, h), 1.0 / (cplx(x, h) - 1.0), 0.0});
    }
    return out;
  }
  return single_layer_path(model_, x, heights);
}

StieltjesSample StieltjesEvaluator::operator()(cplx z) const {
  const double h[] = {z.imag()};
  return path(z.real(), h).front();
}

double theory_support_bound(const TheoryModel& model) {
  model.validate();
  if (model.degenerate()) return 1.0;
  if (model.depth == 1) return single_layer_support_bound(model);
  if (model.p != 1.0) throw ParameterError("deep-linear curves require p = 1");
  return lambda_max_endpoint(model.scheme, model.depth);
}

namespace {

struct Point {
  double lambda = 0.0;
  double rho = 0.0;
  bool flag = false;
};

double to_density(cplx g) {
  const double rho = std::max(0.0, -g.imag() / std::numbers::pi);
  return rho < 1e-12 ? 0.0 : rho;
}

std::vector<Point> evaluate(const StieltjesEvaluator& ev, std::span<const double> lambdas, const InversionOptions& opt) {
  std::vector<Point> out(lambdas.size());
  const double two[] = {2.0 * opt.epsilon, opt.epsilon};
  const double one[] = {opt.epsilon};
  const std::span<const double> heights = opt.richardson ? std::span<const double>(two) : std::span<const double>(one);
  parallel_for(lambdas.size(), opt.threads, [&](std::size_t i) {
    const double x = lambdas[i];
    std::vector<StieltjesSample> s;
    try {
      s = ev.path(x, heights);
    } catch (const BranchError& e) {
      std::ostringstream os;
      os.precision(17);
      os << "at lambda = " << x << ": " << e.what();
      throw BranchError(os.str());
    }
    Point& p = out[i];
    p.lambda = x;
    p.rho = to_density(s.back().G);
    if (opt.richardson) {
      const double coarse = to_density(s.front().G);
      p.flag = p.rho > 0.0 && std::abs(p.rho - coarse) > 0.01 * p.rho;
    }
  });
  return out;
}

DensityCurve to_curve(const std::vector<Point>& pts, const StieltjesEvaluator& ev, double eps) {
  DensityCurve c;
  c.epsilon = eps;
  c.model_tag = ev.tag();
  c.lambdas.reserve(pts.size());
  c.rho.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    c.lambdas.push_back(pts[i].lambda);
    c.rho.push_back(pts[i].rho);
    if (pts[i].flag) c.richardson_flags.push_back(i);
  }
  return c;
}

std::vector<Point> from_curve(const DensityCurve& c) {
  std::vector<Point> pts(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) pts[i] = {c.lambdas[i], c.rho[i], false};
  for (std::size_t i : c.richardson_flags)
    if (i < pts.size()) pts[i].flag = true;
  return pts;
}

void check_epsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("epsilon must be positive");
}

// Inserts the midpoint of every marked interval (marks[i] refers to
// [pts[i], pts[i+1]]) and returns the merged points.
std::vector<Point> split(const StieltjesEvaluator& ev, const std::vector<Point>& pts, const std::vector<char>& marks,
                         const InversionOptions& opt) {
  std::vector<double> mids;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (marks[i]) mids.push_back(0.5 * (pts[i].lambda + pts[i + 1].lambda));
  const std::vector<Point> fresh = evaluate(ev, mids, opt);
  std::vector<Point> merged;
  merged.reserve(pts.size() + fresh.size());
  std::size_t f = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    merged.push_back(pts[i]);
    if (i + 1 < pts.size() && marks[i]) merged.push_back(fresh[f++]);
  }
  return merged;
}

} // namespace

DensityCurve invert_to_density(const TheoryModel& model, std::span<const double> grid, const InversionOptions& options) {
  check_epsilon(options.epsilon);
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ParameterError("grid must be strictly ascending");
  const StieltjesEvaluator ev(model);
  return to_curve(evaluate(ev, grid, options), ev, options.epsilon);
}

DensityCurve density_curve(const TheoryModel& model, const AdaptiveOptions& options) {
  check_epsilon(options.inversion.epsilon);
  const StieltjesEvaluator ev(model);
  const double lo = options.lo.value_or(0.0);
  const double hi = options.hi.value_or(1.05 * theory_support_bound(model));
  if (!(lo < hi)) throw ParameterError("grid range needs lo < hi");
  const std::size_t n = std::max<std::size_t>(options.base_points, 2);

  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  grid.back() = hi;
  if (lo < 1.0 && 1.0 < hi) {
    grid.push_back(1.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }
  std::vector<Point> pts = evaluate(ev, grid, options.inversion);

  const double min_width = 0.1 * options.inversion.epsilon;
  // Intervals still to be examined; every candidate gets its midpoint
  // evaluated, and the halves stay candidates while the trapezoid error
  // estimate or the mass bound is violated.
  std::vector<char> candidate(pts.size() - 1, 1);
  while (pts.size() < options.max_points) {
    bool any = false;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (candidate[i] && pts[i + 1].lambda - pts[i].lambda < 2.0 * min_width) candidate[i] = 0;
      any = any || candidate[i];
    }
    if (!any) break;
    std::vector<Point> merged = split(ev, pts, candidate, options.inversion);
    std::vector<char> next(merged.size() - 1, 0);
    std::size_t j = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (!candidate[i]) {
        ++j;
        continue;
      }
      const Point& a = merged[j];
      const Point& m = merged[j + 1];
      const Point& b = merged[j + 2];
      const double h = b.lambda - a.lambda;
      const double weight = std::max(1.0, b.lambda * b.lambda);
      const double err = 0.25 * h * std::abs(a.rho + b.rho - 2.0 * m.rho) * weight;
      const bool rough = err > options.tolerance;
      next[j] = rough || std::max(a.rho, m.rho) * 0.5 * h >= options.max_mass;
      next[j + 1] = rough || std::max(m.rho, b.rho) * 0.5 * h >= options.max_mass;
      j += 2;
    }
    pts = std::move(merged);
    candidate = std::move(next);
  }
  return to_curve(pts, ev, options.inversion.epsilon);
}

DensityCurve refine_curve(const DensityCurve& curve, const TheoryModel& model, double max_mass, std::size_t max_points,
                          std::size_t threads) {
  check_epsilon(curve.epsilon);
  if (curve.size() < 2) return curve;
  const StieltjesEvaluator ev(model);
  InversionOptions opt;
  opt.epsilon = curve.epsilon;
  opt.threads = threads;
  opt.richardson = !curve.richardson_flags.empty();
  std::vector<Point> pts = from_curve(curve);
  const double min_width = 0.1 * curve.epsilon;
  while (pts.size() < max_points) {
    std::vector<char> marks(pts.size() - 1, 0);
    bool any = false;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double h = pts[i + 1].lambda - pts[i].lambda;
      marks[i] = h >= 2.0 * min_width && std::max(pts[i].rho, pts[i + 1].rho) * h >= max_mass;
      any = any || marks[i];
    }
    if (!any) break;
    pts = split(ev, pts, marks, opt);
  }
  DensityCurve out = to_curve(pts, ev, curve.epsilon);
  out.model_tag = curve.model_tag;
  return out;
}

std::optional<std::pair<double, double>> support_interval(const DensityCurve& curve, double threshold) {
  std::optional<std::size_t> first, last;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve.rho[i] > threshold) {
      if (!first) first = i;
      last = i;
    }
  }
  if (!first) return std::nullopt;
  return std::make_pair(curve.lambdas[*first], curve.lambdas[*last]);
}

} // namespace specres
