#include "tlasso/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace tlasso {

TauGrid candidate_taus(const Vector& q, const TauGridSpec& spec) {
  if (q.size() == 0) throw std::invalid_argument("candidate_taus: empty q");
  if (!(spec.lo > 0.0 && spec.hi < 1.0 && spec.lo <= spec.hi && spec.step > 0.0))
    throw std::invalid_argument("candidate_taus: centile spec outside (0, 1)");

  TauGrid grid;

  if (spec.exhaustive) {
    // Bounds snap outward to order statistics so centiles near 0 and 1
    // cover every observed value.
    std::vector<double> vals(q.data(), q.data() + q.size());
    std::sort(vals.begin(), vals.end());
    const auto last = static_cast<double>(vals.size() - 1);
    grid.t0 = vals[static_cast<std::size_t>(std::floor(spec.lo * last))];
    grid.t1 = vals[static_cast<std::size_t>(std::ceil(spec.hi * last))];
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (double v : vals)
      if (v >= grid.t0 && v <= grid.t1) grid.values.push_back(v);
  } else {
    grid.t0 = quantile(q, spec.lo);
    grid.t1 = quantile(q, spec.hi);
    const int steps = static_cast<int>(std::round((spec.hi - spec.lo) / spec.step));
    for (int i = 0; i <= steps; ++i) {
      const double p = std::min(spec.lo + i * spec.step, spec.hi);
      const double v = quantile(q, p);
      if (grid.values.empty() || v > grid.values.back())
        grid.values.push_back(v);
    }
  }
  if (grid.values.empty())
    throw std::invalid_argument("candidate_taus: empty tau grid");
  return grid;
}

namespace {

double profile_criterion(const LassoFit& fit, const LassoProblem& problem) {
  double pen = 0.0;
  for (int j = 0; j < fit.alpha.size(); ++j)
    pen += problem.weights[j] * std::abs(fit.alpha[j]);
  return fit.rss_n + problem.lambda * pen;
}

// Shared worker: fits every prebuilt design, optionally persisting per-tau
// warm starts across calls (the lambda path reuses them).
std::vector<ProfilePoint> profile_over(
    const std::vector<ThresholdDesign>& designs, const Vector& y,
    double lambda, const SolverOptions& opts, std::vector<Vector>* warm) {
  std::vector<ProfilePoint> points;
  points.reserve(designs.size());
  Vector prev;
  for (std::size_t i = 0; i < designs.size(); ++i) {
    const ThresholdDesign& design = designs[i];
    LassoProblem problem(design, y, lambda);
    SolverOptions local = opts;
    if (warm && (*warm)[i].size() == design.cols())
      local.initial = &(*warm)[i];
    else if (prev.size() == design.cols())
      local.initial = &prev;
    else
      local.initial = nullptr;

    ProfilePoint pt;
    pt.tau = design.tau;
    pt.fit = fit_weighted_lasso(problem, local);
    pt.criterion = profile_criterion(pt.fit, problem);
    prev = pt.fit.alpha;
    if (warm) (*warm)[i] = pt.fit.alpha;
    points.push_back(std::move(pt));
  }
  return points;
}

std::vector<ThresholdDesign> build_designs(const Dataset& data,
                                           const TauGrid& grid) {
  std::vector<ThresholdDesign> designs;
  designs.reserve(grid.values.size());
  for (double tau : grid.values) designs.push_back(build_design(data, tau));
  return designs;
}

constexpr double kRssFloor = 1e-300;

struct BicParts {
  double value = 0.0;
  int df = 0;
  bool floored = false;
};

BicParts bic_at(const ProfilePoint& pt, const ThresholdDesign& design, int n) {
  BicParts out;
  int nonzero_penalized = 0;
  bool delta_nonzero = false;
  for (int j = 0; j < pt.fit.alpha.size(); ++j) {
    if (pt.fit.alpha[j] == 0.0) continue;
    if (design.penalized[static_cast<std::size_t>(j)]) ++nonzero_penalized;
    if (design.is_delta_col(j)) delta_nonzero = true;
  }
  out.df = nonzero_penalized + design.n_unpenalized() + (delta_nonzero ? 1 : 0);
  double rss = pt.fit.rss_n;
  if (rss < kRssFloor) {
    rss = kRssFloor;
    out.floored = true;
  }
  out.value = n * std::log(rss) + out.df * std::log(static_cast<double>(n));
  return out;
}

ThresholdRegressionFit assemble_fit(std::vector<ProfilePoint> points,
                                    const std::vector<ThresholdDesign>& designs,
                                    double lambda, int n, int m) {
  ThresholdRegressionFit fit;
  auto [tau_hat, index] = select_tau(points);
  fit.tau_hat = tau_hat;
  fit.tau_index = index;
  fit.lambda = lambda;
  fit.alpha_hat = points[static_cast<std::size_t>(index)].fit.alpha;
  fit.m = m;
  fit.all_converged = true;
  for (const auto& pt : points) fit.all_converged &= pt.fit.converged;

  const ThresholdDesign& chosen = designs[static_cast<std::size_t>(index)];
  for (int j = 0; j < fit.alpha_hat.size(); ++j)
    if (fit.alpha_hat[j] != 0.0 && chosen.is_delta_col(j))
      fit.delta_nonzero = true;

  const BicParts bic = bic_at(points[static_cast<std::size_t>(index)], chosen, n);
  fit.bic = bic.value;
  fit.rss_floored = bic.floored;
  fit.profile = std::move(points);
  return fit;
}

}  // namespace

std::vector<ProfilePoint> profile(const Dataset& data, double lambda,
                                  const TauGrid& grid,
                                  const SolverOptions& opts) {
  if (grid.values.empty()) throw std::invalid_argument("profile: empty grid");
  const auto designs = build_designs(data, grid);
  return profile_over(designs, data.y, lambda, opts, nullptr);
}

std::pair<double, int> select_tau(const std::vector<ProfilePoint>& points) {
  if (points.empty()) throw std::invalid_argument("select_tau: empty profile");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pt : points) best = std::min(best, pt.criterion);
  const double tol = 1e-12 * std::abs(best);
  int index = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].criterion <= best + tol) index = static_cast<int>(i);
  return {points[static_cast<std::size_t>(index)].tau, index};
}

ThresholdRegressionFit fit_threshold_regression(const Dataset& data,
                                                double lambda,
                                                const TauGrid& grid,
                                                const SolverOptions& opts) {
  if (grid.values.empty())
    throw std::invalid_argument("fit_threshold_regression: empty grid");
  auto designs = build_designs(data, grid);
  auto points = profile_over(designs, data.y, lambda, opts, nullptr);
  return assemble_fit(std::move(points), designs, lambda, data.n(), data.m());
}

std::vector<double> lambda_path(const Dataset& data, const TauGrid& grid,
                                int k, double ratio) {
  if (k < 1) throw std::invalid_argument("lambda_path: need k >= 1");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("lambda_path: ratio outside (0, 1)");
  const auto designs = build_designs(data, grid);
  double top = 0.0;
  for (const auto& design : designs)
    top = std::max(top, lambda_max(design, data.y));
  if (top <= 0.0) return {0.0};
  if (k == 1) return {top};
  std::vector<double> path(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    path[static_cast<std::size_t>(i)] =
        top * std::pow(ratio, static_cast<double>(i) / (k - 1));
  return path;
}

std::pair<double, ThresholdRegressionFit> select_lambda_bic(
    const Dataset& data, const TauGrid& grid, const std::vector<double>& path,
    const SolverOptions& opts) {
  if (path.empty())
    throw std::invalid_argument("select_lambda_bic: empty path");

  std::vector<double> sorted = path;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  const auto designs = build_designs(data, grid);
  std::vector<Vector> warm(designs.size());

  // The path scan runs at a coarser stopping rule; BIC depends on the fits
  // only through rss and the active sets, which are settled long before the
  // final digits of the coefficients. The winning lambda is re-solved at the
  // caller's full tolerance below, so every returned fit meets it.
  SolverOptions scan = opts;
  scan.coef_tol = std::max(opts.coef_tol, 1e-4);
  scan.kkt_tol = std::max(opts.kkt_tol, 1e-3);

  const int n = data.n();
  bool have_best = false;
  double best_bic = 0.0;
  double best_lambda = 0.0;
  std::vector<Vector> best_warm;

  for (double lambda : sorted) {
    auto points = profile_over(designs, data.y, lambda, scan, &warm);
    auto [tau_hat, index] = select_tau(points);
    (void)tau_hat;
    const BicParts bic =
        bic_at(points[static_cast<std::size_t>(index)],
               designs[static_cast<std::size_t>(index)], n);
    if (!have_best || bic.value < best_bic) {  // ties keep the larger lambda
      have_best = true;
      best_bic = bic.value;
      best_lambda = lambda;
      best_warm = warm;
    }
  }

  auto points = profile_over(designs, data.y, best_lambda, opts, &best_warm);
  auto fit =
      assemble_fit(std::move(points), designs, best_lambda, n, data.m());
  return {best_lambda, std::move(fit)};
}

}  // namespace tlasso
