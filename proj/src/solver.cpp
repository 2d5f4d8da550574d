#include "tlasso/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace tlasso {

namespace {

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

Vector default_weights(const ThresholdDesign& design) {
  Vector w = design.scaling;
  for (int j = 0; j < w.size(); ++j)
    if (!design.penalized[static_cast<std::size_t>(j)]) w[j] = 0.0;
  return w;
}

}  // namespace

LassoProblem::LassoProblem(const ThresholdDesign& design_in, const Vector& y_in,
                           double lambda_in)
    : design(&design_in),
      y(&y_in),
      lambda(lambda_in),
      weights(default_weights(design_in)) {}

LassoProblem::LassoProblem(const ThresholdDesign& design_in, const Vector& y_in,
                           double lambda_in, Vector weights_in)
    : design(&design_in), y(&y_in), lambda(lambda_in),
      weights(std::move(weights_in)) {
  if (weights.size() != design->cols())
    throw std::invalid_argument("LassoProblem: weight size mismatch");
  // Unpenalized columns carry weight zero by contract.
  for (int j = 0; j < weights.size(); ++j)
    if (!design->penalized[static_cast<std::size_t>(j)]) weights[j] = 0.0;
}

namespace {

struct Work {
  const Matrix* cols;
  const Vector* y;
  Vector norm2;  // ||x_j||_n^2
  const Vector* weights;
  double lambda;
  int n;
  int d;
};

// One pass of exact coordinate minimization over `idx`; returns the largest
// coefficient change. The residual is kept consistent incrementally.
double sweep(const Work& w, const std::vector<int>& idx, Vector& alpha,
             Vector& res) {
  double max_change = 0.0;
  const double inv_n = 1.0 / static_cast<double>(w.n);
  for (int j : idx) {
    const double nj = w.norm2[j];
    if (nj <= 0.0) {
      if (alpha[j] != 0.0) {  // pin zero-norm columns
        res += w.cols->col(j) * alpha[j];
        alpha[j] = 0.0;
      }
      continue;
    }
    const double g = w.cols->col(j).dot(res) * inv_n + nj * alpha[j];
    const double next = soft_threshold(g, w.lambda * (*w.weights)[j]) / nj;
    const double diff = next - alpha[j];
    if (diff != 0.0) {
      res -= w.cols->col(j) * diff;
      alpha[j] = next;
      max_change = std::max(max_change, std::abs(diff));
    }
  }
  return max_change;
}

double kkt_of(const Work& w, const Vector& alpha, const Vector& res) {
  const double inv_n = 1.0 / static_cast<double>(w.n);
  double worst = 0.0;
  const Vector g = w.cols->transpose() * res * inv_n;
  for (int j = 0; j < w.d; ++j) {
    const double wj = (*w.weights)[j];
    double v;
    if (wj == 0.0 && w.norm2[j] <= 0.0) continue;  // pinned empty column
    if (alpha[j] != 0.0)
      v = std::abs(g[j] - w.lambda * wj * (alpha[j] > 0 ? 1.0 : -1.0));
    else if (wj > 0.0)
      v = std::max(0.0, std::abs(g[j]) - w.lambda * wj);
    else
      v = std::abs(g[j]);
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace

LassoFit fit_weighted_lasso(const LassoProblem& problem,
                            const SolverOptions& opts) {
  const ThresholdDesign& design = *problem.design;
  const Vector& y = *problem.y;
  const int n = design.n();
  const int d = design.cols();
  if (problem.lambda < 0.0)
    throw std::invalid_argument("fit_weighted_lasso: negative lambda");
  if (y.size() != n)
    throw std::invalid_argument("fit_weighted_lasso: response size mismatch");

  Work w;
  w.cols = &design.columns;
  w.y = &y;
  w.norm2 = design.scaling.cwiseProduct(design.scaling);
  w.weights = &problem.weights;
  w.lambda = problem.lambda;
  w.n = n;
  w.d = d;

  LassoFit fit;
  if (opts.initial) {
    if (opts.initial->size() != d)
      throw std::invalid_argument("fit_weighted_lasso: warm start size mismatch");
    fit.alpha = *opts.initial;
  } else {
    fit.alpha = Vector::Zero(d);
  }
  Vector res = fit.alpha.isZero(0.0) ? y : Vector(y - design.columns * fit.alpha);

  std::vector<int> all(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) all[static_cast<std::size_t>(j)] = j;
  std::vector<int> active;
  active.reserve(static_cast<std::size_t>(d));

  const auto record = [&]() {
    if (!opts.record_objective) return;
    double pen = 0.0;
    for (int j = 0; j < d; ++j) pen += problem.weights[j] * std::abs(fit.alpha[j]);
    fit.objective_trace.push_back(res.squaredNorm() / n +
                                  2.0 * problem.lambda * pen);
  };

  while (fit.sweeps < opts.max_sweeps) {
    const double change = sweep(w, all, fit.alpha, res);
    ++fit.sweeps;
    record();
    if (!std::isfinite(change))
      throw std::runtime_error("fit_weighted_lasso: non-finite update");

    if (change < opts.coef_tol) {
      res = y - design.columns * fit.alpha;  // drop accumulated drift
      fit.kkt = kkt_of(w, fit.alpha, res);
      if (fit.kkt <= opts.kkt_tol) {
        fit.converged = true;
        break;
      }
      continue;  // stable coefficients but stationarity not yet met
    }

    // Iterate on the current active set until it stabilizes, then take
    // another full pass to admit new coordinates.
    active.clear();
    for (int j = 0; j < d; ++j)
      if (fit.alpha[j] != 0.0) active.push_back(j);
    while (fit.sweeps < opts.max_sweeps) {
      const double inner = sweep(w, active, fit.alpha, res);
      ++fit.sweeps;
      record();
      if (!std::isfinite(inner))
        throw std::runtime_error("fit_weighted_lasso: non-finite update");
      if (inner < opts.coef_tol) break;
    }
  }

  res = y - design.columns * fit.alpha;
  fit.rss_n = res.squaredNorm() / n;
  double pen = 0.0;
  for (int j = 0; j < d; ++j) pen += problem.weights[j] * std::abs(fit.alpha[j]);
  fit.objective = fit.rss_n + 2.0 * problem.lambda * pen;
  if (!fit.converged) fit.kkt = kkt_of(w, fit.alpha, res);
  if (!std::isfinite(fit.objective))
    throw std::runtime_error("fit_weighted_lasso: non-finite objective");
  return fit;
}

double kkt_violation(const LassoFit& fit, const LassoProblem& problem) {
  const ThresholdDesign& design = *problem.design;
  Work w;
  w.cols = &design.columns;
  w.y = problem.y;
  w.norm2 = design.scaling.cwiseProduct(design.scaling);
  w.weights = &problem.weights;
  w.lambda = problem.lambda;
  w.n = design.n();
  w.d = design.cols();
  const Vector res = *problem.y - design.columns * fit.alpha;
  return kkt_of(w, fit.alpha, res);
}

double lambda_max(const ThresholdDesign& design, const Vector& y) {
  Vector w = design.scaling;
  for (int j = 0; j < w.size(); ++j)
    if (!design.penalized[static_cast<std::size_t>(j)]) w[j] = 0.0;
  return lambda_max(design, y, w);
}

double lambda_max(const ThresholdDesign& design, const Vector& y,
                  const Vector& weights) {
  const int n = design.n();
  const int d = design.cols();

  std::vector<int> unpen;
  for (int j = 0; j < d; ++j)
    if (!design.penalized[static_cast<std::size_t>(j)] &&
        design.scaling[j] > 0.0)
      unpen.push_back(j);

  Vector r0 = y;
  if (!unpen.empty()) {
    Matrix u(n, static_cast<int>(unpen.size()));
    for (std::size_t k = 0; k < unpen.size(); ++k)
      u.col(static_cast<int>(k)) = design.columns.col(unpen[k]);
    r0 = y - u * u.colPivHouseholderQr().solve(y);
  }

  double lam = -1.0;
  for (int j = 0; j < d; ++j) {
    if (!design.penalized[static_cast<std::size_t>(j)] || weights[j] <= 0.0)
      continue;
    lam = std::max(lam, std::abs(design.columns.col(j).dot(r0)) /
                            (static_cast<double>(n) * weights[j]));
  }
  if (lam < 0.0)
    throw std::invalid_argument("lambda_max: no penalized column with positive weight");
  return lam;
}

}  // namespace tlasso
