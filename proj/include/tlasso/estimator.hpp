#pragma once

#include "tlasso/solver.hpp"

#include <utility>

namespace tlasso {

// Candidate thresholds. Quantile mode takes empirical quantiles of q at the
// centiles lo, lo+step, ..., hi; exhaustive mode takes the sorted unique
// observed values of q inside the same quantile bounds.
struct TauGridSpec {
  double lo = 0.15;
  double hi = 0.85;
  double step = 0.05;
  bool exhaustive = false;
};

struct TauGrid {
  std::vector<double> values;  // strictly increasing, nonempty
  double t0 = 0.0;             // parameter-space bounds, in q units
  double t1 = 0.0;
};

TauGrid candidate_taus(const Vector& q, const TauGridSpec& spec);

struct ProfilePoint {
  double tau = 0.0;
  LassoFit fit;
  double criterion = 0.0;  // rss_n + lambda * sum_j w_j |alpha_j|
};

// Fits the weighted Lasso at every grid value, warm-starting each fit from
// the previous grid point. The recorded criterion carries the penalty once,
// not twice as in the coefficient objective.
std::vector<ProfilePoint> profile(const Dataset& data, double lambda,
                                  const TauGrid& grid,
                                  const SolverOptions& opts = {});

// Largest tau among the criterion minimizers; values within 1e-12 relative
// of the minimum count as tied.
std::pair<double, int> select_tau(const std::vector<ProfilePoint>& points);

struct ThresholdRegressionFit {
  Vector alpha_hat;
  double tau_hat = 0.0;
  double lambda = 0.0;
  int tau_index = -1;
  std::vector<ProfilePoint> profile;
  double bic = 0.0;
  bool delta_nonzero = false;  // any regime-shift coordinate nonzero
  bool all_converged = true;
  bool rss_floored = false;    // interpolating fit, BIC computed on floor
  int m = 0;                   // raw regressor count
};

ThresholdRegressionFit fit_threshold_regression(const Dataset& data,
                                                double lambda,
                                                const TauGrid& grid,
                                                const SolverOptions& opts = {});

// Geometric sequence of k values from the pathwise ceiling (the largest
// lambda_max over the grid) down to ceiling * ratio. A degenerate ceiling
// of zero collapses to {0}.
std::vector<double> lambda_path(const Dataset& data, const TauGrid& grid,
                                int k, double ratio);

// Scans the path from the largest lambda down, fitting the full threshold
// regression at each value, and returns the BIC minimizer with
//   bic = n ln(rss_n) + df ln(n),
//   df  = #nonzero penalized + #unpenalized columns + 1{delta != 0}.
// Ties resolve to the larger lambda.
std::pair<double, ThresholdRegressionFit> select_lambda_bic(
    const Dataset& data, const TauGrid& grid, const std::vector<double>& path,
    const SolverOptions& opts = {});

}  // namespace tlasso
