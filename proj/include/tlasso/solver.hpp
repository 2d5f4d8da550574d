#pragma once

#include "tlasso/model.hpp"

namespace tlasso {

struct SolverOptions {
  double coef_tol = 1e-8;  // max |coefficient change| per full sweep
  double kkt_tol = 1e-6;   // stationarity tolerance at the reported optimum
  int max_sweeps = 100000;
  const Vector* initial = nullptr;  // warm start, length = design cols
  bool record_objective = false;    // keep the per-sweep objective trace
};

// Weighted L1 problem at one fixed threshold. Holds views only; the design
// and response must outlive the problem. Weights are zero exactly on the
// unpenalized columns and default to the design column norms elsewhere.
struct LassoProblem {
  const ThresholdDesign* design = nullptr;
  const Vector* y = nullptr;
  double lambda = 0.0;
  Vector weights;

  LassoProblem(const ThresholdDesign& design_in, const Vector& y_in,
               double lambda_in);
  LassoProblem(const ThresholdDesign& design_in, const Vector& y_in,
               double lambda_in, Vector weights_in);
};

struct LassoFit {
  Vector alpha;
  double rss_n = 0.0;      // (1/n) ||y - X alpha||^2
  double objective = 0.0;  // rss_n + 2 lambda sum_j w_j |alpha_j|
  int sweeps = 0;
  bool converged = false;
  double kkt = 0.0;
  std::vector<double> objective_trace;  // filled when record_objective
};

// Cyclic coordinate descent on (1/n)||y - X a||^2 + 2 lambda sum_j w_j |a_j|.
// Coordinate update: a_j <- soft((1/n) x_j' r_partial, lambda w_j) / ||x_j||_n^2.
// Zero-norm columns are pinned at zero so degenerate regimes at extreme tau
// stay well defined. Deterministic: fixed cyclic order, no randomization.
LassoFit fit_weighted_lasso(const LassoProblem& problem,
                            const SolverOptions& opts = {});

// Max stationarity violation of a fit, with g_j = (1/n) x_j'(y - X a):
//   active:               |g_j - lambda w_j sign(a_j)|
//   inactive, penalized:  max(0, |g_j| - lambda w_j)
//   unpenalized:          |g_j|
// Zero at an exact optimum.
double kkt_violation(const LassoFit& fit, const LassoProblem& problem);

// Smallest lambda at which every penalized coefficient is zero, after the
// unpenalized columns are fitted exactly by least squares.
double lambda_max(const ThresholdDesign& design, const Vector& y);
double lambda_max(const ThresholdDesign& design, const Vector& y,
                  const Vector& weights);

}  // namespace tlasso
