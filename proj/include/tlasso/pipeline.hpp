#pragma once

#include "tlasso/selector.hpp"

namespace tlasso {

// Everything the full estimation pipeline is allowed to vary. Defaults
// follow the standard run: BIC over a 100-point geometric lambda path,
// BIC over the 0.1..5 C grid, centile tau grid 15..85 by 5.
struct FitOptions {
  TauGridSpec tau_grid;
  int n_lambda = 100;
  double lambda_min_ratio = 0.001;
  double fixed_lambda = -1.0;   // >= 0 skips the BIC path
  double theoretical_a = -1.0;  // >= 0 uses the closed-form tuning level
  CGridSpec c_grid;
  double fixed_c = -1.0;        // > 0 skips BIC over C
  SolverOptions solver;
};

struct FullFit {
  ThresholdRegressionFit fit;
  ThresholdedFit thresholded;
  TauGrid grid;
  double lambda_hat = 0.0;
  double c_hat = 0.0;
};

// Profiled fit with lambda and C resolved per the options: fixed value,
// closed-form level, or BIC selection.
FullFit run_full_fit(const Dataset& data, const FitOptions& opts);

}  // namespace tlasso
