#pragma once

#include "tlasso/estimator.hpp"

namespace tlasso {

// Closed-form tuning level a * sqrt(log(3m) / (n * rn)). Throws when the
// regime norm ratio rn is not strictly positive.
double theoretical_lambda(double a, int m, int n, double rn);

struct ThresholdedFit {
  Vector alpha_tilde;
  double c = 0.0;            // threshold constant; NaN for a raw-cutoff call
  double h = 0.0;            // cutoff actually applied
  std::vector<int> j_alpha;  // surviving penalized design columns
  std::vector<int> j_delta;  // surviving regime-shift coords, raw index in [0, m)
  bool break_detected = false;
};

// Keeps coefficients with |alpha_j| >= h (the boundary is kept) and zeroes
// the rest; unpenalized coordinates pass through untouched.
ThresholdedFit hard_threshold(const Vector& alpha_hat, double h,
                              const ThresholdDesign& design);
ThresholdedFit hard_threshold(const Vector& alpha_hat, double h,
                              const std::vector<std::uint8_t>& penalized,
                              int m);

struct CGridSpec {
  double lo = 0.1;
  double hi = 5.0;
  double step = 0.1;
  bool two_c_rule = false;  // cutoff 2*C*lambda instead of C*lambda
};

// BIC over the C grid. Each candidate thresholds the fitted coefficients at
// C*lambda (or 2*C*lambda under two_c_rule) without refitting, and is scored
// by n ln(rss_n) + df ln(n) with df = #nonzero coordinates (+1 when any
// regime-shift coordinate survives). Ties go to the larger C.
std::pair<double, ThresholdedFit> select_c_bic(const ThresholdRegressionFit& fit,
                                               const Dataset& data,
                                               const CGridSpec& grid);

// Break decision: a regime shift is reported iff any thresholded delta
// coordinate survives.
std::pair<bool, std::vector<int>> detect_break(const ThresholdedFit& fit);

}  // namespace tlasso
