#pragma once

#include "tlasso/model.hpp"

namespace tlasso {

// Unit-diagonal covariance with constant off-diagonal correlation and its
// closed-form inverse. Requires 0 <= rho < 1; the regime split tau must lie
// strictly inside (0, 1) or the augmented covariance is singular.
struct EquicorrSpec {
  int m = 2;
  double rho = 0.0;
  double tau = 0.5;
};

// (1 - rho) I + rho 11'
Matrix equicorr_sigma(const EquicorrSpec& spec);

// Rank-one downdate inverse: (1/(1-rho)) (I - rho 11' / (1 - rho + rho m)).
Matrix equicorr_theta(const EquicorrSpec& spec);

// Row-sum operator norm of the inverse, closed form:
// (1 - 3 rho + 2 m rho) / ((1 - rho)(1 - rho + m rho)).
double theta_infnorm(int m, double rho);

struct ThetaTauNorm {
  double value = 0.0;  // norm of the augmented-covariance inverse
  double bound = 0.0;  // 2 / ((1 - tau)(1 - rho)) * max(2, (tau + 1) / tau)
  bool within_bound = false;
};

// Norm of the inverse of the augmented (two-regime) covariance, computed
// from its Kronecker factorization without materializing the 2m x 2m
// matrix. Throws "singular Sigma(tau)" for tau outside (0, 1).
ThetaTauNorm theta_tau_infnorm(const EquicorrSpec& spec);

}  // namespace tlasso
