#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace tlasso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Root mean square of a vector: sqrt(mean of squares). Throws on empty input.
double empirical_norm(const Eigen::Ref<const Vector>& v);

/// Empirical quantile with linear interpolation between order statistics,
/// p in [0, 1].
double quantile(const Vector& v, double p);

// Regression data for a two-regime threshold model. Each raw regressor in
// `x` gets a regime-interacted partner column in the augmented design;
// `statics` columns enter once and are never interacted. Instances are
// immutable after construction and safe to share across threads.
struct Dataset {
  Matrix x;  // n x m
  Vector y;  // length n
  Vector q;  // threshold variable, length n
  std::vector<std::uint8_t> penalized_x;  // per raw column, default all true
  bool intercept = false;          // add an unpenalized column of ones
  bool thresh_intercept = false;   // add unpenalized ones * 1{q < tau}
  Matrix statics;                  // n x p, no regime partner
  std::vector<std::uint8_t> penalized_static;
  std::vector<std::string> labels;  // optional raw-column names

  // Validates alignment and finiteness; throws std::invalid_argument.
  Dataset(Matrix x_in, Vector y_in, Vector q_in);

  // Appends extra non-interacted columns (fixed effects and the like).
  void add_statics(Matrix cols, std::vector<std::uint8_t> penalized);

  int n() const { return static_cast<int>(x.rows()); }
  int m() const { return static_cast<int>(x.cols()); }
  int n_static() const { return static_cast<int>(statics.cols()); }
  int design_cols() const {
    return 2 * m() + (intercept ? 1 : 0) + (thresh_intercept ? 1 : 0) +
           n_static();
  }
};

// Augmented design at a fixed threshold. Column layout (fixed contract):
//   [0, m)   raw regressors
//   [m, 2m)  raw regressor * 1{q < tau}
// followed by the intercept column, the interacted intercept column and the
// static columns, in that order, when present. Storage is column-major.
struct ThresholdDesign {
  double tau = 0.0;
  int m = 0;
  Matrix columns;                       // n x d
  Vector scaling;                       // ||column_j||_n, length d
  std::vector<std::uint8_t> penalized;  // per design column
  int intercept_col = -1;
  int thresh_intercept_col = -1;
  int static_col0 = -1;

  int n() const { return static_cast<int>(columns.rows()); }
  int cols() const { return static_cast<int>(columns.cols()); }
  int n_unpenalized() const;

  // True for coordinates that shift between regimes.
  bool is_delta_col(int j) const {
    return (j >= m && j < 2 * m) || (j == thresh_intercept_col && j >= 0);
  }
};

// Builds the interacted design and its column norms. The boundary q == tau
// falls in the upper regime (strict inequality q < tau).
ThresholdDesign build_design(const Dataset& data, double tau);

// min over penalized raw columns j of
//   ||x_j * 1{q < t0}||_n^2 / ||x_j||_n^2.
// Always in [0, 1]. Returns 0 when no penalized column has mass below t0
// (degenerate lower regime); throws on a zero-norm penalized column.
double rn_ratio(const Dataset& data, double t0);

// Simulation ground truth for the two-regime model.
struct TrueModel {
  Vector beta0;
  Vector delta0;
  double tau0 = 0.5;

  // Nonzero indices in the stacked (beta, delta) coordinate space, where
  // delta j maps to m + j.
  std::vector<int> support_alpha() const;
  std::vector<int> support_delta() const;  // raw indices in [0, m)
};

}  // namespace tlasso
