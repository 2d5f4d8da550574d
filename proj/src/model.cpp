#include "tlasso/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tlasso {

double empirical_norm(const Eigen::Ref<const Vector>& v) {
  if (v.size() == 0) throw std::invalid_argument("empirical_norm: empty input");
  return std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

double quantile(const Vector& v, double p) {
  if (v.size() == 0) throw std::invalid_argument("quantile: empty input");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("quantile: p outside [0, 1]");
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end());
  const double pos = p * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return s[lo] + frac * (s[hi] - s[lo]);
}

namespace {

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite())
    throw std::invalid_argument(std::string("Dataset: non-finite value in ") +
                                what);
}

}  // namespace

Dataset::Dataset(Matrix x_in, Vector y_in, Vector q_in)
    : x(std::move(x_in)), y(std::move(y_in)), q(std::move(q_in)) {
  if (x.rows() < 2 || x.cols() < 1)
    throw std::invalid_argument("Dataset: need n >= 2 rows and m >= 1 columns");
  if (y.size() != x.rows() || q.size() != x.rows())
    throw std::invalid_argument("Dataset: x, y, q must be row-aligned");
  require_finite(x, "x");
  require_finite(y, "y");
  require_finite(q, "q");
  penalized_x.assign(static_cast<std::size_t>(x.cols()), 1);
}

void Dataset::add_statics(Matrix cols, std::vector<std::uint8_t> penalized) {
  if (cols.rows() != x.rows())
    throw std::invalid_argument("Dataset: static columns not row-aligned");
  if (penalized.size() != static_cast<std::size_t>(cols.cols()))
    throw std::invalid_argument("Dataset: static penalty mask size mismatch");
  require_finite(cols, "statics");
  statics = std::move(cols);
  penalized_static = std::move(penalized);
}

ThresholdDesign build_design(const Dataset& data, double tau) {
  const int n = data.n();
  const int m = data.m();
  const int d = data.design_cols();

  ThresholdDesign design;
  design.tau = tau;
  design.m = m;
  design.columns.resize(n, d);
  design.penalized.assign(static_cast<std::size_t>(d), 0);

  Vector indicator(n);
  for (int i = 0; i < n; ++i) indicator[i] = data.q[i] < tau ? 1.0 : 0.0;

  design.columns.leftCols(m) = data.x;
  for (int j = 0; j < m; ++j) {
    design.columns.col(m + j) = data.x.col(j).cwiseProduct(indicator);
    design.penalized[static_cast<std::size_t>(j)] = data.penalized_x[static_cast<std::size_t>(j)];
    design.penalized[static_cast<std::size_t>(m + j)] = data.penalized_x[static_cast<std::size_t>(j)];
  }

  int next = 2 * m;
  if (data.intercept) {
    design.intercept_col = next;
    design.columns.col(next).setOnes();
    ++next;
  }
  if (data.thresh_intercept) {
    design.thresh_intercept_col = next;
    design.columns.col(next) = indicator;
    ++next;
  }
  if (data.n_static() > 0) {
    design.static_col0 = next;
    design.columns.rightCols(data.n_static()) = data.statics;
    for (int j = 0; j < data.n_static(); ++j)
      design.penalized[static_cast<std::size_t>(next + j)] =
          data.penalized_static[static_cast<std::size_t>(j)];
  }

  design.scaling.resize(d);
  for (int j = 0; j < d; ++j)
    design.scaling[j] = empirical_norm(design.columns.col(j));
  return design;
}

int ThresholdDesign::n_unpenalized() const {
  int count = 0;
  for (auto p : penalized)
    if (!p) ++count;
  return count;
}

double rn_ratio(const Dataset& data, double t0) {
  const int n = data.n();
  bool any = false;
  double ratio = 1.0;
  for (int j = 0; j < data.m(); ++j) {
    if (!data.penalized_x[static_cast<std::size_t>(j)]) continue;
    any = true;
    double full = 0.0, below = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = data.x(i, j) * data.x(i, j);
      full += v;
      if (data.q[i] < t0) below += v;
    }
    if (full <= 0.0)
      throw std::invalid_argument("rn_ratio: zero-variance column");
    ratio = std::min(ratio, below / full);
  }
  if (!any) throw std::invalid_argument("rn_ratio: no penalized columns");
  return ratio;
}

std::vector<int> TrueModel::support_alpha() const {
  std::vector<int> support;
  const int m = static_cast<int>(beta0.size());
  for (int j = 0; j < m; ++j)
    if (beta0[j] != 0.0) support.push_back(j);
  for (int j = 0; j < m; ++j)
    if (delta0[j] != 0.0) support.push_back(m + j);
  return support;
}

std::vector<int> TrueModel::support_delta() const {
  std::vector<int> support;
  for (int j = 0; j < delta0.size(); ++j)
    if (delta0[j] != 0.0) support.push_back(static_cast<int>(j));
  return support;
}

}  // namespace tlasso
