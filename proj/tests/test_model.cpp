#include "tlasso/model.hpp"
#include "tlasso/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace tlasso;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("empirical_norm basics") {
  CHECK(empirical_norm(vec({0, 0, 0})) == 0.0);
  CHECK(empirical_norm(vec({2.5, 2.5, 2.5, 2.5})) == doctest::Approx(2.5));
  CHECK(empirical_norm(vec({-2.5, -2.5})) == doctest::Approx(2.5));
  CHECK(empirical_norm(vec({3, 4})) ==
        doctest::Approx(3.5355339059327378).epsilon(1e-12));
  CHECK_THROWS_AS(empirical_norm(Vector()), std::invalid_argument);
}

TEST_CASE("dataset validation") {
  Matrix x(2, 1);
  x << 2, 5;
  CHECK_THROWS_AS(Dataset(x, vec({1}), vec({0.2, 0.9})), std::invalid_argument);
  CHECK_THROWS_AS(Dataset(Matrix(1, 1), vec({1}), vec({0.5})),
                  std::invalid_argument);
  Matrix bad = x;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(Dataset(bad, vec({1, 2}), vec({0.2, 0.9})),
                  std::invalid_argument);
  Vector bad_y = vec({1, std::numeric_limits<double>::infinity()});
  CHECK_THROWS_AS(Dataset(x, bad_y, vec({0.2, 0.9})), std::invalid_argument);
}

TEST_CASE("build_design indicator and layout") {
  Matrix x(2, 1);
  x << 2, 5;
  Dataset data(x, vec({1, 1}), vec({0.2, 0.9}));

  SUBCASE("interior tau") {
    const ThresholdDesign design = build_design(data, 0.5);
    CHECK(design.columns(0, 0) == 2);
    CHECK(design.columns(1, 0) == 5);
    CHECK(design.columns(0, 1) == 2);
    CHECK(design.columns(1, 1) == 0);
  }
  SUBCASE("tau at or below min(q) empties the lower regime") {
    const ThresholdDesign design = build_design(data, 0.2);
    CHECK(design.columns.col(1).isZero(0.0));  // q == tau goes upper
    CHECK(design.scaling[1] == 0.0);
  }
  SUBCASE("tau above max(q) duplicates the raw block") {
    const ThresholdDesign design = build_design(data, 1.5);
    CHECK(design.columns.col(1) == design.columns.col(0));
  }
  SUBCASE("intercept columns are appended unpenalized") {
    Dataset with = data;
    with.intercept = true;
    with.thresh_intercept = true;
    const ThresholdDesign design = build_design(with, 0.5);
    CHECK(design.cols() == 4);
    CHECK(design.intercept_col == 2);
    CHECK(design.thresh_intercept_col == 3);
    CHECK(design.columns.col(2) == Vector::Ones(2));
    CHECK(design.columns(0, 3) == 1.0);
    CHECK(design.columns(1, 3) == 0.0);
    CHECK_FALSE(design.penalized[2]);
    CHECK_FALSE(design.penalized[3]);
    CHECK(design.is_delta_col(1));
    CHECK(design.is_delta_col(3));
    CHECK_FALSE(design.is_delta_col(0));
    CHECK_FALSE(design.is_delta_col(2));
  }
}

TEST_CASE("design properties on random instances") {
  CounterRng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 10 + static_cast<int>(rng.uniform01() * 20);
    const int m = 1 + static_cast<int>(rng.uniform01() * 4);
    Matrix x(n, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) x(i, j) = rng.normal();
    Vector y(n), q(n);
    for (int i = 0; i < n; ++i) {
      y[i] = rng.normal();
      q[i] = rng.uniform01();
    }
    Dataset data(x, y, q);

    const double tau1 = rng.uniform(0.1, 0.5);
    const double tau2 = rng.uniform(tau1, 0.95);
    const ThresholdDesign d1 = build_design(data, tau1);
    const ThresholdDesign d2 = build_design(data, tau2);

    // A coefficient vector with a zero regime block predicts the same at
    // any threshold.
    Vector alpha = Vector::Zero(d1.cols());
    for (int j = 0; j < m; ++j) alpha[j] = rng.normal();
    const Vector p1 = d1.columns * alpha;
    const Vector p2 = d2.columns * alpha;
    CHECK((p1 - p2).lpNorm<Eigen::Infinity>() == 0.0);

    // Regime membership grows with tau.
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) {
        const bool in1 = d1.columns(i, m + j) != 0.0;
        const bool in2 = d2.columns(i, m + j) != 0.0;
        if (in1 && x(i, j) != 0.0) CHECK(in2);
      }

    // Stored scalings match a recomputation.
    for (int j = 0; j < d1.cols(); ++j) {
      const double re = empirical_norm(d1.columns.col(j));
      CHECK(d1.scaling[j] == doctest::Approx(re).epsilon(1e-12));
      CHECK(d1.scaling[j] <= d1.scaling[j % m] * (1 + 1e-12));
    }
  }
}

TEST_CASE("rn_ratio") {
  SUBCASE("everything below t0 gives one") {
    Matrix x(3, 2);
    x << 1, 2, -1, 0.5, 2, 1;
    Dataset data(x, vec({0, 0, 0}), vec({0.1, 0.2, 0.3}));
    CHECK(rn_ratio(data, 0.9) == doctest::Approx(1.0));
  }
  SUBCASE("hand value") {
    Matrix x(2, 1);
    x << 1, 1;
    Dataset data(x, vec({0, 0}), vec({0.1, 0.9}));
    CHECK(rn_ratio(data, 0.5) == doctest::Approx(0.5));
  }
  SUBCASE("empty lower regime is flagged by a zero, not an error") {
    Matrix x(2, 1);
    x << 1, 1;
    Dataset data(x, vec({0, 0}), vec({0.6, 0.9}));
    CHECK(rn_ratio(data, 0.5) == 0.0);
  }
  SUBCASE("zero-variance column") {
    Matrix x(2, 1);
    x << 0, 0;
    Dataset data(x, vec({0, 0}), vec({0.1, 0.9}));
    CHECK_THROWS_WITH_AS(rn_ratio(data, 0.5),
                         "rn_ratio: zero-variance column",
                         std::invalid_argument);
  }
}

TEST_CASE("quantile interpolation") {
  const Vector v = vec({4, 1, 3, 2});
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 4.0);
  CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK_THROWS_AS(quantile(v, 1.5), std::invalid_argument);
}

TEST_CASE("true model support sets") {
  TrueModel truth;
  truth.beta0 = vec({2, 0, 1});
  truth.delta0 = vec({0, -2, 0});
  const auto alpha = truth.support_alpha();
  CHECK(alpha == std::vector<int>{0, 2, 4});
  CHECK(truth.support_delta() == std::vector<int>{1});
}
