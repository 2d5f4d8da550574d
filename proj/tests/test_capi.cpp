#include "threshlasso.h"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

// Two regressors with a regime shift on the first one at q < 0.5.
struct SmallData {
  std::vector<double> x;  // column-major
  std::vector<double> y;
  std::vector<double> q;
  int n = 0;
};

SmallData make_small_data() {
  SmallData d;
  d.n = 40;
  d.x.resize(2 * d.n);
  d.y.resize(d.n);
  d.q.resize(d.n);
  unsigned state = 12345;
  auto next = [&state]() {
    state = state * 1103515245u + 12345u;
    return static_cast<double>((state >> 16) & 0x7fff) / 32768.0;
  };
  for (int i = 0; i < d.n; ++i) {
    d.x[i] = 2.0 * next() - 1.0;
    d.x[d.n + i] = 2.0 * next() - 1.0;
    d.q[i] = next();
    d.y[i] = 1.5 * d.x[i] - 0.8 * d.x[d.n + i] + 0.02 * (next() - 0.5);
    if (d.q[i] < 0.5) d.y[i] += 2.0 * d.x[i];
  }
  return d;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path.string();
}

}  // namespace

TEST_CASE("error strings and version") {
  CHECK(std::string(tl_version()) == "0.1.0");
  CHECK(std::string(tl_strerror(TL_OK)) == "ok");
  CHECK(std::string(tl_strerror(TL_ERR_INVALID_ARGUMENT)) == "invalid argument");
  CHECK(std::string(tl_strerror(999)) == "unknown error");
}

TEST_CASE("dataset lifecycle and argument validation") {
  const SmallData d = make_small_data();

  tl_dataset* data = nullptr;
  CHECK(tl_dataset_create(d.n, 2, d.x.data(), d.y.data(), d.q.data(), &data) ==
        TL_OK);
  REQUIRE(data != nullptr);
  int n = 0, m = 0;
  CHECK(tl_dataset_dims(data, &n, &m) == TL_OK);
  CHECK(n == d.n);
  CHECK(m == 2);
  tl_dataset_free(data);

  CHECK(tl_dataset_create(d.n, 2, nullptr, d.y.data(), d.q.data(), &data) ==
        TL_ERR_INVALID_ARGUMENT);
  CHECK(tl_dataset_create(1, 1, d.x.data(), d.y.data(), d.q.data(), &data) ==
        TL_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(tl_last_error()) > 0);

  const double bad = std::nan("");
  std::vector<double> with_nan = d.x;
  with_nan[3] = bad;
  CHECK(tl_dataset_create(d.n, 2, with_nan.data(), d.y.data(), d.q.data(),
                          &data) == TL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("full fit through the C surface") {
  const SmallData d = make_small_data();
  tl_dataset* data = nullptr;
  REQUIRE(tl_dataset_create(d.n, 2, d.x.data(), d.y.data(), d.q.data(),
                            &data) == TL_OK);
  REQUIRE(tl_dataset_set_intercepts(data, 1, 0) == TL_OK);

  tl_fit_options opts;
  tl_fit_options_init(&opts);
  CHECK(opts.grid_lo == 0.15);
  CHECK(opts.grid_hi == 0.85);
  CHECK(opts.n_lambda == 100);
  CHECK(opts.c_hi == 5.0);

  tl_fit* fit = nullptr;
  REQUIRE(tl_fit_run(data, &opts, &fit) == TL_OK);

  int n_coef = 0, m = 0;
  CHECK(tl_fit_dims(fit, &n_coef, &m) == TL_OK);
  CHECK(m == 2);
  CHECK(n_coef == 5);  // 2m + intercept

  std::vector<double> alpha(n_coef), tilde(n_coef);
  CHECK(tl_fit_coefficients(fit, alpha.data(), tilde.data()) == TL_OK);
  CHECK(alpha[0] == doctest::Approx(1.5).epsilon(0.25));
  CHECK(tilde[2] == doctest::Approx(2.0).epsilon(0.25));  // shift on x1

  double tau = 0, lambda = -1, c = 0, bic = 0;
  CHECK(tl_fit_scalars(fit, &tau, &lambda, &c, &bic) == TL_OK);
  CHECK(tau > 0.3);
  CHECK(tau < 0.7);
  CHECK(lambda >= 0.0);

  int detected = 0;
  CHECK(tl_fit_break_detected(fit, &detected) == TL_OK);
  CHECK(detected == 1);

  int profile = 0;
  CHECK(tl_fit_profile_size(fit, &profile) == TL_OK);
  CHECK(profile == 15);
  double pt_tau = 0, criterion = 0, rss = 0;
  int converged = 0;
  CHECK(tl_fit_profile_point(fit, 0, &pt_tau, &criterion, &rss, &converged) ==
        TL_OK);
  CHECK(pt_tau < tau + 1e-12);
  CHECK(converged == 1);
  CHECK(tl_fit_profile_point(fit, 99, &pt_tau, nullptr, nullptr, nullptr) ==
        TL_ERR_INVALID_ARGUMENT);

  char* json = nullptr;
  REQUIRE(tl_fit_to_json(fit, &json) == TL_OK);
  CHECK(std::strstr(json, "\"tau_hat\"") != nullptr);
  CHECK(std::strstr(json, "\"profile\"") != nullptr);
  CHECK(std::strstr(json, "\"delta_support\"") != nullptr);
  tl_string_free(json);

  tl_fit_free(fit);
  tl_dataset_free(data);
}

TEST_CASE("csv ingestion for fits") {
  std::string csv = "x1,y,x2,q\n";
  const SmallData d = make_small_data();
  for (int i = 0; i < d.n; ++i)
    csv += std::to_string(d.x[i]) + "," + std::to_string(d.y[i]) + "," +
           std::to_string(d.x[d.n + i]) + "," + std::to_string(d.q[i]) + "\n";
  const std::string path = write_temp("tl_capi_fit.csv", csv);

  tl_dataset* data = nullptr;
  REQUIRE(tl_dataset_from_csv(path.c_str(), "y", "q", &data) == TL_OK);
  int n = 0, m = 0;
  tl_dataset_dims(data, &n, &m);
  CHECK(n == d.n);
  CHECK(m == 2);
  tl_dataset_free(data);

  CHECK(tl_dataset_from_csv("/nonexistent/data.csv", "y", "q", &data) ==
        TL_ERR_IO);
  CHECK(tl_dataset_from_csv(path.c_str(), "nope", "q", &data) == TL_ERR_IO);
}

TEST_CASE("closed-form helpers") {
  double out = 0;
  CHECK(tl_theoretical_lambda(1.0, 1, 100, 1.0, &out) == TL_OK);
  CHECK(out == doctest::Approx(0.1048147073968205).epsilon(1e-12));
  CHECK(tl_theoretical_lambda(1.0, 1, 100, 0.0, &out) ==
        TL_ERR_INVALID_ARGUMENT);

  const SmallData d = make_small_data();
  tl_dataset* data = nullptr;
  REQUIRE(tl_dataset_create(d.n, 2, d.x.data(), d.y.data(), d.q.data(),
                            &data) == TL_OK);
  CHECK(tl_rn_ratio(data, 0.5, &out) == TL_OK);
  CHECK(out > 0.0);
  CHECK(out <= 1.0);
  tl_dataset_free(data);
}

TEST_CASE("simulation harness strings") {
  tl_fit_options opts;
  tl_fit_options_init(&opts);
  opts.coef_tol = 1e-4;  // scan-grade tolerance keeps this test quick
  opts.kkt_tol = 1e-3;

  tl_dgp_config config;
  tl_dgp_config_init(&config);
  CHECK(config.n == 200);
  CHECK(config.sigma2 == 0.25);
  config.n = 60;
  config.m = 4;
  config.beta_nonzeros = 2;
  config.delta_nonzeros = 2;

  char* csv = nullptr;
  char* text = nullptr;
  char* json = nullptr;
  REQUIRE(tl_run_custom(&config, 3, 11, 1, &opts, &csv, &text, &json) == TL_OK);
  CHECK(std::strstr(csv, "table,label,n,m") == csv);
  CHECK(std::strstr(text, "Simulation summary: custom") != nullptr);
  CHECK(std::strstr(json, "\"replications\"") != nullptr);

  // Determinism of the serialized summaries.
  char* csv2 = nullptr;
  REQUIRE(tl_run_custom(&config, 3, 11, 4, &opts, &csv2, nullptr, nullptr) ==
          TL_OK);
  CHECK(std::string(csv) == csv2);

  tl_string_free(csv);
  tl_string_free(csv2);
  tl_string_free(text);
  tl_string_free(json);

  CHECK(tl_run_table("nosuch", 3, 1, 1, &opts, &csv, nullptr, nullptr) ==
        TL_ERR_INVALID_ARGUMENT);
  CHECK(tl_run_table("table1", 0, 1, 1, &opts, &csv, nullptr, nullptr) ==
        TL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("theory check table") {
  const int ms[] = {2, 10};
  const double rhos[] = {0.0, 0.5};
  const double taus[] = {0.2, 0.5, 0.8};
  char* table = nullptr;
  int violations = -1;
  REQUIRE(tl_theory_check(ms, 2, rhos, 2, taus, 3, &table, &violations) ==
          TL_OK);
  CHECK(violations == 0);
  CHECK(std::strstr(table, "bound") != nullptr);
  CHECK(std::strstr(table, "yes") != nullptr);
  CHECK(std::strstr(table, "NO") == nullptr);
  tl_string_free(table);

  const double bad_tau[] = {0.0};
  CHECK(tl_theory_check(ms, 2, rhos, 2, bad_tau, 1, &table, &violations) ==
        TL_ERR_INVALID_ARGUMENT);
  CHECK(std::strstr(tl_last_error(), "singular Sigma(tau)") != nullptr);
}

TEST_CASE("growth pipeline via the C surface") {
  // Tiny deterministic panel: one regime shift on the single control.
  std::string csv = "country,year,gdp,ctrl,debt\n";
  unsigned state = 999;
  auto next = [&state]() {
    state = state * 1103515245u + 12345u;
    return static_cast<double>((state >> 16) & 0x7fff) / 32768.0;
  };
  for (int c = 0; c < 6; ++c) {
    double lgdp = 10.0;
    std::vector<double> ctrl(14), debt(14);
    for (int t = 0; t < 14; ++t) {
      ctrl[t] = next();
      debt[t] = 100.0 * next();
    }
    std::vector<double> levels(14);
    for (int t = 0; t < 14; ++t) {
      levels[t] = std::exp(lgdp);
      const double growth =
          0.02 + 0.01 * ctrl[t] + (debt[t] < 50.0 ? 0.03 * ctrl[t] : 0.0);
      lgdp += growth;
    }
    // The construction above fixes year-over-year growth, so the forward
    // average inherits the same regime structure approximately; this test
    // only exercises the plumbing, not selection quality.
    for (int t = 0; t < 14; ++t) {
      char row[160];
      std::snprintf(row, sizeof(row), "c%d,%d,%.17g,%.17g,%.17g\n", c + 1,
                    2000 + t, levels[static_cast<std::size_t>(t)],
                    ctrl[static_cast<std::size_t>(t)],
                    debt[static_cast<std::size_t>(t)]);
      csv += row;
    }
  }
  const std::string path = write_temp("tl_capi_growth.csv", csv);

  tl_growth_spec spec;
  tl_growth_spec_init(&spec);
  spec.csv_path = path.c_str();
  spec.control_cols = "ctrl";
  spec.horizon = 3;

  char* coef = nullptr;
  char* text = nullptr;
  char* json = nullptr;
  REQUIRE(tl_growth_run(&spec, nullptr, &coef, &text, &json) == TL_OK);
  CHECK(std::strstr(coef, "name,lasso_beta") == coef);
  CHECK(std::strstr(json, "\"tau_hat\"") != nullptr);
  CHECK(std::strstr(text, "sample:") != nullptr);
  tl_string_free(coef);
  tl_string_free(text);
  tl_string_free(json);

  spec.csv_path = "/nonexistent/panel.csv";
  CHECK(tl_growth_run(&spec, nullptr, &coef, nullptr, nullptr) == TL_ERR_IO);
}
