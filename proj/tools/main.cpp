// Command-line front end for the threshlasso shared library. Everything
// below talks to the C API only.

#include "threshlasso.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

namespace {

int exit_code(int rc) {
  if (rc == TL_OK) return 0;
  std::fprintf(stderr, "error: %s (%s)\n", tl_last_error(), tl_strerror(rc));
  return (rc == TL_ERR_INVALID_ARGUMENT || rc == TL_ERR_IO) ? 2 : 1;
}

bool write_file(const std::string& dir, const std::string& name,
                const char* text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return false;
  }
  out << text;
  std::printf("wrote %s\n", path.c_str());
  return true;
}

struct FitFlags {
  std::string grid;
  bool exhaustive_tau = false;
  double fixed_lambda = -1.0;
  double fixed_c = -1.0;
  double theoretical_a = -1.0;
  bool two_c_rule = false;
  int n_lambda = 100;
  double lambda_min_ratio = 0.001;
  double coef_tol = 1e-8;
  double kkt_tol = 1e-6;
  int max_sweeps = 100000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--grid", grid,
                    "Candidate-threshold centile grid as lo:hi:step")
        ->default_str("0.15:0.85:0.05");
    cmd->add_flag("--exhaustive-tau", exhaustive_tau,
                  "Search every observed threshold value inside the bounds");
    cmd->add_option("--lambda", fixed_lambda,
                    "Fixed penalty level (skips BIC selection)");
    cmd->add_option("--C", fixed_c,
                    "Fixed threshold constant (skips BIC selection)");
    cmd->add_option("--theoretical-lambda", theoretical_a,
                    "Use the closed-form penalty with this constant A");
    cmd->add_flag("--two-c-rule", two_c_rule,
                  "Hard-threshold at 2*C*lambda instead of C*lambda");
    cmd->add_option("--n-lambda", n_lambda, "Points on the penalty path");
    cmd->add_option("--lambda-min-ratio", lambda_min_ratio,
                    "Bottom of the path relative to its ceiling");
    cmd->add_option("--coef-tol", coef_tol, "Solver coefficient tolerance");
    cmd->add_option("--kkt-tol", kkt_tol, "Solver stationarity tolerance");
    cmd->add_option("--max-sweeps", max_sweeps, "Solver sweep cap");
  }

  bool fill(tl_fit_options* opts) const {
    tl_fit_options_init(opts);
    if (!grid.empty()) {
      double lo, hi, step;
      if (std::sscanf(grid.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3) {
        std::fprintf(stderr, "error: --grid expects lo:hi:step\n");
        return false;
      }
      opts->grid_lo = lo;
      opts->grid_hi = hi;
      opts->grid_step = step;
    }
    opts->exhaustive_tau = exhaustive_tau ? 1 : 0;
    opts->fixed_lambda = fixed_lambda;
    opts->fixed_c = fixed_c;
    opts->theoretical_a = theoretical_a;
    opts->two_c_rule = two_c_rule ? 1 : 0;
    opts->n_lambda = n_lambda;
    opts->lambda_min_ratio = lambda_min_ratio;
    opts->coef_tol = coef_tol;
    opts->kkt_tol = kkt_tol;
    opts->max_sweeps = max_sweeps;
    return true;
  }
};

std::string own_and_free(char* s) {
  std::string out = s ? s : "";
  tl_string_free(s);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Threshold regression with a scaled L1 penalty and hard-threshold "
      "selection"};
  app.set_config("--config", "",
                 "Read options from an INI-style file (flags win)");
  app.require_subcommand(1);

  const int default_threads =
      static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  // ---- simulate ----------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "Run seeded replications of simulation designs");
  simulate->fallthrough();
  std::string table;
  int reps = 1000;
  unsigned long long seed = 1;
  int threads = default_threads;
  std::string out_dir = ".";
  bool emit_json = false;
  simulate->add_option("--table", table,
                       "Preset suite table1..table5; omit for a custom design");
  simulate->add_option("--reps", reps, "Replications per design")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Base seed; replication i uses seed+i")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--threads", threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_flag("--json", emit_json,
                     "Also write per-replication detail as JSON");
  tl_dgp_config dgp;
  tl_dgp_config_init(&dgp);
  bool no_alternating = false;
  bool no_intercept = false;
  simulate->add_option("--n", dgp.n, "Custom design: sample size");
  simulate->add_option("--m", dgp.m, "Custom design: regressor count");
  simulate->add_option("--tau0", dgp.tau0, "Custom design: true threshold");
  simulate->add_option("--sigma2", dgp.sigma2, "Custom design: noise variance");
  simulate->add_option("--scale", dgp.scale, "Custom design: coefficient scale");
  simulate->add_option("--beta-nonzeros", dgp.beta_nonzeros,
                       "Custom design: active base coefficients");
  simulate->add_option("--delta-nonzeros", dgp.delta_nonzeros,
                       "Custom design: active regime shifts");
  simulate->add_flag("--no-alternating", no_alternating,
                     "Custom design: all shifts positive");
  simulate->add_flag("--no-intercept", no_intercept,
                     "Custom design: estimate without an intercept");
  FitFlags sim_fit;
  sim_fit.attach(simulate);

  // ---- fit ---------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand(
      "fit",
      "Fit one dataset from a CSV of regressors, response and threshold "
      "variable");
  fit_cmd->fallthrough();
  std::string fit_csv;
  std::string y_col = "y";
  std::string q_col = "q";
  std::string fit_out = ".";
  bool fit_no_intercept = false;
  bool fit_thresh_intercept = false;
  fit_cmd->add_option("input", fit_csv, "Input CSV with a header row")
      ->required();
  fit_cmd->add_option("--y-col", y_col, "Response column name");
  fit_cmd->add_option("--q-col", q_col, "Threshold-variable column name");
  fit_cmd->add_option("--out", fit_out, "Output directory");
  fit_cmd->add_flag("--no-intercept", fit_no_intercept,
                    "Do not add an intercept column");
  fit_cmd->add_flag("--thresh-intercept", fit_thresh_intercept,
                    "Add a regime-interacted intercept as well");
  FitFlags fit_fit;
  fit_fit.attach(fit_cmd);

  // ---- growth ------------------------------------------------------------
  auto* growth = app.add_subcommand(
      "growth", "Panel growth regression with a debt threshold");
  growth->fallthrough();
  std::string growth_csv;
  std::string country_col = "country";
  std::string year_col = "year";
  std::string gdp_col = "gdp";
  std::string threshold_col = "debt";
  std::string controls;
  std::string year_list;
  std::string years_range;
  std::string growth_out = ".";
  int horizon = 5;
  bool fe = false;
  bool scale_100 = false;
  bool penalize_intercepts = false;
  growth->add_option("input", growth_csv, "Country-year panel CSV")->required();
  growth->add_option("--country-col", country_col, "Country column");
  growth->add_option("--year-col", year_col, "Year column");
  growth->add_option("--gdp-col", gdp_col, "Per-capita level column");
  growth->add_option("--threshold-col", threshold_col,
                     "Debt (threshold) column; also enters as a regressor");
  growth->add_option("--controls", controls,
                     "Comma-separated control columns (default: all others)");
  growth->add_option("--horizon", horizon, "Forward-average horizon")
      ->check(CLI::PositiveNumber);
  growth->add_flag("--fe", fe, "Unpenalized country dummies");
  growth->add_option("--years", years_range, "Observation-year range lo:hi");
  growth->add_option("--year-list", year_list,
                     "Comma-separated explicit observation years");
  growth->add_flag("--scale-100", scale_100, "Growth in percent");
  growth->add_flag("--penalize-intercepts", penalize_intercepts,
                   "Penalize the two intercepts");
  growth->add_option("--out", growth_out, "Output directory");
  FitFlags growth_fit;
  growth_fit.attach(growth);

  // ---- theory-check ------------------------------------------------------
  auto* theory = app.add_subcommand(
      "theory-check",
      "Evaluate the closed-form augmented-covariance inverse norm against "
      "its bound");
  theory->fallthrough();
  std::vector<int> grid_m{2, 10, 100};
  std::vector<double> grid_rho{0.0, 0.5, 0.9};
  std::vector<double> grid_tau{0.2, 0.5, 0.8};
  theory->add_option("--grid-m", grid_m, "Dimensions to check");
  theory->add_option("--grid-rho", grid_rho, "Correlations to check");
  theory->add_option("--grid-tau", grid_tau, "Regime splits to check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (simulate->parsed()) {
    tl_fit_options opts;
    if (!sim_fit.fill(&opts)) return 2;
    dgp.delta_alternating = no_alternating ? 0 : 1;
    dgp.include_intercept = no_intercept ? 0 : 1;

    char* csv = nullptr;
    char* text = nullptr;
    char* json = nullptr;
    char** json_slot = emit_json ? &json : nullptr;
    int rc;
    std::string label;
    if (!table.empty()) {
      label = table;
      rc = tl_run_table(table.c_str(), reps, seed, threads, &opts, &csv, &text,
                        json_slot);
    } else {
      label = "custom";
      rc = tl_run_custom(&dgp, reps, seed, threads, &opts, &csv, &text,
                         json_slot);
    }
    if (rc != TL_OK) return exit_code(rc);
    const std::string csv_text = own_and_free(csv);
    const std::string table_text = own_and_free(text);
    const std::string json_text = own_and_free(json);
    std::fputs(table_text.c_str(), stdout);
    if (!write_file(out_dir, label + "_summary.csv", csv_text.c_str()) ||
        !write_file(out_dir, label + "_summary.txt", table_text.c_str()))
      return 1;
    if (emit_json &&
        !write_file(out_dir, label + "_detail.json", json_text.c_str()))
      return 1;
    return 0;
  }

  if (fit_cmd->parsed()) {
    tl_fit_options opts;
    if (!fit_fit.fill(&opts)) return 2;
    tl_dataset* data = nullptr;
    int rc = tl_dataset_from_csv(fit_csv.c_str(), y_col.c_str(), q_col.c_str(),
                                 &data);
    if (rc != TL_OK) return exit_code(rc);
    tl_dataset_set_intercepts(data, fit_no_intercept ? 0 : 1,
                              fit_thresh_intercept ? 1 : 0);
    tl_fit* fit = nullptr;
    rc = tl_fit_run(data, &opts, &fit);
    if (rc != TL_OK) {
      tl_dataset_free(data);
      return exit_code(rc);
    }
    double tau = 0, lambda = 0, c = 0;
    tl_fit_scalars(fit, &tau, &lambda, &c, nullptr);
    int detected = 0;
    tl_fit_break_detected(fit, &detected);
    std::printf("tau_hat=%.6g lambda_hat=%.6g C_hat=%.6g break=%s\n", tau,
                lambda, c, detected ? "yes" : "no");
    char* json = nullptr;
    rc = tl_fit_to_json(fit, &json);
    const std::string json_text = own_and_free(json);
    tl_fit_free(fit);
    tl_dataset_free(data);
    if (rc != TL_OK) return exit_code(rc);
    return write_file(fit_out, "fit.json", json_text.c_str()) ? 0 : 1;
  }

  if (growth->parsed()) {
    tl_fit_options opts;
    if (!growth_fit.fill(&opts)) return 2;
    tl_growth_spec spec;
    tl_growth_spec_init(&spec);
    spec.csv_path = growth_csv.c_str();
    spec.country_col = country_col.c_str();
    spec.year_col = year_col.c_str();
    spec.gdp_col = gdp_col.c_str();
    spec.threshold_col = threshold_col.c_str();
    spec.control_cols = controls.empty() ? nullptr : controls.c_str();
    spec.horizon = horizon;
    spec.fixed_effects = fe ? 1 : 0;
    if (!years_range.empty()) {
      if (std::sscanf(years_range.c_str(), "%d:%d", &spec.year_min,
                      &spec.year_max) != 2) {
        std::fprintf(stderr, "error: --years expects lo:hi\n");
        return 2;
      }
    }
    spec.year_list = year_list.empty() ? nullptr : year_list.c_str();
    spec.scale_100 = scale_100 ? 1 : 0;
    spec.penalize_intercepts = penalize_intercepts ? 1 : 0;

    char* coef = nullptr;
    char* text = nullptr;
    char* json = nullptr;
    const int rc = tl_growth_run(&spec, &opts, &coef, &text, &json);
    if (rc != TL_OK) return exit_code(rc);
    const std::string coef_text = own_and_free(coef);
    const std::string table_text = own_and_free(text);
    const std::string json_text = own_and_free(json);
    std::fputs(table_text.c_str(), stdout);
    if (!write_file(growth_out, "growth_coefficients.csv", coef_text.c_str()) ||
        !write_file(growth_out, "growth_table.txt", table_text.c_str()) ||
        !write_file(growth_out, "growth_summary.json", json_text.c_str()))
      return 1;
    return 0;
  }

  // theory-check
  char* text = nullptr;
  int violations = 0;
  const int rc = tl_theory_check(
      grid_m.data(), static_cast<int>(grid_m.size()), grid_rho.data(),
      static_cast<int>(grid_rho.size()), grid_tau.data(),
      static_cast<int>(grid_tau.size()), &text, &violations);
  if (rc != TL_OK) return exit_code(rc);
  std::fputs(own_and_free(text).c_str(), stdout);
  if (violations > 0) {
    std::fprintf(stderr, "%d bound violation(s)\n", violations);
    return 1;
  }
  return 0;
}
