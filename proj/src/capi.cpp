#include "threshlasso.h"

#include "tlasso/csv.hpp"
#include "tlasso/equicorr.hpp"
#include "tlasso/growth.hpp"
#include "tlasso/montecarlo.hpp"
#include "tlasso/pipeline.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

struct tl_dataset {
  tlasso::Dataset data;
};

struct tl_fit {
  tlasso::FullFit full;
  std::vector<std::string> labels;
  bool intercept = false;
  bool thresh_intercept = false;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return TL_ERR_INVALID_ARGUMENT;
  } catch (const tlasso::IoError& e) {
    g_last_error = e.what();
    return TL_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TL_ERR_NOMEM;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TL_ERR_RUNTIME;
  }
}

int invalid(const char* message) {
  g_last_error = message;
  return TL_ERR_INVALID_ARGUMENT;
}

tlasso::FitOptions convert(const tl_fit_options* opts) {
  tlasso::FitOptions out;
  if (!opts) return out;
  out.tau_grid.lo = opts->grid_lo;
  out.tau_grid.hi = opts->grid_hi;
  out.tau_grid.step = opts->grid_step;
  out.tau_grid.exhaustive = opts->exhaustive_tau != 0;
  out.n_lambda = opts->n_lambda;
  out.lambda_min_ratio = opts->lambda_min_ratio;
  out.fixed_lambda = opts->fixed_lambda;
  out.theoretical_a = opts->theoretical_a;
  out.c_grid.lo = opts->c_lo;
  out.c_grid.hi = opts->c_hi;
  out.c_grid.step = opts->c_step;
  out.c_grid.two_c_rule = opts->two_c_rule != 0;
  out.fixed_c = opts->fixed_c;
  out.solver.coef_tol = opts->coef_tol;
  out.solver.kkt_tol = opts->kkt_tol;
  out.solver.max_sweeps = opts->max_sweeps;
  return out;
}

std::vector<std::string> split_list(const char* csv) {
  std::vector<std::string> out;
  if (!csv) return out;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    while (!item.empty() && (item.front() == ' ' || item.front() == '\t'))
      item.erase(item.begin());
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t'))
      item.pop_back();
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

extern "C" {

const char* tl_version(void) { return "0.1.0"; }

const char* tl_strerror(int code) {
  switch (code) {
    case TL_OK: return "ok";
    case TL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TL_ERR_RUNTIME: return "runtime failure";
    case TL_ERR_IO: return "input/output failure";
    case TL_ERR_NOMEM: return "out of memory";
    default: return "unknown error";
  }
}

const char* tl_last_error(void) { return g_last_error.c_str(); }

void tl_string_free(char* s) { std::free(s); }

int tl_dataset_create(int n, int m, const double* x, const double* y,
                      const double* q, tl_dataset** out) {
  if (!x || !y || !q || !out) return invalid("tl_dataset_create: null argument");
  return guarded([&]() {
    tlasso::Matrix xm = Eigen::Map<const tlasso::Matrix>(x, n, m);
    tlasso::Vector yv = Eigen::Map<const tlasso::Vector>(y, n);
    tlasso::Vector qv = Eigen::Map<const tlasso::Vector>(q, n);
    *out = new tl_dataset{
        tlasso::Dataset(std::move(xm), std::move(yv), std::move(qv))};
    return TL_OK;
  });
}

int tl_dataset_set_intercepts(tl_dataset* data, int intercept,
                              int thresh_intercept) {
  if (!data) return invalid("tl_dataset_set_intercepts: null dataset");
  data->data.intercept = intercept != 0;
  data->data.thresh_intercept = thresh_intercept != 0;
  return TL_OK;
}

int tl_dataset_from_csv(const char* path, const char* y_col,
                        const char* q_col, tl_dataset** out) {
  if (!path || !out) return invalid("tl_dataset_from_csv: null argument");
  return guarded([&]() {
    const tlasso::CsvTable table = tlasso::read_csv(path);
    const std::string y_name = y_col ? y_col : "y";
    const std::string q_name = q_col ? q_col : "q";
    const int yi = table.column(y_name);
    const int qi = table.column(q_name);
    std::vector<int> xi;
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (static_cast<int>(j) == yi || static_cast<int>(j) == qi) continue;
      xi.push_back(static_cast<int>(j));
      labels.push_back(table.header[j]);
    }
    if (xi.empty()) throw tlasso::IoError("csv: no regressor columns");

    const int n = static_cast<int>(table.rows.size());
    const int m = static_cast<int>(xi.size());
    tlasso::Matrix x(n, m);
    tlasso::Vector y(n), q(n);
    for (int i = 0; i < n; ++i) {
      const auto& row = table.rows[static_cast<std::size_t>(i)];
      double v;
      if (!tlasso::parse_cell(row[static_cast<std::size_t>(yi)], v))
        throw tlasso::IoError("csv: bad response in data row " + std::to_string(i + 1));
      y[i] = v;
      if (!tlasso::parse_cell(row[static_cast<std::size_t>(qi)], v))
        throw tlasso::IoError("csv: bad threshold value in data row " + std::to_string(i + 1));
      q[i] = v;
      for (int j = 0; j < m; ++j) {
        const int col = xi[static_cast<std::size_t>(j)];
        if (!tlasso::parse_cell(row[static_cast<std::size_t>(col)], v))
          throw tlasso::IoError("csv: bad value in data row " + std::to_string(i + 1) +
                                ", column '" + labels[static_cast<std::size_t>(j)] + "'");
        x(i, j) = v;
      }
    }
    auto* handle = new tl_dataset{
        tlasso::Dataset(std::move(x), std::move(y), std::move(q))};
    handle->data.labels = std::move(labels);
    handle->data.intercept = true;
    *out = handle;
    return TL_OK;
  });
}

int tl_dataset_dims(const tl_dataset* data, int* n, int* m) {
  if (!data) return invalid("tl_dataset_dims: null dataset");
  if (n) *n = data->data.n();
  if (m) *m = data->data.m();
  return TL_OK;
}

void tl_dataset_free(tl_dataset* data) { delete data; }

void tl_fit_options_init(tl_fit_options* opts) {
  if (!opts) return;
  const tlasso::FitOptions defaults;
  opts->grid_lo = defaults.tau_grid.lo;
  opts->grid_hi = defaults.tau_grid.hi;
  opts->grid_step = defaults.tau_grid.step;
  opts->exhaustive_tau = 0;
  opts->n_lambda = defaults.n_lambda;
  opts->lambda_min_ratio = defaults.lambda_min_ratio;
  opts->fixed_lambda = -1.0;
  opts->theoretical_a = -1.0;
  opts->c_lo = defaults.c_grid.lo;
  opts->c_hi = defaults.c_grid.hi;
  opts->c_step = defaults.c_grid.step;
  opts->fixed_c = -1.0;
  opts->two_c_rule = 0;
  opts->coef_tol = defaults.solver.coef_tol;
  opts->kkt_tol = defaults.solver.kkt_tol;
  opts->max_sweeps = defaults.solver.max_sweeps;
}

int tl_fit_run(const tl_dataset* data, const tl_fit_options* opts,
               tl_fit** out) {
  if (!data || !out) return invalid("tl_fit_run: null argument");
  return guarded([&]() {
    auto* fit = new tl_fit;
    fit->full = tlasso::run_full_fit(data->data, convert(opts));
    fit->labels = data->data.labels;
    fit->intercept = data->data.intercept;
    fit->thresh_intercept = data->data.thresh_intercept;
    *out = fit;
    return TL_OK;
  });
}

int tl_fit_dims(const tl_fit* fit, int* n_coef, int* m) {
  if (!fit) return invalid("tl_fit_dims: null fit");
  if (n_coef) *n_coef = static_cast<int>(fit->full.fit.alpha_hat.size());
  if (m) *m = fit->full.fit.m;
  return TL_OK;
}

int tl_fit_coefficients(const tl_fit* fit, double* alpha_hat,
                        double* alpha_tilde) {
  if (!fit) return invalid("tl_fit_coefficients: null fit");
  const auto size = static_cast<std::size_t>(fit->full.fit.alpha_hat.size());
  if (alpha_hat)
    std::memcpy(alpha_hat, fit->full.fit.alpha_hat.data(), size * sizeof(double));
  if (alpha_tilde)
    std::memcpy(alpha_tilde, fit->full.thresholded.alpha_tilde.data(),
                size * sizeof(double));
  return TL_OK;
}

int tl_fit_scalars(const tl_fit* fit, double* tau_hat, double* lambda_hat,
                   double* c_hat, double* bic) {
  if (!fit) return invalid("tl_fit_scalars: null fit");
  if (tau_hat) *tau_hat = fit->full.fit.tau_hat;
  if (lambda_hat) *lambda_hat = fit->full.lambda_hat;
  if (c_hat) *c_hat = fit->full.c_hat;
  if (bic) *bic = fit->full.fit.bic;
  return TL_OK;
}

int tl_fit_break_detected(const tl_fit* fit, int* detected) {
  if (!fit || !detected) return invalid("tl_fit_break_detected: null argument");
  *detected = fit->full.thresholded.break_detected ? 1 : 0;
  return TL_OK;
}

int tl_fit_profile_size(const tl_fit* fit, int* size) {
  if (!fit || !size) return invalid("tl_fit_profile_size: null argument");
  *size = static_cast<int>(fit->full.fit.profile.size());
  return TL_OK;
}

int tl_fit_profile_point(const tl_fit* fit, int index, double* tau,
                         double* criterion, double* rss_n, int* converged) {
  if (!fit) return invalid("tl_fit_profile_point: null fit");
  if (index < 0 || index >= static_cast<int>(fit->full.fit.profile.size()))
    return invalid("tl_fit_profile_point: index out of range");
  const auto& pt = fit->full.fit.profile[static_cast<std::size_t>(index)];
  if (tau) *tau = pt.tau;
  if (criterion) *criterion = pt.criterion;
  if (rss_n) *rss_n = pt.fit.rss_n;
  if (converged) *converged = pt.fit.converged ? 1 : 0;
  return TL_OK;
}

int tl_fit_to_json(const tl_fit* fit, char** json) {
  if (!fit || !json) return invalid("tl_fit_to_json: null argument");
  return guarded([&]() {
    const auto& full = fit->full;
    const int m = full.fit.m;
    auto name = [&](int j) -> std::string {
      if (j < static_cast<int>(fit->labels.size())) return fit->labels[static_cast<std::size_t>(j)];
      return "x" + std::to_string(j + 1);
    };

    nlohmann::json root;
    root["tau_hat"] = full.fit.tau_hat;
    root["lambda_hat"] = full.lambda_hat;
    root["c_hat"] = full.c_hat;
    root["cutoff"] = full.thresholded.h;
    root["bic"] = full.fit.bic;
    root["converged"] = full.fit.all_converged;
    root["break_detected"] = full.thresholded.break_detected;

    nlohmann::json coefs = nlohmann::json::array();
    for (int j = 0; j < m; ++j)
      coefs.push_back({{"name", name(j)},
                       {"beta_hat", full.fit.alpha_hat[j]},
                       {"delta_hat", full.fit.alpha_hat[m + j]},
                       {"beta_tilde", full.thresholded.alpha_tilde[j]},
                       {"delta_tilde", full.thresholded.alpha_tilde[m + j]}});
    root["coefficients"] = std::move(coefs);

    int next = 2 * m;
    if (fit->intercept) {
      root["intercept_hat"] = full.fit.alpha_hat[next];
      root["intercept_tilde"] = full.thresholded.alpha_tilde[next];
      ++next;
    }
    if (fit->thresh_intercept) {
      root["thresh_intercept_hat"] = full.fit.alpha_hat[next];
      root["thresh_intercept_tilde"] = full.thresholded.alpha_tilde[next];
    }

    nlohmann::json delta_support = nlohmann::json::array();
    for (int j : full.thresholded.j_delta) delta_support.push_back(name(j));
    root["delta_support"] = std::move(delta_support);

    nlohmann::json trace = nlohmann::json::array();
    for (const auto& pt : full.fit.profile)
      trace.push_back({{"tau", pt.tau},
                       {"criterion", pt.criterion},
                       {"rss_n", pt.fit.rss_n},
                       {"converged", pt.fit.converged}});
    root["profile"] = std::move(trace);

    *json = dup_string(root.dump(2) + "\n");
    return TL_OK;
  });
}

void tl_fit_free(tl_fit* fit) { delete fit; }

int tl_theoretical_lambda(double a, int m, int n, double rn, double* out) {
  if (!out) return invalid("tl_theoretical_lambda: null output");
  return guarded([&]() {
    *out = tlasso::theoretical_lambda(a, m, n, rn);
    return TL_OK;
  });
}

int tl_rn_ratio(const tl_dataset* data, double t0, double* out) {
  if (!data || !out) return invalid("tl_rn_ratio: null argument");
  return guarded([&]() {
    *out = tlasso::rn_ratio(data->data, t0);
    return TL_OK;
  });
}

void tl_dgp_config_init(tl_dgp_config* config) {
  if (!config) return;
  const tlasso::DgpConfig defaults;
  config->n = defaults.n;
  config->m = defaults.m;
  config->beta_nonzeros = defaults.beta_nonzeros;
  config->delta_nonzeros = defaults.delta_nonzeros;
  config->scale = defaults.scale;
  config->delta_alternating = defaults.delta_alternating ? 1 : 0;
  config->tau0 = defaults.tau0;
  config->sigma2 = defaults.sigma2;
  config->include_intercept = defaults.include_intercept ? 1 : 0;
}

namespace {

int run_configs(const std::string& label, const std::vector<tlasso::DgpConfig>& configs,
                int reps, unsigned long long seed, int threads,
                const tl_fit_options* opts, char** csv, char** text,
                char** json) {
  return guarded([&]() {
    const tlasso::FitOptions fit_opts = convert(opts);
    std::vector<tlasso::ExperimentSummary> summaries;
    summaries.reserve(configs.size());
    for (const auto& config : configs)
      summaries.push_back(tlasso::run_experiment(config, reps, seed, threads,
                                                 fit_opts, json != nullptr));
    if (csv) *csv = dup_string(tlasso::summaries_to_csv(label, summaries));
    if (text) *text = dup_string(tlasso::summaries_to_text(label, summaries));
    if (json) *json = dup_string(tlasso::summaries_to_json(label, summaries));
    return TL_OK;
  });
}

}  // namespace

int tl_run_table(const char* table, int reps, unsigned long long seed,
                 int threads, const tl_fit_options* opts, char** csv,
                 char** text, char** json) {
  if (!table) return invalid("tl_run_table: null table name");
  if (reps < 1) return invalid("tl_run_table: need reps >= 1");
  std::vector<tlasso::DgpConfig> configs;
  const int rc = guarded([&]() {
    configs = tlasso::table_suite(table);
    return TL_OK;
  });
  if (rc != TL_OK) return rc;
  return run_configs(table, configs, reps, seed, threads, opts, csv, text, json);
}

int tl_run_custom(const tl_dgp_config* config, int reps,
                  unsigned long long seed, int threads,
                  const tl_fit_options* opts, char** csv, char** text,
                  char** json) {
  if (!config) return invalid("tl_run_custom: null config");
  if (reps < 1) return invalid("tl_run_custom: need reps >= 1");
  tlasso::DgpConfig c;
  c.n = config->n;
  c.m = config->m;
  c.beta_nonzeros = config->beta_nonzeros;
  c.delta_nonzeros = config->delta_nonzeros;
  c.scale = config->scale;
  c.delta_alternating = config->delta_alternating != 0;
  c.tau0 = config->tau0;
  c.sigma2 = config->sigma2;
  c.include_intercept = config->include_intercept != 0;
  return run_configs("custom", {c}, reps, seed, threads, opts, csv, text, json);
}

void tl_growth_spec_init(tl_growth_spec* spec) {
  if (!spec) return;
  spec->csv_path = nullptr;
  spec->country_col = "country";
  spec->year_col = "year";
  spec->gdp_col = "gdp";
  spec->threshold_col = "debt";
  spec->control_cols = nullptr;
  spec->horizon = 5;
  spec->fixed_effects = 0;
  spec->year_min = 0;
  spec->year_max = 0;
  spec->year_list = nullptr;
  spec->scale_100 = 0;
  spec->penalize_intercepts = 0;
}

int tl_growth_run(const tl_growth_spec* spec, const tl_fit_options* opts,
                  char** coef_csv, char** text, char** json) {
  if (!spec || !spec->csv_path) return invalid("tl_growth_run: null spec or path");
  return guarded([&]() {
    tlasso::PanelSpec panel;
    panel.csv_path = spec->csv_path;
    if (spec->country_col) panel.country_col = spec->country_col;
    if (spec->year_col) panel.year_col = spec->year_col;
    if (spec->gdp_col) panel.gdp_col = spec->gdp_col;
    if (spec->threshold_col) panel.threshold_col = spec->threshold_col;
    panel.control_cols = split_list(spec->control_cols);
    panel.horizon = spec->horizon;
    panel.fixed_effects = spec->fixed_effects != 0;
    panel.year_min = spec->year_min;
    panel.year_max = spec->year_max;
    for (const auto& item : split_list(spec->year_list))
      panel.year_list.push_back(std::stoi(item));
    panel.scale_100 = spec->scale_100 != 0;
    panel.penalize_intercepts = spec->penalize_intercepts != 0;

    const tlasso::GrowthReport report =
        tlasso::run_growth_regression(panel, convert(opts));
    if (coef_csv) *coef_csv = dup_string(report.to_csv());
    if (text) *text = dup_string(report.to_text());
    if (json) *json = dup_string(report.to_json());
    return TL_OK;
  });
}

int tl_theory_check(const int* ms, int n_m, const double* rhos, int n_rho,
                    const double* taus, int n_tau, char** table,
                    int* violations) {
  if (!ms || !rhos || !taus) return invalid("tl_theory_check: null grid");
  if (n_m < 1 || n_rho < 1 || n_tau < 1)
    return invalid("tl_theory_check: empty grid");
  return guarded([&]() {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%6s %6s %6s %14s %14s %4s\n", "m", "rho",
                  "tau", "norm", "bound", "ok");
    out += buf;
    int bad = 0;
    for (int i = 0; i < n_m; ++i)
      for (int j = 0; j < n_rho; ++j)
        for (int k = 0; k < n_tau; ++k) {
          const tlasso::EquicorrSpec spec{ms[i], rhos[j], taus[k]};
          const tlasso::ThetaTauNorm norm = tlasso::theta_tau_infnorm(spec);
          if (!norm.within_bound) ++bad;
          std::snprintf(buf, sizeof(buf), "%6d %6.3f %6.3f %14.6f %14.6f %4s\n",
                        spec.m, spec.rho, spec.tau, norm.value, norm.bound,
                        norm.within_bound ? "yes" : "NO");
          out += buf;
        }
    if (table) *table = dup_string(out);
    if (violations) *violations = bad;
    return TL_OK;
  });
}

}  // extern "C"
