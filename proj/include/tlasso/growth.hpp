#pragma once

#include "tlasso/pipeline.hpp"

#include <string>
#include <vector>

namespace tlasso {

// Country-year panel source for a pooled growth regression. The response is
// the h-year-forward average growth of the per-capita level in `gdp_col`;
// the threshold variable is `threshold_col`, which also enters as a
// regressor. An empty control list means every other column.
struct PanelSpec {
  std::string csv_path;
  std::string country_col = "country";
  std::string year_col = "year";
  std::string gdp_col = "gdp";
  std::string threshold_col = "debt";
  std::vector<std::string> control_cols;
  int horizon = 5;
  bool fixed_effects = false;   // unpenalized country dummies
  int year_min = 0;             // 0 = unbounded
  int year_max = 0;
  std::vector<int> year_list;   // explicit years, overrides min/max
  bool scale_100 = false;       // growth in percent rather than log points
  bool penalize_intercepts = false;
};

struct PanelInfo {
  int rows = 0;
  int dropped_missing = 0;      // rows lost to missing cells or bad levels
  std::vector<std::string> dropped_countries;  // series shorter than h+1
  std::vector<std::string> countries;          // used, sorted
  int year_lo = 0;
  int year_hi = 0;
  std::vector<std::string> regressors;  // controls then the threshold column
};

// Average of the h forward log-differences; entry i is the target for
// input year i, so the last h years drop. Throws when fewer than h+1
// usable levels remain.
std::vector<double> forward_average_growth(const std::vector<double>& levels,
                                           int h);

// Pooled dataset: response, threshold variable, controls plus the debt
// level, intercepts in both regimes, optional country dummies. Rows with
// any missing field are dropped and counted.
Dataset build_panel(const PanelSpec& spec, PanelInfo* info = nullptr);

struct GrowthReport {
  std::vector<std::string> names;  // intercept first, then regressors
  std::vector<double> lasso_beta;
  std::vector<double> lasso_delta;
  std::vector<double> thresh_beta;
  std::vector<double> thresh_delta;
  double tau_hat = 0.0;
  double lambda_hat = 0.0;
  double c_hat = 0.0;
  int n_obs = 0;
  bool fixed_effects = false;
  std::string sample;
  PanelInfo info;
  std::vector<int> j_delta;  // surviving regime shifts, indices into names
  bool break_detected = false;

  std::string to_csv() const;   // name,lasso_beta,lasso_delta,thresh_beta,thresh_delta
  std::string to_text() const;
  std::string to_json() const;
};

GrowthReport run_growth_regression(const PanelSpec& spec,
                                   const FitOptions& opts);

}  // namespace tlasso
