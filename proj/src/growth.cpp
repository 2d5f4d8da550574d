#include "tlasso/growth.hpp"

#include "tlasso/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace tlasso {

std::vector<double> forward_average_growth(const std::vector<double>& levels,
                                           int h) {
  if (h < 1) throw std::invalid_argument("forward_average_growth: need h >= 1");
  if (levels.size() < static_cast<std::size_t>(h) + 1)
    throw std::invalid_argument("forward_average_growth: series shorter than h+1");
  for (double v : levels)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("forward_average_growth: non-positive level");

  std::vector<double> growth(levels.size());
  for (std::size_t t = 1; t < levels.size(); ++t)
    growth[t] = std::log(levels[t]) - std::log(levels[t - 1]);

  std::vector<double> target(levels.size() - static_cast<std::size_t>(h));
  for (std::size_t t = 0; t < target.size(); ++t) {
    double sum = 0.0;
    for (int k = 1; k <= h; ++k) sum += growth[t + static_cast<std::size_t>(k)];
    target[t] = sum / h;
  }
  return target;
}

namespace {

struct CountrySeries {
  std::map<int, double> gdp;                 // valid levels by year
  std::map<int, std::vector<double>> cells;  // years with every regressor parsed
};

bool year_selected(const PanelSpec& spec, int year) {
  if (!spec.year_list.empty())
    return std::find(spec.year_list.begin(), spec.year_list.end(), year) !=
           spec.year_list.end();
  if (spec.year_min != 0 && year < spec.year_min) return false;
  if (spec.year_max != 0 && year > spec.year_max) return false;
  return true;
}

}  // namespace

Dataset build_panel(const PanelSpec& spec, PanelInfo* info_out) {
  if (spec.horizon < 1) throw std::invalid_argument("build_panel: need horizon >= 1");
  const CsvTable table = read_csv(spec.csv_path);

  const int country_idx = table.column(spec.country_col);
  const int year_idx = table.column(spec.year_col);
  const int gdp_idx = table.column(spec.gdp_col);
  const int debt_idx = table.column(spec.threshold_col);

  std::vector<std::string> controls = spec.control_cols;
  if (controls.empty()) {
    for (const auto& name : table.header)
      if (name != spec.country_col && name != spec.year_col &&
          name != spec.gdp_col && name != spec.threshold_col)
        controls.push_back(name);
  }
  std::vector<int> control_idx;
  for (const auto& name : controls) control_idx.push_back(table.column(name));

  PanelInfo info;
  info.regressors = controls;
  info.regressors.push_back(spec.threshold_col);

  // Regressor cells per row: controls in order, then the debt level. Rows
  // with a valid level still extend the growth series even when a control
  // is missing.
  std::map<std::string, CountrySeries> countries;
  std::map<std::string, std::set<int>> all_years;
  int unparsed_rows = 0;
  for (const auto& row : table.rows) {
    const std::string& country = row[static_cast<std::size_t>(country_idx)];
    double year_val;
    if (country.empty() ||
        !parse_cell(row[static_cast<std::size_t>(year_idx)], year_val)) {
      ++unparsed_rows;
      continue;
    }
    const int year = static_cast<int>(std::llround(year_val));
    if (!all_years[country].insert(year).second)
      throw IoError("build_panel: duplicate year " + std::to_string(year) +
                    " for country '" + country + "'");

    CountrySeries& series = countries[country];
    double gdp;
    if (parse_cell(row[static_cast<std::size_t>(gdp_idx)], gdp) && gdp > 0.0)
      series.gdp[year] = gdp;

    std::vector<double> cells;
    cells.reserve(control_idx.size() + 1);
    bool complete = true;
    for (int idx : control_idx) {
      double v;
      if (!parse_cell(row[static_cast<std::size_t>(idx)], v)) {
        complete = false;
        break;
      }
      cells.push_back(v);
    }
    double debt;
    if (complete && parse_cell(row[static_cast<std::size_t>(debt_idx)], debt))
      cells.push_back(debt);
    else
      complete = false;
    if (complete) series.cells[year] = std::move(cells);
  }

  const int h = spec.horizon;
  struct PanelRow {
    double target;
    std::vector<double> cells;  // controls..., debt
    int country_index;
    int year;
  };
  std::vector<PanelRow> panel;
  std::vector<std::string> used_countries;

  int dropped_rows = unparsed_rows;
  for (auto& [name, series] : countries) {
    if (series.gdp.size() < static_cast<std::size_t>(h) + 1) {
      info.dropped_countries.push_back(name);
      continue;
    }
    std::vector<PanelRow> country_rows;
    for (auto& [year, gdp] : series.gdp) {
      (void)gdp;
      // The target needs the level in every one of the next h years.
      bool complete = true;
      for (int k = 1; k <= h && complete; ++k)
        complete = series.gdp.count(year + k) > 0;
      if (!complete) continue;
      if (!year_selected(spec, year)) continue;
      auto cells = series.cells.find(year);
      if (cells == series.cells.end()) {
        ++dropped_rows;  // target exists but a regressor is missing
        continue;
      }

      double sum = 0.0;
      for (int k = 1; k <= h; ++k)
        sum += std::log(series.gdp[year + k]) - std::log(series.gdp[year + k - 1]);
      PanelRow row;
      row.target = (sum / h) * (spec.scale_100 ? 100.0 : 1.0);
      row.cells = cells->second;
      row.country_index = static_cast<int>(used_countries.size());
      row.year = year;
      country_rows.push_back(std::move(row));
    }
    if (!country_rows.empty()) {
      used_countries.push_back(name);
      panel.insert(panel.end(), country_rows.begin(), country_rows.end());
    }
  }
  info.dropped_missing = dropped_rows;

  if (panel.empty()) throw IoError("build_panel: no usable rows");

  const int n = static_cast<int>(panel.size());
  const int n_regressors = static_cast<int>(info.regressors.size());
  const bool penalized_ones = spec.penalize_intercepts;
  const int m = n_regressors + (penalized_ones ? 1 : 0);

  Matrix x(n, m);
  Vector y(n), q(n);
  info.year_lo = panel.front().year;
  info.year_hi = panel.front().year;
  for (int i = 0; i < n; ++i) {
    const auto& row = panel[static_cast<std::size_t>(i)];
    int col = 0;
    if (penalized_ones) x(i, col++) = 1.0;
    for (double v : row.cells) x(i, col++) = v;
    y[i] = row.target;
    q[i] = row.cells.back();  // debt level doubles as the threshold variable
    info.year_lo = std::min(info.year_lo, row.year);
    info.year_hi = std::max(info.year_hi, row.year);
  }

  Dataset data(std::move(x), std::move(y), std::move(q));
  if (penalized_ones) {
    data.labels.push_back("intercept");
  } else {
    data.intercept = true;
    data.thresh_intercept = true;
  }
  for (const auto& name : info.regressors) data.labels.push_back(name);

  if (spec.fixed_effects && used_countries.size() > 1) {
    // Drop-first coding keeps the dummies clear of the intercept.
    const int n_dummies = static_cast<int>(used_countries.size()) - 1;
    Matrix dummies = Matrix::Zero(n, n_dummies);
    for (int i = 0; i < n; ++i) {
      const int idx = panel[static_cast<std::size_t>(i)].country_index;
      if (idx > 0) dummies(i, idx - 1) = 1.0;
    }
    data.add_statics(std::move(dummies),
                     std::vector<std::uint8_t>(static_cast<std::size_t>(n_dummies), 0));
  }

  info.rows = n;
  info.countries = used_countries;
  if (info_out) *info_out = std::move(info);
  return data;
}

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

GrowthReport run_growth_regression(const PanelSpec& spec,
                                   const FitOptions& opts) {
  PanelInfo info;
  const Dataset data = build_panel(spec, &info);
  const FullFit full = run_full_fit(data, opts);

  GrowthReport report;
  report.info = info;
  report.n_obs = data.n();
  report.fixed_effects = spec.fixed_effects;
  report.tau_hat = full.fit.tau_hat;
  report.lambda_hat = full.lambda_hat;
  report.c_hat = full.c_hat;

  if (!spec.year_list.empty()) {
    report.sample = "years";
    for (int y : spec.year_list) report.sample += " " + std::to_string(y);
  } else {
    report.sample = std::to_string(info.year_lo) + " - " +
                    std::to_string(info.year_hi);
  }

  const ThresholdDesign design = build_design(data, full.fit.tau_hat);
  const int m = data.m();
  const Vector& hat = full.fit.alpha_hat;
  const Vector& tilde = full.thresholded.alpha_tilde;

  const bool flag_intercepts = data.intercept;
  if (flag_intercepts) {
    report.names.push_back("intercept");
    report.lasso_beta.push_back(hat[design.intercept_col]);
    report.lasso_delta.push_back(hat[design.thresh_intercept_col]);
    report.thresh_beta.push_back(tilde[design.intercept_col]);
    report.thresh_delta.push_back(tilde[design.thresh_intercept_col]);
  }
  for (int j = 0; j < m; ++j) {
    report.names.push_back(data.labels[static_cast<std::size_t>(j)]);
    report.lasso_beta.push_back(hat[j]);
    report.lasso_delta.push_back(hat[m + j]);
    report.thresh_beta.push_back(tilde[j]);
    report.thresh_delta.push_back(tilde[m + j]);
  }

  for (int raw : full.thresholded.j_delta) {
    const int offset = flag_intercepts ? 1 : 0;
    report.j_delta.push_back(raw + offset);
  }
  report.break_detected = full.thresholded.break_detected;
  return report;
}

std::string GrowthReport::to_csv() const {
  std::string out = "name,lasso_beta,lasso_delta,thresh_beta,thresh_delta\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += names[i];
    out += ',';
    out += lasso_beta[i] != 0.0 ? fmt(lasso_beta[i]) : "";
    out += ',';
    out += lasso_delta[i] != 0.0 ? fmt(lasso_delta[i]) : "";
    out += ',';
    out += thresh_beta[i] != 0.0 ? fmt(thresh_beta[i]) : "";
    out += ',';
    out += thresh_delta[i] != 0.0 ? fmt(thresh_delta[i]) : "";
    out += '\n';
  }
  return out;
}

std::string GrowthReport::to_text() const {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-14s %10s %10s %10s %10s\n", "", "beta L",
                "beta T", "delta L", "delta T");
  out += buf;
  auto cell = [](double v) -> std::string {
    if (v == 0.0) return "";
    char b[48];
    std::snprintf(b, sizeof(b), "%.3f", v);
    return b;
  };
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%-14s %10s %10s %10s %10s\n",
                  names[i].c_str(), cell(lasso_beta[i]).c_str(),
                  cell(thresh_beta[i]).c_str(), cell(lasso_delta[i]).c_str(),
                  cell(thresh_delta[i]).c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "tau_hat=%.6g lambda_hat=%.6g C_hat=%.6g\n",
                tau_hat, lambda_hat, c_hat);
  out += buf;
  std::snprintf(buf, sizeof(buf), "sample: %s  n=%d  FE=%s\n", sample.c_str(),
                n_obs, fixed_effects ? "yes" : "no");
  out += buf;
  return out;
}

std::string GrowthReport::to_json() const {
  nlohmann::json root;
  root["tau_hat"] = tau_hat;
  root["lambda_hat"] = lambda_hat;
  root["c_hat"] = c_hat;
  root["n_obs"] = n_obs;
  root["fixed_effects"] = fixed_effects;
  root["sample"] = sample;
  root["break_detected"] = break_detected;
  root["delta_support"] = nlohmann::json::array();
  for (int j : j_delta) root["delta_support"].push_back(names[static_cast<std::size_t>(j)]);
  root["dropped_missing"] = info.dropped_missing;
  root["dropped_countries"] = info.dropped_countries;
  root["countries"] = static_cast<int>(info.countries.size());
  nlohmann::json coefs = nlohmann::json::array();
  for (std::size_t i = 0; i < names.size(); ++i)
    coefs.push_back({{"name", names[i]},
                     {"lasso_beta", lasso_beta[i]},
                     {"lasso_delta", lasso_delta[i]},
                     {"thresh_beta", thresh_beta[i]},
                     {"thresh_delta", thresh_delta[i]}});
  root["coefficients"] = std::move(coefs);
  return root.dump(2) + "\n";
}

}  // namespace tlasso
