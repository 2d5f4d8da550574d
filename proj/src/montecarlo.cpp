#include "tlasso/montecarlo.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <thread>

namespace tlasso {

namespace {

constexpr std::uint64_t kTestStreamTag = 0x7E57000000000001ull;

void check_config(const DgpConfig& c) {
  if (c.n < 2 || c.m < 1)
    throw std::invalid_argument("DgpConfig: need n >= 2 and m >= 1");
  if (c.beta_nonzeros < 0 || c.beta_nonzeros > c.m ||
      c.delta_nonzeros < 0 || c.delta_nonzeros > c.m)
    throw std::invalid_argument("DgpConfig: pattern does not fit in m");
  if (c.sigma2 < 0.0)
    throw std::invalid_argument("DgpConfig: negative noise variance");
}

void run_parallel(int count, int threads, const std::function<void(int)>& body) {
  threads = std::min(std::max(threads, 1), count);
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

std::pair<Dataset, TrueModel> generate(const DgpConfig& config,
                                       std::uint64_t seed) {
  check_config(config);
  CounterRng rng(seed);
  const int n = config.n;
  const int m = config.m;

  Matrix x(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = rng.normal();
  Vector q(n);
  for (int i = 0; i < n; ++i) q[i] = rng.uniform01();

  TrueModel truth;
  truth.tau0 = config.tau0;
  truth.beta0 = Vector::Zero(m);
  truth.delta0 = Vector::Zero(m);
  for (int j = 0; j < config.beta_nonzeros; ++j) truth.beta0[j] = config.scale;
  for (int j = 0; j < config.delta_nonzeros; ++j)
    truth.delta0[j] =
        (config.delta_alternating && j % 2 == 1) ? -config.scale : config.scale;

  Vector y = x * truth.beta0;
  const Vector shift = x * truth.delta0;
  for (int i = 0; i < n; ++i)
    if (q[i] < config.tau0) y[i] += shift[i];
  if (config.sigma2 > 0.0) {
    const double sd = std::sqrt(config.sigma2);
    for (int i = 0; i < n; ++i) y[i] += sd * rng.normal();
  }

  Dataset data(std::move(x), std::move(y), std::move(q));
  data.intercept = config.include_intercept;
  return {std::move(data), std::move(truth)};
}

std::pair<Matrix, Vector> generate_test(const DgpConfig& config,
                                        std::uint64_t seed) {
  check_config(config);
  CounterRng rng(seed ^ kTestStreamTag);
  Matrix x(config.n, config.m);
  for (int j = 0; j < config.m; ++j)
    for (int i = 0; i < config.n; ++i) x(i, j) = rng.normal();
  Vector q(config.n);
  for (int i = 0; i < config.n; ++i) q[i] = rng.uniform01();
  return {std::move(x), std::move(q)};
}

namespace {

Vector predict(const Vector& alpha, const Dataset& data, const Matrix& x,
               const Vector& q, double tau) {
  const int m = data.m();
  const Vector beta = alpha.head(m);
  const Vector delta = alpha.segment(m, m);
  Vector pred = x * beta;
  const Vector shift = x * delta;
  int next = 2 * m;
  const double b0 = data.intercept ? alpha[next++] : 0.0;
  const double d0 = data.thresh_intercept ? alpha[next++] : 0.0;
  for (int i = 0; i < pred.size(); ++i) {
    pred[i] += b0;
    if (q[i] < tau) pred[i] += shift[i] + d0;
  }
  return pred;
}

SelectionMetrics selection_metrics(const Vector& alpha, const Dataset& data,
                                   const TrueModel& truth, double tau_hat,
                                   const Matrix& test_x, const Vector& test_q,
                                   const Vector& truth_pred) {
  SelectionMetrics out;
  const int m = data.m();

  Vector alpha0 = Vector::Zero(2 * m);
  alpha0.head(m) = truth.beta0;
  alpha0.segment(m, m) = truth.delta0;

  double l1 = 0.0, linf = 0.0;
  for (int j = 0; j < 2 * m; ++j) {
    const bool penalized =
        data.penalized_x[static_cast<std::size_t>(j % m)] != 0;
    if (!penalized) continue;
    const bool in_fit = alpha[j] != 0.0;
    const bool in_truth = alpha0[j] != 0.0;
    if (in_fit) ++out.n_nonzero;
    if (in_fit && !in_truth) ++out.false_pos;
    if (!in_fit && in_truth) ++out.false_neg;
    const double err = std::abs(alpha[j] - alpha0[j]);
    l1 += err;
    linf = std::max(linf, err);
  }
  out.perfect = out.false_pos == 0 && out.false_neg == 0;
  out.l1_err = l1;
  out.linf_err = linf;

  const Vector pred = predict(alpha, data, test_x, test_q, tau_hat);
  out.mse = (pred - truth_pred).squaredNorm() / pred.size();
  return out;
}

}  // namespace

RepMetrics evaluate(const FullFit& full, const Dataset& data,
                    const TrueModel& truth, const Matrix& test_x,
                    const Vector& test_q) {
  if (test_x.cols() != data.m())
    throw std::invalid_argument("evaluate: test draw dimension mismatch");

  Vector truth_pred = test_x * truth.beta0;
  const Vector shift = test_x * truth.delta0;
  for (int i = 0; i < truth_pred.size(); ++i)
    if (test_q[i] < truth.tau0) truth_pred[i] += shift[i];

  RepMetrics out;
  out.lasso = selection_metrics(full.fit.alpha_hat, data, truth,
                                full.fit.tau_hat, test_x, test_q, truth_pred);
  out.thresholded =
      selection_metrics(full.thresholded.alpha_tilde, data, truth,
                        full.fit.tau_hat, test_x, test_q, truth_pred);
  out.tau_abs_err = std::abs(full.fit.tau_hat - truth.tau0);
  out.c_hat = full.c_hat;
  out.lambda_hat = full.lambda_hat;
  out.break_detected = full.thresholded.break_detected;
  out.converged = full.fit.all_converged;
  return out;
}

ExperimentSummary run_experiment(const DgpConfig& config, int reps,
                                 std::uint64_t base_seed, int threads,
                                 const FitOptions& opts, bool keep_detail) {
  if (reps < 1) throw std::invalid_argument("run_experiment: need reps >= 1");
  check_config(config);

  std::vector<std::optional<RepMetrics>> results(static_cast<std::size_t>(reps));
  std::vector<std::string> errors(static_cast<std::size_t>(reps));

  run_parallel(reps, threads, [&](int i) {
    try {
      const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
      auto [data, truth] = generate(config, seed);
      auto [test_x, test_q] = generate_test(config, seed);
      const FullFit full = run_full_fit(data, opts);
      results[static_cast<std::size_t>(i)] =
          evaluate(full, data, truth, test_x, test_q);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  });

  ExperimentSummary summary;
  summary.config = config;
  summary.reps = reps;
  summary.base_seed = base_seed;

  for (const auto& r : results)
    if (!r) ++summary.failures;
  if (summary.failures > 0.01 * reps) {
    std::string first;
    for (int i = 0; i < reps; ++i)
      if (!results[static_cast<std::size_t>(i)]) {
        first = errors[static_cast<std::size_t>(i)];
        break;
      }
    throw std::runtime_error("run_experiment: " +
                             std::to_string(summary.failures) +
                             " replications failed, first error: " + first);
  }

  const int ok = reps - summary.failures;
  auto add = [ok](MetricMeans& mean, const SelectionMetrics& rep) {
    mean.mse += rep.mse / ok;
    mean.false_pos += static_cast<double>(rep.false_pos) / ok;
    mean.false_neg += static_cast<double>(rep.false_neg) / ok;
    mean.perfect_pct += rep.perfect ? 100.0 / ok : 0.0;
    mean.n_nonzero += static_cast<double>(rep.n_nonzero) / ok;
    mean.l1_err += rep.l1_err / ok;
    mean.linf_err += rep.linf_err / ok;
  };
  for (const auto& r : results) {
    if (!r) continue;
    add(summary.lasso, r->lasso);
    add(summary.thresholded, r->thresholded);
    summary.tau_abs_err += r->tau_abs_err / ok;
    summary.c_hat += r->c_hat / ok;
    summary.lambda_hat += r->lambda_hat / ok;
    summary.break_rate_pct += r->break_detected ? 100.0 / ok : 0.0;
    if (keep_detail) summary.detail.push_back(*r);
  }
  return summary;
}

std::vector<DgpConfig> table_suite(const std::string& name) {
  std::vector<DgpConfig> configs;
  if (name == "table1") {
    for (int m : {50, 100, 200, 400})
      for (double tau0 : {0.3, 0.4, 0.5}) {
        DgpConfig c;
        c.n = 200;
        c.m = m;
        c.tau0 = tau0;
        configs.push_back(c);
      }
  } else if (name == "table2") {
    for (int m : {50, 100, 200, 400}) {
      DgpConfig c;
      c.n = 200;
      c.m = m;
      c.delta_nonzeros = 0;
      configs.push_back(c);
    }
  } else if (name == "table3") {
    for (double tau0 : {0.3, 0.5})
      for (int n : {50, 100, 200, 500, 1000}) {
        DgpConfig c;
        c.n = n;
        c.m = 100;
        c.tau0 = tau0;
        configs.push_back(c);
      }
  } else if (name == "table4") {
    for (double a : {0.3, 0.5, 1.0, 2.0})
      for (int n : {100, 200, 1000}) {
        DgpConfig c;
        c.n = n;
        c.m = 100;
        c.scale = a;
        configs.push_back(c);
      }
  } else if (name == "table5") {
    for (int m1 : {1, 5, 10, 25})
      for (double tau0 : {0.3, 0.4, 0.5}) {
        DgpConfig c;
        c.n = 200;
        c.m = 100 + m1;
        c.beta_nonzeros = m1;
        c.delta_nonzeros = m1;
        c.delta_alternating = false;
        c.tau0 = tau0;
        configs.push_back(c);
      }
  } else {
    throw std::invalid_argument("table_suite: unknown table '" + name + "'");
  }
  return configs;
}

namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

std::string config_label(const std::string& table, const DgpConfig& c) {
  char buf[96];
  if (table == "table1")
    std::snprintf(buf, sizeof(buf), "m=%d tau0=%.1f", c.m, c.tau0);
  else if (table == "table2")
    std::snprintf(buf, sizeof(buf), "m=%d", c.m);
  else if (table == "table3")
    std::snprintf(buf, sizeof(buf), "tau0=%.1f n=%d", c.tau0, c.n);
  else if (table == "table4")
    std::snprintf(buf, sizeof(buf), "a=%g n=%d", c.scale, c.n);
  else if (table == "table5")
    std::snprintf(buf, sizeof(buf), "m1=%d tau0=%.1f", c.beta_nonzeros, c.tau0);
  else
    std::snprintf(buf, sizeof(buf), "n=%d m=%d tau0=%g", c.n, c.m, c.tau0);
  return buf;
}

std::string summaries_to_csv(const std::string& table,
                             const std::vector<ExperimentSummary>& summaries) {
  std::string out =
      "table,label,n,m,beta_nonzeros,delta_nonzeros,scale,tau0,sigma2,"
      "estimator,reps,failures,mse,false_pos,false_neg,perfect_pct,"
      "n_nonzero,l1_err,linf_err,tau_abs_err,c_hat,lambda_hat,"
      "break_rate_pct\n";
  for (const auto& s : summaries) {
    const auto& c = s.config;
    char prefix[256];
    std::snprintf(prefix, sizeof(prefix), "%s,%s,%d,%d,%d,%d,%.10g,%.10g,%.10g",
                  table.c_str(), config_label(table, c).c_str(), c.n, c.m,
                  c.beta_nonzeros, c.delta_nonzeros, c.scale, c.tau0, c.sigma2);
    auto row = [&](const char* est, const MetricMeans& m, bool thresholded) {
      char buf[512];
      std::snprintf(buf, sizeof(buf),
                    "%s,%s,%d,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,"
                    "%.10g,%s,%.10g,%s\n",
                    prefix, est, s.reps, s.failures, m.mse, m.false_pos,
                    m.false_neg, m.perfect_pct, m.n_nonzero, m.l1_err,
                    m.linf_err, s.tau_abs_err,
                    thresholded ? format("%.10g", s.c_hat).c_str() : "",
                    s.lambda_hat,
                    thresholded ? format("%.10g", s.break_rate_pct).c_str() : "");
      out += buf;
    };
    row("L", s.lasso, false);
    row("T", s.thresholded, true);
  }
  return out;
}

std::string summaries_to_text(const std::string& table,
                              const std::vector<ExperimentSummary>& summaries) {
  char buf[256];
  std::string out;
  if (summaries.empty()) return out;
  std::snprintf(buf, sizeof(buf),
                "Simulation summary: %s  (reps=%d, seed=%llu)\n", table.c_str(),
                summaries.front().reps,
                static_cast<unsigned long long>(summaries.front().base_seed));
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "%-20s %-3s %8s %7s %7s %8s %7s %7s %7s %11s %6s %7s\n",
                "config", "est", "MSE", "FP", "FN", "Perfect", "#NZ", "l1",
                "linf", "|tau-tau0|", "C", "lambda");
  out += buf;
  for (const auto& s : summaries) {
    const std::string label = config_label(table, s.config);
    std::snprintf(buf, sizeof(buf),
                  "%-20s %-3s %8.2f %7.2f %7.2f %8.0f %7.2f %7.2f %7.2f %11.2f "
                  "%6s %7.2f\n",
                  label.c_str(), "L", s.lasso.mse, s.lasso.false_pos,
                  s.lasso.false_neg, s.lasso.perfect_pct, s.lasso.n_nonzero,
                  s.lasso.l1_err, s.lasso.linf_err, s.tau_abs_err, "-",
                  s.lambda_hat);
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "%-20s %-3s %8.2f %7.2f %7.2f %8.0f %7.2f %7.2f %7.2f %11s "
                  "%6.2f %7s\n",
                  "", "T", s.thresholded.mse, s.thresholded.false_pos,
                  s.thresholded.false_neg, s.thresholded.perfect_pct,
                  s.thresholded.n_nonzero, s.thresholded.l1_err,
                  s.thresholded.linf_err, "-", s.c_hat, "-");
    out += buf;
  }
  return out;
}

namespace {

nlohmann::json metrics_json(const SelectionMetrics& m) {
  return {{"mse", m.mse},           {"false_pos", m.false_pos},
          {"false_neg", m.false_neg}, {"perfect", m.perfect},
          {"n_nonzero", m.n_nonzero}, {"l1_err", m.l1_err},
          {"linf_err", m.linf_err}};
}

nlohmann::json means_json(const MetricMeans& m) {
  return {{"mse", m.mse},           {"false_pos", m.false_pos},
          {"false_neg", m.false_neg}, {"perfect_pct", m.perfect_pct},
          {"n_nonzero", m.n_nonzero}, {"l1_err", m.l1_err},
          {"linf_err", m.linf_err}};
}

}  // namespace

std::string summaries_to_json(const std::string& table,
                              const std::vector<ExperimentSummary>& summaries) {
  nlohmann::json root;
  root["table"] = table;
  root["summaries"] = nlohmann::json::array();
  for (const auto& s : summaries) {
    nlohmann::json item;
    item["label"] = config_label(table, s.config);
    item["config"] = {{"n", s.config.n},
                      {"m", s.config.m},
                      {"beta_nonzeros", s.config.beta_nonzeros},
                      {"delta_nonzeros", s.config.delta_nonzeros},
                      {"scale", s.config.scale},
                      {"delta_alternating", s.config.delta_alternating},
                      {"tau0", s.config.tau0},
                      {"sigma2", s.config.sigma2},
                      {"include_intercept", s.config.include_intercept}};
    item["reps"] = s.reps;
    item["base_seed"] = s.base_seed;
    item["failures"] = s.failures;
    item["lasso"] = means_json(s.lasso);
    item["thresholded"] = means_json(s.thresholded);
    item["tau_abs_err"] = s.tau_abs_err;
    item["c_hat"] = s.c_hat;
    item["lambda_hat"] = s.lambda_hat;
    item["break_rate_pct"] = s.break_rate_pct;
    if (!s.detail.empty()) {
      nlohmann::json detail = nlohmann::json::array();
      for (const auto& r : s.detail) {
        detail.push_back({{"lasso", metrics_json(r.lasso)},
                          {"thresholded", metrics_json(r.thresholded)},
                          {"tau_abs_err", r.tau_abs_err},
                          {"c_hat", r.c_hat},
                          {"lambda_hat", r.lambda_hat},
                          {"break_detected", r.break_detected},
                          {"converged", r.converged}});
      }
      item["replications"] = std::move(detail);
    }
    root["summaries"].push_back(std::move(item));
  }
  return root.dump(2) + "\n";
}

}  // namespace tlasso
