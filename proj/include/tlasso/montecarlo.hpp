#pragma once

#include "tlasso/pipeline.hpp"
#include "tlasso/rng.hpp"

#include <cstdint>
#include <string>

namespace tlasso {

// Two-regime data generating process: x standard normal, q uniform(0, 1),
// noise normal with variance sigma2, and sparse leading-coefficient
// patterns beta = scale * (1, ..., 1, 0, ...) and delta = scale *
// (1, -1, 1, ...) when alternating, all +1 otherwise.
struct DgpConfig {
  int n = 200;
  int m = 100;
  int beta_nonzeros = 5;
  int delta_nonzeros = 5;
  double scale = 2.0;
  bool delta_alternating = true;
  double tau0 = 0.5;
  double sigma2 = 0.25;
  bool include_intercept = true;
};

std::pair<Dataset, TrueModel> generate(const DgpConfig& config,
                                       std::uint64_t seed);

// Independent noiseless draw of (x, q) from the same process, for
// out-of-sample evaluation of the fitted regression function.
std::pair<Matrix, Vector> generate_test(const DgpConfig& config,
                                        std::uint64_t seed);

struct SelectionMetrics {
  double mse = 0.0;
  int false_pos = 0;  // zero coefficients retained
  int false_neg = 0;  // true coefficients excluded
  bool perfect = false;
  int n_nonzero = 0;
  double l1_err = 0.0;
  double linf_err = 0.0;
};

struct RepMetrics {
  SelectionMetrics lasso;
  SelectionMetrics thresholded;
  double tau_abs_err = 0.0;
  double c_hat = 0.0;
  double lambda_hat = 0.0;
  bool break_detected = false;
  bool converged = true;
};

// All per-replication statistics. Supports and coefficient errors run over
// the penalized coordinates only; the mse compares fitted and true
// regression functions on the supplied noiseless test draw.
RepMetrics evaluate(const FullFit& full, const Dataset& data,
                    const TrueModel& truth, const Matrix& test_x,
                    const Vector& test_q);

struct MetricMeans {
  double mse = 0.0;
  double false_pos = 0.0;
  double false_neg = 0.0;
  double perfect_pct = 0.0;
  double n_nonzero = 0.0;
  double l1_err = 0.0;
  double linf_err = 0.0;
};

struct ExperimentSummary {
  DgpConfig config;
  int reps = 0;
  std::uint64_t base_seed = 0;
  int failures = 0;
  MetricMeans lasso;
  MetricMeans thresholded;
  double tau_abs_err = 0.0;
  double c_hat = 0.0;
  double lambda_hat = 0.0;
  double break_rate_pct = 0.0;  // share of reps with a detected break
  std::vector<RepMetrics> detail;  // kept only on request
};

// Seeded replications of generate -> fit -> threshold -> evaluate, with
// replication i drawing from seed base_seed + i. Aggregation is ordered by
// replication index, so the summary is identical for any thread count.
// Hard failures are excluded and counted; more than 1% of them aborts.
ExperimentSummary run_experiment(const DgpConfig& config, int reps,
                                 std::uint64_t base_seed, int threads,
                                 const FitOptions& opts,
                                 bool keep_detail = false);

// The preset simulation grids, by suite name table1..table5.
std::vector<DgpConfig> table_suite(const std::string& name);

// Row label mirroring the suite's varying axes, e.g. "m=100 tau0=0.5".
std::string config_label(const std::string& table, const DgpConfig& config);

std::string summaries_to_csv(const std::string& table,
                             const std::vector<ExperimentSummary>& summaries);
std::string summaries_to_text(const std::string& table,
                              const std::vector<ExperimentSummary>& summaries);
std::string summaries_to_json(const std::string& table,
                              const std::vector<ExperimentSummary>& summaries);

}  // namespace tlasso
