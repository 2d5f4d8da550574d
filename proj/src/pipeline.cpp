#include "tlasso/pipeline.hpp"

#include <cmath>

namespace tlasso {

FullFit run_full_fit(const Dataset& data, const FitOptions& opts) {
  FullFit out;
  out.grid = candidate_taus(data.q, opts.tau_grid);

  if (opts.fixed_lambda >= 0.0) {
    out.lambda_hat = opts.fixed_lambda;
    out.fit = fit_threshold_regression(data, out.lambda_hat, out.grid, opts.solver);
  } else if (opts.theoretical_a >= 0.0) {
    out.lambda_hat = theoretical_lambda(opts.theoretical_a, data.m(), data.n(),
                                        rn_ratio(data, out.grid.t0));
    out.fit = fit_threshold_regression(data, out.lambda_hat, out.grid, opts.solver);
  } else {
    const auto path =
        lambda_path(data, out.grid, opts.n_lambda, opts.lambda_min_ratio);
    auto [lambda_hat, fit] = select_lambda_bic(data, out.grid, path, opts.solver);
    out.lambda_hat = lambda_hat;
    out.fit = std::move(fit);
  }

  if (opts.fixed_c > 0.0) {
    const double factor = opts.c_grid.two_c_rule ? 2.0 : 1.0;
    const ThresholdDesign design = build_design(data, out.fit.tau_hat);
    out.thresholded = hard_threshold(out.fit.alpha_hat,
                                     factor * opts.fixed_c * out.lambda_hat,
                                     design);
    out.thresholded.c = opts.fixed_c;
    out.c_hat = opts.fixed_c;
  } else {
    auto [c_hat, thresholded] = select_c_bic(out.fit, data, opts.c_grid);
    out.c_hat = c_hat;
    out.thresholded = std::move(thresholded);
  }
  return out;
}

}  // namespace tlasso
