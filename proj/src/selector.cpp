#include "tlasso/selector.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tlasso {

double theoretical_lambda(double a, int m, int n, double rn) {
  if (a < 0.0) throw std::invalid_argument("theoretical_lambda: negative constant");
  if (m < 1 || n < 1)
    throw std::invalid_argument("theoretical_lambda: need m >= 1 and n >= 1");
  if (!(rn > 0.0))
    throw std::invalid_argument("theoretical_lambda: degenerate regime norm ratio");
  return a * std::sqrt(std::log(3.0 * m) / (n * rn));
}

ThresholdedFit hard_threshold(const Vector& alpha_hat, double h,
                              const std::vector<std::uint8_t>& penalized,
                              int m) {
  if (h < 0.0) throw std::invalid_argument("hard_threshold: negative cutoff");
  if (penalized.size() != static_cast<std::size_t>(alpha_hat.size()))
    throw std::invalid_argument("hard_threshold: mask size mismatch");

  ThresholdedFit out;
  out.c = std::numeric_limits<double>::quiet_NaN();
  out.h = h;
  out.alpha_tilde = alpha_hat;
  for (int j = 0; j < alpha_hat.size(); ++j) {
    if (!penalized[static_cast<std::size_t>(j)]) continue;
    if (std::abs(alpha_hat[j]) >= h) {
      if (alpha_hat[j] != 0.0) {
        out.j_alpha.push_back(j);
        if (j >= m && j < 2 * m) out.j_delta.push_back(j - m);
      }
    } else {
      out.alpha_tilde[j] = 0.0;
    }
  }
  out.break_detected = !out.j_delta.empty();
  return out;
}

ThresholdedFit hard_threshold(const Vector& alpha_hat, double h,
                              const ThresholdDesign& design) {
  return hard_threshold(alpha_hat, h, design.penalized, design.m);
}

std::pair<double, ThresholdedFit> select_c_bic(const ThresholdRegressionFit& fit,
                                               const Dataset& data,
                                               const CGridSpec& grid) {
  if (!(grid.step > 0.0) || grid.hi < grid.lo)
    throw std::invalid_argument("select_c_bic: empty C grid");

  const ThresholdDesign design = build_design(data, fit.tau_hat);
  const int n = data.n();
  const double factor = grid.two_c_rule ? 2.0 : 1.0;
  const int steps = static_cast<int>(std::round((grid.hi - grid.lo) / grid.step));

  const double base_rss =
      (data.y - design.columns * fit.alpha_hat).squaredNorm() / n;

  bool have_best = false;
  double best_bic = 0.0;
  double best_c = grid.lo;
  ThresholdedFit best;
  int cached_df = -1;
  double cached_cost = 0.0;

  for (int i = 0; i <= steps; ++i) {
    const double c = std::min(grid.lo + i * grid.step, grid.hi);
    ThresholdedFit candidate =
        hard_threshold(fit.alpha_hat, factor * c * fit.lambda, design);
    candidate.c = c;

    int df = 0;
    bool delta_nonzero = false;
    for (int j = 0; j < candidate.alpha_tilde.size(); ++j) {
      if (candidate.alpha_tilde[j] == 0.0) continue;
      ++df;
      if (design.is_delta_col(j)) delta_nonzero = true;
    }
    if (delta_nonzero) ++df;

    // Deviance of the candidate support, expanded around the fitted
    // coefficients. The plug-in rss of alpha_tilde moves by the KKT cross
    // term 2*lambda*w_j*|alpha_j| per zeroed coordinate, which is exactly
    // the penalty the smaller model no longer pays; the deviance charge is
    // only the part of the removed fit that the surviving columns cannot
    // represent.
    if (df != cached_df) {  // the supports are nested along the C ladder
      cached_df = df;
      cached_cost = 0.0;
      std::vector<int> kept;
      bool any_dropped = false;
      for (int j = 0; j < candidate.alpha_tilde.size(); ++j) {
        if (candidate.alpha_tilde[j] != 0.0)
          kept.push_back(j);
        else if (fit.alpha_hat[j] != 0.0)
          any_dropped = true;
      }
      if (any_dropped) {
        const Vector removed =
            design.columns * (fit.alpha_hat - candidate.alpha_tilde);
        Vector orthogonal = removed;
        if (!kept.empty()) {
          Matrix sub(design.n(), static_cast<int>(kept.size()));
          for (std::size_t k = 0; k < kept.size(); ++k)
            sub.col(static_cast<int>(k)) = design.columns.col(kept[k]);
          orthogonal -= sub * sub.colPivHouseholderQr().solve(removed);
        }
        cached_cost = orthogonal.squaredNorm() / n;
      }
    }

    double rss = base_rss + cached_cost;
    if (rss < 1e-300) rss = 1e-300;
    const double bic = n * std::log(rss) + df * std::log(static_cast<double>(n));

    if (!have_best || bic <= best_bic) {  // ties advance to the larger C
      have_best = true;
      best_bic = bic;
      best_c = c;
      best = std::move(candidate);
    }
  }
  return {best_c, std::move(best)};
}

std::pair<bool, std::vector<int>> detect_break(const ThresholdedFit& fit) {
  return {fit.break_detected, fit.j_delta};
}

}  // namespace tlasso
