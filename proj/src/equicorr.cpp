#include "tlasso/equicorr.hpp"

#include <cmath>
#include <stdexcept>

namespace tlasso {

namespace {

void check_spec(const EquicorrSpec& spec) {
  if (spec.m < 1) throw std::invalid_argument("equicorr: need m >= 1");
  if (!(spec.rho >= 0.0 && spec.rho < 1.0))
    throw std::invalid_argument("equicorr: rho outside [0, 1)");
}

}  // namespace

Matrix equicorr_sigma(const EquicorrSpec& spec) {
  check_spec(spec);
  Matrix sigma = Matrix::Constant(spec.m, spec.m, spec.rho);
  sigma.diagonal().setOnes();
  return sigma;
}

Matrix equicorr_theta(const EquicorrSpec& spec) {
  check_spec(spec);
  const double denom = 1.0 - spec.rho + spec.rho * spec.m;
  Matrix theta = Matrix::Constant(spec.m, spec.m, -spec.rho / denom);
  theta.diagonal().array() += 1.0;
  theta /= (1.0 - spec.rho);
  return theta;
}

double theta_infnorm(int m, double rho) {
  check_spec({m, rho, 0.5});
  return (1.0 - 3.0 * rho + 2.0 * m * rho) /
         ((1.0 - rho) * (1.0 - rho + m * rho));
}

ThetaTauNorm theta_tau_infnorm(const EquicorrSpec& spec) {
  check_spec(spec);
  if (!(spec.tau > 0.0 && spec.tau < 1.0))
    throw std::invalid_argument("theta_tau_infnorm: singular Sigma(tau)");

  // Row sums of a Kronecker product multiply, so the norm splits into the
  // 2x2 regime factor times the base inverse norm.
  const double factor =
      (1.0 / (1.0 - spec.tau)) * std::max(2.0, 1.0 + 1.0 / spec.tau);

  ThetaTauNorm out;
  out.value = factor * theta_infnorm(spec.m, spec.rho);
  out.bound = 2.0 / ((1.0 - spec.tau) * (1.0 - spec.rho)) *
              std::max(2.0, (spec.tau + 1.0) / spec.tau);
  out.within_bound = out.value <= out.bound * (1.0 + 1e-12);
  return out;
}

}  // namespace tlasso
