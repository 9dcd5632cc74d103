#include "renewalkit/perturbation.hpp"

#include <algorithm>

namespace renewal {

void TruncationParams::validate() const {
  if (!(theta > 0.0) || !(theta_star > 0.0))
    throw ConfigError("truncation caps must be positive");
  if (!(alpha > 0.5) || !(alpha <= 1.0))
    throw ConfigError("alpha must lie in (1/2, 1]");
  if (!(delta0 > 0.0) || !(delta0 < 1.0))
    throw ConfigError("delta0 must lie in (0, 1)");
  if (!(K > 0.0) || !(w0 > 0.0))
    throw ConfigError("K and w0 must be positive");
  if (!(p >= 1.0)) throw ConfigError("p must be at least 1");
  if (!(rho.beta >= 0.0) || !(rho.beta < 1.0))
    throw ConfigError("rho exponent beta must lie in [0, 1)");
  if (!(rho.gamma >= 0.0))
    throw ConfigError("rho log exponent gamma must be nonnegative");
  // rho(x)/x must decay; spot-check on a geometric grid away from the
  // max(1, .) plateau.
  double prev = rho(1e3) / 1e3;
  for (double x = 1e4; x <= 1e9; x *= 10.0) {
    const double cur = rho(x) / x;
    if (!(cur < prev)) throw ConfigError("rho(x)/x must decrease");
    prev = cur;
  }
}

void TruncationParams::validate_against_mu(double mu) const {
  if (!(mu > 0.0)) throw DriftError("crossing experiments need positive drift");
  if (!(theta_star < K * mu))
    throw ConfigError("need theta_star < K * mu");
  if (alpha == 1.0 && !(theta < mu))
    throw ConfigError("alpha = 1 needs theta < mu");
}

double zeta(double xi, std::size_t n, const TruncationParams& tp) {
  const double cap = std::pow(static_cast<double>(n), tp.alpha);
  return std::max(std::min(xi, tp.theta * cap), -tp.theta_star * cap);
}

PerturbationModel PerturbationModel::zero() { return PerturbationModel{}; }

PerturbationModel PerturbationModel::constant(double c) {
  PerturbationModel m;
  m.kind_ = PerturbationKind::constant;
  m.offset_ = c;
  return m;
}

PerturbationModel PerturbationModel::scaled_partial_sum() {
  PerturbationModel m;
  m.kind_ = PerturbationKind::scaled_partial_sum;
  return m;
}

PerturbationModel PerturbationModel::rank_residual() {
  PerturbationModel m;
  m.kind_ = PerturbationKind::rank_residual;
  return m;
}

}  // namespace renewal
