#pragma once

#include <cmath>
#include <cstddef>

#include "renewalkit/errors.hpp"

namespace renewal {

// Growth envelope rho(x) = max(1, x^beta * log(e + x)^gamma), beta in [0,1).
// beta = gamma = 0 gives rho identically 1.
struct RhoFunction {
  double beta = 0.0;
  double gamma = 0.0;

  double operator()(double x) const {
    if (!(x > 0.0)) return 1.0;
    return std::max(1.0, std::pow(x, beta) *
                             std::pow(std::log(std::exp(1.0) + x), gamma));
  }
};

// Parameters of the capped perturbation
//   zeta_n = min(xi_n, theta n^alpha) capped below at -theta_star n^alpha,
// plus the regularity knobs (delta0, K, w0, p) and the envelope rho used by
// the diagnostics and the intermediate-order error bands.
struct TruncationParams {
  double theta = 1.0;
  double theta_star = 1.0;
  double alpha = 0.6;   // in (1/2, 1]
  double delta0 = 0.5;  // in (0, 1)
  double K = 2.0;       // default keeps theta_star < K mu for unit drift
  double w0 = 0.5;
  double p = 1.0;  // >= 1
  RhoFunction rho{};

  // Structural checks that need no drift value.
  void validate() const;
  // Checks tied to the walk drift: theta_star < K mu, and theta < mu when
  // alpha == 1.
  void validate_against_mu(double mu) const;

  // Default freeze-point offset eta_star (must exceed theta / mu^(1+alpha)).
  double default_eta_star(double mu) const {
    return 2.0 * theta / std::pow(mu, 1.0 + alpha);
  }
  // Forward window multiple M used by the regularity diagnostics.
  double window_multiple(double mu) const {
    const double eta_up = K / std::pow(mu, alpha);
    const double eta_tau = 2.0 * theta_star / std::pow(mu, 1.0 + alpha);
    return eta_tau + eta_up + 2.0 * default_eta_star(mu);
  }
};

// Capped perturbation value at index n.
double zeta(double xi, std::size_t n, const TruncationParams& tp);

enum class PerturbationKind {
  zero,
  constant,
  scaled_partial_sum,  // xi_n = sum_{k<=n} eps_k / sqrt(k), eps Rademacher
  rank_residual,       // xi_n = rank log-likelihood minus its projected walk
};

// Generator description for the perturbation sequence xi_n riding on a walk
// path. Carries the truncation parameters that define zeta_n for it.
class PerturbationModel {
 public:
  static PerturbationModel zero();
  static PerturbationModel constant(double c);
  static PerturbationModel scaled_partial_sum();
  // Requires pairing with IncrementModel::rank_pair; the residual reuses the
  // pair draws of the walk itself.
  static PerturbationModel rank_residual();

  PerturbationKind kind() const { return kind_; }
  double offset() const { return offset_; }

  const TruncationParams& trunc() const { return trunc_; }
  PerturbationModel& with_trunc(const TruncationParams& tp) {
    tp.validate();
    trunc_ = tp;
    return *this;
  }

 private:
  PerturbationKind kind_ = PerturbationKind::zero;
  double offset_ = 0.0;
  TruncationParams trunc_{};
};

}  // namespace renewal
