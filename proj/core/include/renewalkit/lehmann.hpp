#pragma once

#include "renewalkit/quadrature.hpp"
#include "renewalkit/rng.hpp"

namespace renewal {

// Two-sample Lehmann setup on (0,1): first sample ~ F(x) = x, second sample
// ~ G(x) = x^a_exp; the rank test evaluates the exponent `delta`.
// Combined-population cdfs:
//   H(x) = F + G = x + x^a_exp          (total mass 2)
//   W(x) = F + delta G = x + delta x^a_exp
struct LehmannSpec {
  double delta = 2.0;   // exponent the test is tuned to
  double a_exp = 1.0;   // exponent the data are generated from

  void validate() const {
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (!(a_exp > 0.0)) throw ConfigError("exponent must be positive");
  }
};

double lehmann_h(double x, double a_exp);
double lehmann_w(double x, double delta, double a_exp);

// log(H(x) / W(x)), stable down to denormal x.
double lehmann_log_psi(double x, double delta, double a_exp);

// g_W(u) = integral over (u, 1) of dH / W. Closed forms for a_exp 1 and 2;
// adaptive quadrature in v = -log t otherwise.
double lehmann_gw(double u, double delta, double a_exp,
                  const QuadratureSpec& spec = {});

// One pair (x from F, y from G); y is drawn by inversion of G.
void lehmann_sample_pair(Rng& rng, double a_exp, double& x, double& y);

// Per-pair increment of the projected walk part of the rank log-likelihood:
//   d = log(delta) + log psi(x) + log psi(y)
//     + (log 2 - log H(x)) + (log 2 - log H(y))
//     - g_W(x) - delta g_W(y).
// Its mean equals drift_mu(delta, a_exp).
double lehmann_pair_increment(double x, double y, const LehmannSpec& spec,
                              const QuadratureSpec& quad = {});

}  // namespace renewal
