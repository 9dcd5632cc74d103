#pragma once

#include <cstddef>
#include <vector>

#include "renewalkit/quadrature.hpp"

namespace renewal {

// Deterministic constants for the two-sample rank test under a Lehmann
// alternative: base sample uniform on (0,1) with cdf F(x) = x, second sample
// with cdf G(x) = x^a_exp, tested exponent delta.

// Drift of the rank log-likelihood per pair:
//   mu = log(delta) + integral of log((x + x^A)/(x + delta x^A)) d(x + x^A).
// Closed form log(4 delta / (1 + delta)^2) when a_exp == 1.
double drift_mu(double delta, double a_exp, const QuadratureSpec& spec = {});

// Correction integral entering the expected-stopping-time prediction for
// a_exp != 1:
//   integral of h d(x + x^A),
//   h(x) = (1 - delta)^2 x^(1+A) / (2 (x + delta x^A)^2 (x + x^A)).
// Throws ConfigError when a_exp == 1 (the prediction uses c_eta instead).
double h_integral(double delta, double a_exp, const QuadratureSpec& spec = {});

// Exact E[log(1 + eta (2 Y / k - 1))] where Y is hypergeometric: k draws
// from a pool of n type-G and n type-F items. Evaluated in log space.
double hypergeom_e_log(std::size_t n, std::size_t k, double eta);

struct CEtaResult {
  double eta = 0.0;
  // (n, partial(n)) along a doubling grid, partial(n) =
  //   sum_{k=1..2n} E[log(1 + eta (2Y_k/k - 1))] + (eta^2/2) log(2n).
  std::vector<std::pair<std::size_t, double>> partial;
  double extrapolated = 0.0;   // 1/n-model limit from the last grid points
  double err_estimate = 0.0;   // covers |partial(n_max) - extrapolated|
};

// Centering constant C(eta) of the rank-residual mean: the limit of the
// partial sums above. Requires |eta| < 1 and n_max >= 50.
CEtaResult c_eta(double eta, std::size_t n_max = 2000);

}  // namespace renewal
