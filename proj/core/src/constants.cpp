#include "renewalkit/constants.hpp"

#include <algorithm>
#include <cmath>

#include "renewalkit/errors.hpp"

namespace renewal {
namespace {

double logsumexp2(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// All integrands are evaluated in v = -log x, entirely in log space, so the
// x -> 0 endpoint never produces 0/0 or overflow for any exponent.

// log(x + x^A) at x = e^-v
double log_h_cdf(double v, double a_exp) {
  return logsumexp2(-v, -a_exp * v);
}

// log(x + delta x^A) at x = e^-v
double log_w_cdf(double v, double a_exp, double log_delta) {
  return logsumexp2(-v, -a_exp * v + log_delta);
}

void check_exponents(double delta, double a_exp) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(a_exp > 0.0)) throw ConfigError("exponent must be positive");
}

// log-factorial table: lfac[i] = log(i!)
std::vector<double> log_factorials(std::size_t up_to) {
  std::vector<double> lfac(up_to + 1);
  lfac[0] = 0.0;
  for (std::size_t i = 1; i <= up_to; ++i)
    lfac[i] = std::lgamma(static_cast<double>(i) + 1.0);
  return lfac;
}

// sum_{k=1..2n} E[log(1 + eta (2Y_k/k - 1))] + (eta^2/2) log(2n), with Y_k
// hypergeometric out of n/n. Shares one log-factorial table across all k.
double c_eta_partial(std::size_t n, double eta,
                     const std::vector<double>& lfac) {
  const auto nn = static_cast<std::ptrdiff_t>(n);
  double total = 0.0;
  for (std::ptrdiff_t k = 1; k <= 2 * nn; ++k) {
    const double log_choose_pool =
        lfac[2 * n] - lfac[k] - lfac[2 * nn - k];
    const std::ptrdiff_t y_lo = std::max<std::ptrdiff_t>(0, k - nn);
    const std::ptrdiff_t y_hi = std::min<std::ptrdiff_t>(nn, k);
    double e_k = 0.0;
    for (std::ptrdiff_t y = y_lo; y <= y_hi; ++y) {
      const double log_pmf = lfac[n] - lfac[y] - lfac[nn - y] + lfac[n] -
                             lfac[k - y] - lfac[nn - k + y] - log_choose_pool;
      const double w = 2.0 * static_cast<double>(y) / static_cast<double>(k) -
                       1.0;
      e_k += std::exp(log_pmf) * std::log1p(eta * w);
    }
    total += e_k;
  }
  return total + 0.5 * eta * eta * std::log(2.0 * static_cast<double>(n));
}

}  // namespace

double drift_mu(double delta, double a_exp, const QuadratureSpec& spec) {
  check_exponents(delta, a_exp);
  const double log_delta = std::log(delta);
  auto integrand = [&](double v) {
    const double w = std::exp(-v) + a_exp * std::exp(-a_exp * v);
    if (w == 0.0) return 0.0;
    return (log_h_cdf(v, a_exp) - log_w_cdf(v, a_exp, log_delta)) * w;
  };
  const double rate = std::min(1.0, a_exp);
  const double v_max = (std::log(1.0 / spec.abs_tol) + 30.0) / rate;
  return log_delta + integrate(integrand, 0.0, v_max, spec).value;
}

double h_integral(double delta, double a_exp, const QuadratureSpec& spec) {
  check_exponents(delta, a_exp);
  if (a_exp == 1.0)
    throw ConfigError(
        "h_integral undefined at exponent 1; that prediction branch uses "
        "c_eta");
  if (delta == 1.0) return 0.0;
  const double log_delta = std::log(delta);
  const double log_coeff = 2.0 * std::log(std::abs(1.0 - delta)) -
                           std::log(2.0);
  const double log_a = std::log(a_exp);
  auto integrand = [&](double v) {
    // h(x) * d(x + x^A)/dv, all assembled in log space
    const double log_weight = logsumexp2(-v, -a_exp * v + log_a);
    const double log_val = log_coeff - (1.0 + a_exp) * v -
                           2.0 * log_w_cdf(v, a_exp, log_delta) -
                           log_h_cdf(v, a_exp) + log_weight;
    return std::exp(log_val);
  };
  const double rate = std::min(1.0, std::abs(a_exp - 1.0));
  const double v_max = (std::log(1.0 / spec.abs_tol) + 30.0) / rate;
  return integrate(integrand, 0.0, v_max, spec).value;
}

double hypergeom_e_log(std::size_t n, std::size_t k, double eta) {
  if (n < 1 || k < 1 || k > 2 * n)
    throw ConfigError("hypergeometric draw count out of range");
  if (!(std::abs(eta) < 1.0))
    throw ConfigError("|eta| must be below 1");
  const auto lfac = log_factorials(2 * n);
  const auto nn = static_cast<std::ptrdiff_t>(n);
  const auto kk = static_cast<std::ptrdiff_t>(k);
  const double log_choose_pool = lfac[2 * n] - lfac[k] - lfac[2 * nn - kk];
  const std::ptrdiff_t y_lo = std::max<std::ptrdiff_t>(0, kk - nn);
  const std::ptrdiff_t y_hi = std::min<std::ptrdiff_t>(nn, kk);
  double out = 0.0;
  for (std::ptrdiff_t y = y_lo; y <= y_hi; ++y) {
    const double log_pmf = lfac[n] - lfac[y] - lfac[nn - y] + lfac[n] -
                           lfac[kk - y] - lfac[nn - kk + y] - log_choose_pool;
    const double w =
        2.0 * static_cast<double>(y) / static_cast<double>(k) - 1.0;
    out += std::exp(log_pmf) * std::log1p(eta * w);
  }
  return out;
}

CEtaResult c_eta(double eta, std::size_t n_max) {
  if (!(std::abs(eta) < 1.0)) throw ConfigError("|eta| must be below 1");
  if (n_max < 50) throw ConfigError("c_eta needs n_max >= 50");

  std::vector<std::size_t> grid;
  for (std::size_t n = n_max; n >= 50; n /= 2) grid.push_back(n);
  if (grid.size() < 2) grid.push_back(std::max<std::size_t>(25, n_max / 2));
  std::reverse(grid.begin(), grid.end());

  CEtaResult out;
  out.eta = eta;
  const auto lfac = log_factorials(2 * n_max);
  for (std::size_t n : grid)
    out.partial.emplace_back(n, c_eta_partial(n, eta, lfac));

  const auto m = out.partial.size();
  auto limit_from = [&](std::size_t i, std::size_t j) {
    const double n1 = static_cast<double>(out.partial[i].first);
    const double n2 = static_cast<double>(out.partial[j].first);
    const double p1 = out.partial[i].second;
    const double p2 = out.partial[j].second;
    const double c1 = (p1 - p2) / (1.0 / n1 - 1.0 / n2);
    return p2 - c1 / n2;
  };
  out.extrapolated = limit_from(m - 2, m - 1);

  const double tail_gap =
      std::abs(out.partial[m - 1].second - out.extrapolated);
  double model_gap = 0.0;
  if (m >= 3)
    model_gap = std::abs(out.extrapolated - limit_from(m - 3, m - 2));
  out.err_estimate = std::max(tail_gap, 2.0 * model_gap);

  // A tail that stops contracting signals the 1/n model is not yet valid;
  // widen the reported uncertainty rather than trust the fit.
  for (std::size_t i = 0; i + 2 < m; ++i) {
    const double d0 =
        std::abs(out.partial[i + 1].second - out.partial[i].second);
    const double d1 =
        std::abs(out.partial[i + 2].second - out.partial[i + 1].second);
    if (d1 > d0 + 1e-14) {
      out.err_estimate = std::max(out.err_estimate * 10.0, d1);
      break;
    }
  }
  return out;
}

}  // namespace renewal
