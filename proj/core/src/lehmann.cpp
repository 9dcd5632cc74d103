#include "renewalkit/lehmann.hpp"

#include <cmath>

namespace renewal {
namespace {

double logsumexp2(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

double lehmann_h(double x, double a_exp) { return x + std::pow(x, a_exp); }

double lehmann_w(double x, double delta, double a_exp) {
  return x + delta * std::pow(x, a_exp);
}

double lehmann_log_psi(double x, double delta, double a_exp) {
  if (!(x > 0.0) || !(x <= 1.0)) throw ConfigError("psi argument outside (0,1]");
  const double v = -std::log(x);
  return logsumexp2(-v, -a_exp * v) -
         logsumexp2(-v, -a_exp * v + std::log(delta));
}

double lehmann_gw(double u, double delta, double a_exp,
                  const QuadratureSpec& spec) {
  if (!(u > 0.0) || u > 1.0)
    throw ConfigError("g_W argument outside (0,1]");
  if (u == 1.0) return 0.0;
  if (a_exp == 1.0) {
    // dH/W = 2 dt / ((1 + delta) t)
    return 2.0 / (1.0 + delta) * (-std::log(u));
  }
  if (a_exp == 2.0) {
    // (1 + 2t)/(t (1 + delta t)) = 1/t + (2 - delta)/(1 + delta t)
    const double c = (2.0 - delta) / delta;
    return -std::log(u) +
           c * (std::log1p(delta) - std::log1p(delta * u));
  }
  // v = -log t turns dH/W into a bounded smooth ratio on [0, -log u]:
  //   (e^-v + A e^-Av) / (e^-v + delta e^-Av)
  const double log_delta = std::log(delta);
  auto integrand = [&](double v) {
    const double log_num = logsumexp2(-v, -a_exp * v + std::log(a_exp));
    const double log_den = logsumexp2(-v, -a_exp * v + log_delta);
    return std::exp(log_num - log_den);
  };
  return integrate(integrand, 0.0, -std::log(u), spec).value;
}

void lehmann_sample_pair(Rng& rng, double a_exp, double& x, double& y) {
  do {
    x = rng.uniform01();
  } while (x == 0.0);
  double u;
  do {
    u = rng.uniform01();
  } while (u == 0.0);
  y = std::pow(u, 1.0 / a_exp);
}

double lehmann_pair_increment(double x, double y, const LehmannSpec& spec,
                              const QuadratureSpec& quad) {
  spec.validate();
  const double log2 = std::log(2.0);
  const double log_psi_x = lehmann_log_psi(x, spec.delta, spec.a_exp);
  const double log_psi_y = lehmann_log_psi(y, spec.delta, spec.a_exp);
  const double log_h_x = std::log(lehmann_h(x, spec.a_exp));
  const double log_h_y = std::log(lehmann_h(y, spec.a_exp));
  return std::log(spec.delta) + log_psi_x + log_psi_y + (log2 - log_h_x) +
         (log2 - log_h_y) - lehmann_gw(x, spec.delta, spec.a_exp, quad) -
         spec.delta * lehmann_gw(y, spec.delta, spec.a_exp, quad);
}

}  // namespace renewal
