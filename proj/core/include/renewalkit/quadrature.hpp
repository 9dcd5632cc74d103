#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "renewalkit/errors.hpp"

namespace renewal {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 60;  // recursion depth cap per panel

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol >= 0.0))
      throw ConfigError("quadrature tolerances must be positive");
    if (max_subdivisions < 4 || max_subdivisions > 200)
      throw ConfigError("quadrature max_subdivisions out of range");
  }
};

struct QuadResult {
  double value = 0.0;
  double err = 0.0;  // accumulated |S_fine - S_coarse| / 15 over panels
};

namespace detail {

// One adaptive Simpson panel: [a,b] with midpoint m and cached f values.
// Accepts when the Richardson estimate |S2 - S1|/15 meets the local budget,
// else splits. Throws NumericsError if the depth cap is hit while the local
// error is still far above budget.
template <class F>
void adapt_simpson(const F& f, double a, double m, double b, double fa,
                   double fm, double fb, double s_whole, double tol, int depth,
                   QuadResult& out) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h = b - a;
  const double s_left = (h / 12.0) * (fa + 4.0 * flm + fm);
  const double s_right = (h / 12.0) * (fm + 4.0 * frm + fb);
  const double s2 = s_left + s_right;
  const double err = (s2 - s_whole) / 15.0;
  if (std::abs(err) <= tol || depth <= 0) {
    if (depth <= 0 && std::abs(err) > 1e3 * tol)
      throw NumericsError("adaptive quadrature did not converge");
    out.value += s2 + err;
    out.err += std::abs(err);
    return;
  }
  adapt_simpson(f, a, lm, m, fa, flm, fm, s_left, 0.5 * tol, depth - 1, out);
  adapt_simpson(f, m, rm, b, fm, frm, fb, s_right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

// Adaptive Simpson on [a, b]. The integrand must be finite on the closed
// interval (substitute first if the endpoint is singular).
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(b > a)) return {0.0, 0.0};
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
    throw NumericsError("quadrature integrand not finite");
  const double s = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
  // Coarse scale estimate feeds the relative part of the budget.
  const double tol =
      std::max(spec.abs_tol, spec.rel_tol * std::max(1e-300, std::abs(s)));
  QuadResult out;
  detail::adapt_simpson(f, a, m, b, fa, fm, fb, s, tol, spec.max_subdivisions,
                        out);
  return out;
}

// Integral of f against the measure d(x + x^A) on (0, 1).
//
// Evaluated in the variable v = -log x, which compresses the x -> 0 endpoint
// where the weight A x^(A-1) (A < 1) or the integrand itself can blow up:
// the transformed integrand is f(e^-v) (e^-v + A e^-Av), which decays like
// exp(-decay_rate * v). decay_rate is the caller's lower bound on that rate;
// the domain is truncated where the tail is below tolerance.
template <class F>
QuadResult integrate_dh(F&& f, double a_exp, double decay_rate,
                        const QuadratureSpec& spec) {
  if (!(a_exp > 0.0)) throw ConfigError("exponent must be positive");
  if (!(decay_rate > 0.0)) throw ConfigError("decay_rate must be positive");
  const double v_max =
      (std::log(1.0 / spec.abs_tol) + 30.0) / std::min(decay_rate, 1.0);
  auto g = [&](double v) {
    const double x = std::exp(-v);
    const double w = x + a_exp * std::exp(-a_exp * v);
    // Underflowed x: the weight bounds the contribution below tolerance.
    if (w == 0.0 || x == 0.0) return 0.0;
    return f(x) * w;
  };
  return integrate(g, 0.0, v_max, spec);
}

}  // namespace renewal
