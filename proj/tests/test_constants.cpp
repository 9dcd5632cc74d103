#include <cmath>
#include <vector>

#include "doctest.h"
#include "renewalkit/constants.hpp"

using namespace renewal;

namespace {

// Integrands in plain x-space for the oracles below. Both are smooth on
// [0,1] once the common x-powers are cancelled, so a uniform trapezoid rule
// converges cleanly without any endpoint tricks.
double drift_integrand(double x, double delta, double a_exp) {
  // log(H/W) dH with H = x + x^A, W = x + delta x^A,
  // written as log((1 + x^(A-1)) / (1 + delta x^(A-1))) (1 + A x^(A-1))
  const double t = std::pow(x, a_exp - 1.0);
  return (std::log1p(t) - std::log1p(delta * t)) * (1.0 + a_exp * t);
}

double h_integrand(double x, double delta, double a_exp) {
  // (1-delta)^2 x^(1+A) / (2 (x + delta x^A)^2 (x + x^A)) dH; pulling
  // x^3 out of the denominator leaves x^(A-2), identically 1 at A = 2
  const double t = std::pow(x, a_exp - 1.0);
  const double lead = std::pow(x, a_exp - 2.0);
  const double num = (1.0 - delta) * (1.0 - delta) * lead;
  const double den = 2.0 * (1.0 + delta * t) * (1.0 + delta * t) * (1.0 + t);
  return num / den * (1.0 + a_exp * t);
}

double trapezoid(double (*f)(double, double, double), double delta,
                 double a_exp, std::size_t cells) {
  const double h = 1.0 / static_cast<double>(cells);
  double sum = 0.5 * (f(0.0, delta, a_exp) + f(1.0, delta, a_exp));
  for (std::size_t i = 1; i < cells; ++i)
    sum += f(static_cast<double>(i) * h, delta, a_exp);
  return sum * h;
}

}  // namespace

TEST_SUITE("constants") {

TEST_CASE("drift at unit exponent has a closed form") {
  // log(4 delta / (1 + delta)^2)
  CHECK(std::abs(drift_mu(2.0, 1.0) - std::log(8.0 / 9.0)) <= 1e-8);
  for (double delta : {0.5, 3.0}) {
    const double closed =
        std::log(4.0 * delta / ((1.0 + delta) * (1.0 + delta)));
    CHECK(std::abs(drift_mu(delta, 1.0) - closed) <= 1e-8);
  }
  CHECK(drift_mu(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("drift at exponent two matches a brute-force trapezoid") {
  // f(0) = 0 and f is smooth, so 2e6 cells give ~1e-12 accuracy
  const double oracle =
      std::log(2.0) + trapezoid(drift_integrand, 2.0, 2.0, 2'000'000);
  CHECK(std::abs(drift_mu(2.0, 2.0) - oracle) <= 1e-8);
}

TEST_CASE("drift handles steep exponents without blowing up") {
  // A in (0,1) puts the singular weight on the other endpoint
  CHECK(std::isfinite(drift_mu(2.0, 0.5)));
  CHECK(std::isfinite(drift_mu(0.5, 4.0)));
  // delta = 1 makes the likelihood ratio identically one: zero drift
  for (double a_exp : {0.5, 2.0, 3.0})
    CHECK(std::abs(drift_mu(1.0, a_exp)) <= 1e-10);
  // null data pushes the statistic down; matched alternative pushes it up
  CHECK(drift_mu(2.0, 1.0) < 0.0);
  CHECK(drift_mu(0.5, 1.0) < 0.0);
  CHECK(drift_mu(2.0, 2.0) > 0.0);
}

TEST_CASE("boundary functional value and oracle at exponent two") {
  // spot value h(1) = (1-delta)^2 / (2 (1+delta)^2 (1+1)) = 1/36 at delta 2
  CHECK(h_integrand(1.0, 2.0, 2.0) / (1.0 + 2.0) ==
        doctest::Approx(1.0 / 36.0).epsilon(1e-12));

  const double oracle = trapezoid(h_integrand, 2.0, 2.0, 2'000'000);
  CHECK(std::abs(h_integral(2.0, 2.0) - oracle) <= 1e-8);
  CHECK(h_integral(2.0, 2.0) > 0.0);
}

TEST_CASE("boundary functional degenerate cases") {
  CHECK(h_integral(1.0, 2.0) == 0.0);
  CHECK_THROWS_AS(h_integral(2.0, 1.0), ConfigError);
  CHECK(std::isfinite(h_integral(2.0, 0.75)));  // singular exponent range
  CHECK(std::isfinite(h_integral(3.0, 4.0)));
}

TEST_CASE("hypergeometric log expectation matches hand values") {
  // n = 1, k = 1: Y is 0 or 1 with probability 1/2 each
  const double eta = 1.0 / 3.0;
  const double hand = 0.5 * (std::log(1.0 - eta) + std::log(1.0 + eta));
  CHECK(hypergeom_e_log(1, 1, eta) == doctest::Approx(hand).epsilon(1e-15));
  CHECK(hypergeom_e_log(1, 1, eta) ==
        doctest::Approx(0.5 * std::log(8.0 / 9.0)).epsilon(1e-15));
  // k = 2n forces Y = n and the argument collapses to log 1
  CHECK(hypergeom_e_log(5, 10, 0.7) == 0.0);
  CHECK(hypergeom_e_log(1, 2, 0.9) == 0.0);
}

TEST_CASE("hypergeometric log expectation obeys the small-eta expansion") {
  // E log(1 + eta Q) = -(eta^2/2) E Q^2 + O(eta^4) with Q = 2Y/k - 1,
  // E Q^2 = (2n - k) / (k (2n - 1))
  const std::size_t n = 50;
  const double eta = 0.01;
  for (std::size_t k : {1ul, 10ul, 37ul, 99ul}) {
    const double q2 = static_cast<double>(2 * n - k) /
                      (static_cast<double>(k) * (2.0 * n - 1.0));
    CHECK(std::abs(hypergeom_e_log(n, k, eta) + 0.5 * eta * eta * q2) <=
          5e-8);
  }
}

TEST_CASE("hypergeometric argument validation") {
  CHECK_THROWS_AS(hypergeom_e_log(5, 0, 0.3), ConfigError);
  CHECK_THROWS_AS(hypergeom_e_log(5, 11, 0.3), ConfigError);
  CHECK_THROWS_AS(hypergeom_e_log(5, 3, 1.0), ConfigError);
  CHECK_THROWS_AS(hypergeom_e_log(5, 3, -1.0), ConfigError);
}

TEST_CASE("centering constant vanishes at eta zero and is even") {
  const auto at_zero = c_eta(0.0, 100);
  CHECK(at_zero.extrapolated == 0.0);
  for (const auto& [n, value] : at_zero.partial) CHECK(value == 0.0);

  const auto plus = c_eta(0.3, 400);
  const auto minus = c_eta(-0.3, 400);
  CHECK(std::abs(plus.extrapolated - minus.extrapolated) <= 1e-12);
}

TEST_CASE("centering constant has the known small-eta limit") {
  // C(eta) / eta^2 -> (1 - euler_gamma) / 2 = 0.21139216754923357...
  const double target = 0.21139216754923357;
  const auto res = c_eta(0.05, 2000);
  const double ratio = res.extrapolated / (0.05 * 0.05);
  CHECK(std::abs(ratio - target) / target <= 0.05);
}

TEST_CASE("partial sums contract along the doubling grid") {
  const auto res = c_eta(1.0 / 3.0, 1600);
  REQUIRE(res.partial.size() >= 3);
  // partial is ordered small n -> large n; successive gaps must shrink
  std::vector<double> gaps;
  for (std::size_t i = 1; i < res.partial.size(); ++i)
    gaps.push_back(std::abs(res.partial[i].second - res.partial[i - 1].second));
  for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] < gaps[i - 1]);
  // the reported error must cover the distance from the last partial sum
  CHECK(std::abs(res.partial.back().second - res.extrapolated) <=
        res.err_estimate);
}

TEST_CASE("centering constant rejects out-of-range arguments") {
  CHECK_THROWS_AS(c_eta(1.0, 400), ConfigError);
  CHECK_THROWS_AS(c_eta(-1.2, 400), ConfigError);
  CHECK_THROWS_AS(c_eta(0.3, 20), ConfigError);
}

}  // TEST_SUITE
