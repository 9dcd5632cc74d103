#pragma once

// Expected-stopping-time expansions for perturbed boundary crossings.
//
// The second-order prediction for the first passage of S_n + xi_n over b is
//   mu * E[T_b] ~= b - E[zeta_{n_b}] + overshoot_correction,
// where n_b = floor(b / mu) and zeta is the truncated perturbation.  The
// intermediate form drops the constant terms and brackets mu * E[T_b] by
// b - E[zeta_{n_b}] +- band_mult * rho(b);  the variance analogue brackets
// Var(T_b) by sigma^2 b / mu^3 +- band_mult * (sqrt(b) rho(b) + rho(b)^2).
//
// compare_* functions pair each prediction with a fresh Monte Carlo estimate
// and report residuals in the same units as the prediction (mu * ET for the
// mean forms, plain variance for the variance form).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "renewalkit/increment_model.hpp"
#include "renewalkit/perturbation.hpp"
#include "renewalkit/renewal_core.hpp"

namespace renewal {

struct Interval {
  double center = 0.0;
  double half_width = 0.0;
  double lo() const { return center - half_width; }
  double hi() const { return center + half_width; }
  bool contains(double x) const { return x >= lo() && x <= hi(); }
};

// Monte Carlo estimate of E[zeta_n] (and the raw E[xi_n]) at a fixed index.
struct ZetaEstimate {
  std::size_t n = 0;
  double e_zeta = 0.0;
  double se_zeta = 0.0;
  double e_xi = 0.0;
  double se_xi = 0.0;
};

ZetaEstimate estimate_E_zeta_at_n(const IncrementModel& increment,
                                  const PerturbationModel& pert,
                                  std::size_t n, std::size_t reps,
                                  std::uint64_t seed, int threads = 0);

// Same, at n_b = floor(b / mu).  Requires a positive drift and n_b >= 1.
ZetaEstimate estimate_E_zeta_nb(const IncrementModel& increment,
                                const PerturbationModel& pert, double b,
                                std::size_t reps, std::uint64_t seed,
                                int threads = 0);

// (b - e_zeta_nb + overshoot_correction) / mu.
double predict_ET_second_order(double mu, double e_zeta_nb,
                               double overshoot_correction, double b);

// Center (b - e_zeta_nb) / mu, half width band_mult * rho(b) / mu.
Interval predict_ET_intermediate(double mu, double e_zeta_nb, double b,
                                 const RhoFunction& rho,
                                 double band_mult = 10.0);

// Center sigma2 * b / mu^3, half width band_mult * (sqrt(b) rho + rho^2).
Interval predict_var(double mu, double sigma2, double b,
                     const RhoFunction& rho, double band_mult = 10.0);

struct ExpansionRow {
  double b = 0.0;
  double predicted = 0.0;
  double mc = 0.0;
  double se = 0.0;  // joint standard error for mc - predicted
  double residual = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  std::size_t reps = 0;
  std::size_t censored = 0;
};

struct ExpansionReport {
  std::vector<ExpansionRow> rows;
};

// Second-order comparison: predicted = b - E^[zeta_{n_b}] + correction,
// mc = mu * mean(T_b), band = predicted +- band_k * joint SE.
ExpansionReport compare_expansion(const IncrementModel& increment,
                                  const PerturbationModel& pert,
                                  const RenewalConstants& constants,
                                  const std::vector<double>& b_grid,
                                  std::size_t reps, std::uint64_t seed,
                                  int threads = 0, double band_k = 4.0,
                                  std::size_t max_steps = 10'000'000);

// Intermediate-order comparison: predicted = b - E^[zeta_{n_b}],
// band = predicted +- band_mult * rho(b).
ExpansionReport compare_intermediate(const IncrementModel& increment,
                                     const PerturbationModel& pert,
                                     const std::vector<double>& b_grid,
                                     std::size_t reps, std::uint64_t seed,
                                     int threads = 0, double band_mult = 10.0,
                                     std::size_t max_steps = 10'000'000);

// Variance comparison: predicted = sigma2 b / mu^3, mc = sample Var(T_b),
// band = predicted +- band_mult * (sqrt(b) rho(b) + rho(b)^2).
ExpansionReport compare_variance(const IncrementModel& increment,
                                 const PerturbationModel& pert, double sigma2,
                                 const std::vector<double>& b_grid,
                                 std::size_t reps, std::uint64_t seed,
                                 int threads = 0, double band_mult = 10.0,
                                 std::size_t max_steps = 10'000'000);

}  // namespace renewal
