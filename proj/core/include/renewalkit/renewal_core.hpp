#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "renewalkit/increment_model.hpp"

namespace renewal {

// Outcome of one first-passage simulation. stopped_sum is the walk value
// S at the stopping index; overshoot is measured on whichever statistic
// defined the rule (S for linear rules, S + perturbation for perturbed
// ones, the log-likelihood for the rank test).
struct CrossingRecord {
  std::size_t stop_index = 0;
  double overshoot = 0.0;
  double stopped_sum = 0.0;
  bool hit_lower = false;
  bool censored = false;
};

// First n >= 1 with S_n > b. b may be negative or zero (ladder-epoch use).
CrossingRecord simulate_linear_crossing(const IncrementModel& model, double b,
                                        std::uint64_t seed,
                                        std::size_t max_steps = 10000000);

// Ladder-epoch constants of the walk: moments of S at tau_0 = first n with
// S_n > 0, and the overshoot correction E[S^2]/(2 E[S]) entering the
// second-order stopping-time predictions.
struct RenewalConstants {
  double mu = 0.0;
  double sigma2 = 0.0;
  double e_s_tau0 = 0.0;
  double e_s_tau0_sq = 0.0;
  double overshoot_correction = 0.0;

  double se_mu = 0.0;  // zero when mu is declared rather than estimated
  double se_sigma2 = 0.0;
  double se_e_s_tau0 = 0.0;
  double se_e_s_tau0_sq = 0.0;
  double se_overshoot_correction = 0.0;  // delta method

  std::size_t reps = 0;
  std::size_t censored = 0;  // excluded from the moment estimates
};

RenewalConstants estimate_renewal_constants(const IncrementModel& model,
                                            std::size_t reps,
                                            std::uint64_t seed,
                                            int threads = 0,
                                            std::size_t max_steps = 10000000);

// Identity check E[S_tau] = mu E[tau] at level b, reported as the mean and
// standard error of the per-path discrepancy S_tau - mu tau.
struct WaldReport {
  double discrepancy = 0.0;
  double se = 0.0;
  std::size_t reps = 0;
  std::size_t censored = 0;

  bool pass() const { return std::abs(discrepancy) <= 4.0 * se; }
};

WaldReport wald_check(const IncrementModel& model, double b, std::size_t reps,
                      std::uint64_t seed, int threads = 0,
                      std::size_t max_steps = 10000000);

}  // namespace renewal
