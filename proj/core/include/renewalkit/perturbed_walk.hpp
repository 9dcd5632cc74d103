#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "renewalkit/path_sampler.hpp"
#include "renewalkit/renewal_core.hpp"

namespace renewal {

// Explicitly materialized path, mostly for tests and debugging. z_n is
// steps[0] + ... + steps[n-1] + xi[n-1].
struct PerturbedPath {
  std::vector<double> steps;
  std::vector<double> xi;
};

// First n with S_n + xi_n > b scanned from a stored path; censored when the
// path ends below the level.
CrossingRecord crossing_from_path(const PerturbedPath& path, double b);

// First n >= 1 with S_n + xi_n > b, streaming. overshoot and stopped_sum
// refer to the perturbed statistic and the bare walk respectively.
CrossingRecord simulate_T_b(const IncrementModel& increment,
                            const PerturbationModel& pert, double b,
                            std::uint64_t seed,
                            std::size_t max_steps = 10000000);

// Frozen-cap rule: freeze zeta at n_star = floor(b/mu - eta_star b^alpha),
// then stop at the first n >= n_star with S_n + zeta_{n_star} > b.
// eta_star = 0 picks the default from the truncation parameters.
CrossingRecord simulate_tau_star(const IncrementModel& increment,
                                 const PerturbationModel& pert, double b,
                                 double eta_star, std::uint64_t seed,
                                 std::size_t max_steps = 10000000);

// Both rules evaluated on one shared path.
struct PairedCrossing {
  CrossingRecord direct;  // T_b
  CrossingRecord frozen;  // tau_star
  std::size_t n_star = 0;
  double zeta_frozen = 0.0;
  double diff_scaled = 0.0;  // |T_b - tau_star| / rho(b); NaN when censored
};

PairedCrossing simulate_paired_crossing(const IncrementModel& increment,
                                        const PerturbationModel& pert,
                                        double b, double eta_star,
                                        std::uint64_t seed,
                                        std::size_t max_steps = 10000000);

// Occupation count U_b = #{n <= horizon : Z_n <= b} and last-entry index
// N_b = 1 + last such n (1 when the set is empty). The scan runs to
// max_steps; censored means the path was still at or below b at the end,
// so both counts are lower bounds.
struct ExitCounts {
  std::size_t u = 0;
  std::size_t n_last = 1;
  bool censored = false;
};

ExitCounts simulate_U_and_N(const IncrementModel& increment,
                            const PerturbationModel& pert, double b,
                            std::uint64_t seed, std::size_t max_steps);

// Wald identity on the perturbed rule: mean and SE of S_T - mu T.
WaldReport wald_check_perturbed(const IncrementModel& increment,
                                const PerturbationModel& pert, double b,
                                std::size_t reps, std::uint64_t seed,
                                int threads = 0,
                                std::size_t max_steps = 10000000);

struct DiagnosticRecord {
  std::string condition;
  std::size_t n = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  bool pass = true;
};

struct DiagnosticsReport {
  std::vector<DiagnosticRecord> records;

  bool condition_pass(const std::string& condition) const;
  bool all_pass() const;
  // array of {condition, n, estimate, std_error, pass}
  std::string to_json() const;
};

// Monte Carlo estimates of the regularity quantities behind the
// intermediate-order theory, on an increasing index grid:
//   cap_exceed_prob    (n/rho(n))^p P{max over (delta0 n, n] of xi_j
//                      exceeds theta n^alpha}
//   lower_tail_sum     sum over k >= n + K n^alpha of k^(p-1)
//                      P{xi_k <= -(k-n) mu + w0 k^alpha} / rho(n)^p
//   window_moment      E[((max over the forward window of |zeta_n -
//                      xi_{n+j}|, capped at n^alpha) / rho(n))^p]
//   window_tail_c{1,2,4,8}  mean excess of that statistic beyond the cutoff
//   slow_change_eps_{0.1,0.01}  P{max over j <= n^alpha of
//                      |xi_{n+j} - zeta_n| > eps}
//   last_entry_tail_sum  tail sum with the running-supremum event
//                      sup_{j >= k} j^-alpha (xi_j + (j-n) mu) <= w0
// Tail sums are truncated at budget_factor * n. A record in the top half of
// the grid passes when its estimate does not exceed the previous one by
// more than twice the joint standard error.
DiagnosticsReport regularity_diagnostics(const IncrementModel& increment,
                                         const PerturbationModel& pert,
                                         const std::vector<std::size_t>& grid,
                                         std::size_t reps, std::uint64_t seed,
                                         double budget_factor = 4.0,
                                         int threads = 0);

}  // namespace renewal
