#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "renewalkit/constants.hpp"
#include "renewalkit/lehmann.hpp"
#include "renewalkit/renewal_core.hpp"

namespace renewal {

// Rank log-likelihood of the two-sample test in Savage form. g_flags marks,
// in increasing order of the pooled observations, which came from the second
// (G) sample. Requires equally many flags of each kind.
double rank_loglik(const std::vector<bool>& g_flags, double delta);

// Pooled two-sample state updated one pair at a time. step() inserts one
// observation from each sample, rejects exact ties, and refreshes the
// log-likelihood from prefix counts in one pass (O(n) per step).
class RankState {
 public:
  explicit RankState(double delta);

  std::size_t pairs() const { return pairs_; }
  double delta() const { return delta_; }
  double loglik() const { return loglik_; }

  void step(double x_value, double y_value);

  // (value, is_from_G) sorted by value
  const std::vector<std::pair<double, bool>>& pooled() const { return obs_; }

 private:
  void insert_one(double value, bool from_g);

  double delta_;
  double log_delta_;
  double loglik_ = 0.0;
  std::size_t pairs_ = 0;
  std::vector<std::pair<double, bool>> obs_;
};

struct RankSprtConfig {
  double delta = 2.0;   // tested exponent
  double a_exp = 2.0;   // data-generating exponent
  double lower = 10.0;  // stop when loglik < -lower
  double upper = 10.0;  // stop when loglik > upper

  void validate() const {
    LehmannSpec{delta, a_exp}.validate();
    if (delta == 1.0)
      throw ConfigError("delta = 1 never stops; pick delta != 1");
    if (!(lower > 0.0) || !(upper > 0.0))
      throw ConfigError("boundaries must be positive");
  }

  // Sample-swap view of the same test: exchanges the two samples and
  // inverts both exponents, swapping the boundaries.
  RankSprtConfig swapped() const {
    return {1.0 / delta, 1.0 / a_exp, upper, lower};
  }
};

// Runs the two-boundary rank test on freshly sampled Lehmann pairs.
// stopped_sum holds the final log-likelihood; overshoot is measured past
// whichever boundary was hit. Ties are resampled.
CrossingRecord run_sprt(const RankSprtConfig& config, std::uint64_t seed,
                        std::size_t max_pairs);

// Residual of the rank log-likelihood around its projected walk under the
// exchangeable null, computed directly from the pooled order statistics:
//   xi = -sum_k log(1 + eta (2 y_k / k - 1))
//        + sum_k eta (2 y_k - k) log(u_{k+1} / u_k),   u_{2n+1} = 1,
// with eta = (delta - 1)/(delta + 1) and y_k the G-count among the k
// smallest.
double xi_null_form(const std::vector<double>& u_sorted,
                    const std::vector<bool>& g_flags, double delta);

// One simulated decomposition of the rank log-likelihood z into projected
// walk s plus residual xi = z - s, with s evaluated by quadrature.
struct DecompositionSample {
  std::size_t n = 0;
  double z = 0.0;
  double s = 0.0;
  double xi = 0.0;
};

DecompositionSample decompose(std::size_t n, double delta, double a_exp,
                              std::uint64_t seed,
                              const QuadratureSpec& quad = {});

struct XiScalingRow {
  std::size_t n = 0;
  double var_ratio = 0.0;      // Var(xi_n) / log n
  double mean_residual = 0.0;  // mean(xi_n) - ((eta^2/2) log(2n) - C(eta))
  double se = 0.0;             // standard error of mean_residual
};

struct XiScalingReport {
  double delta = 0.0;
  double eta = 0.0;
  double c_eta_value = 0.0;
  double var_ratio_limit = 0.0;  // extrapolated over 1/log n
  std::vector<XiScalingRow> rows;
};

// Null-model scaling check of the residual moments over n_grid.
XiScalingReport xi_scaling_check(double delta,
                                 const std::vector<std::size_t>& n_grid,
                                 std::size_t reps, std::uint64_t seed,
                                 int threads = 0);

// Expected-stopping-time prediction for the upper boundary, alternative
// side (drift must be positive; for negative drift apply swapped() first).
// a_exp != 1 consumes h_int; a_exp == 1 consumes ce.
double predict_ET_rank(const RankSprtConfig& config,
                       const RenewalConstants& constants,
                       const std::optional<CEtaResult>& ce,
                       std::optional<double> h_int);

}  // namespace renewal
