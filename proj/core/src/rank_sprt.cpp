#include "renewalkit/rank_sprt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renewalkit/stats.hpp"

namespace renewal {
namespace {

double eta_of(double delta) { return (delta - 1.0) / (delta + 1.0); }

}  // namespace

double rank_loglik(const std::vector<bool>& g_flags, double delta) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  const std::size_t m = g_flags.size();
  if (m % 2 != 0) throw ConfigError("pooled sample size must be even");
  const std::size_t n = m / 2;
  std::size_t y = 0;
  double sum = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    if (g_flags[k - 1]) ++y;
    const double kk = static_cast<double>(k);
    sum += std::log(kk) -
           std::log(kk + (delta - 1.0) * static_cast<double>(y));
  }
  if (y != n) throw ConfigError("samples must have equal size");
  return static_cast<double>(n) * std::log(delta) + sum;
}

RankState::RankState(double delta) : delta_(delta) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  log_delta_ = std::log(delta);
}

void RankState::insert_one(double value, bool from_g) {
  auto it = std::lower_bound(
      obs_.begin(), obs_.end(), value,
      [](const std::pair<double, bool>& o, double v) { return o.first < v; });
  if (it != obs_.end() && it->first == value)
    throw TieError("tied observation in rank state");
  obs_.insert(it, {value, from_g});
}

void RankState::step(double x_value, double y_value) {
  if (x_value == y_value) throw TieError("tied observation in rank state");
  insert_one(x_value, false);
  try {
    insert_one(y_value, true);
  } catch (const TieError&) {
    // keep the state consistent before rethrowing
    auto it = std::lower_bound(obs_.begin(), obs_.end(), x_value,
                               [](const std::pair<double, bool>& o, double v) {
                                 return o.first < v;
                               });
    obs_.erase(it);
    throw;
  }
  ++pairs_;

  // Full refresh from prefix counts; O(n) per step by design.
  std::size_t y = 0;
  double sum = 0.0;
  for (std::size_t k = 1; k <= obs_.size(); ++k) {
    if (obs_[k - 1].second) ++y;
    const double kk = static_cast<double>(k);
    sum += std::log(kk) -
           std::log(kk + (delta_ - 1.0) * static_cast<double>(y));
  }
  loglik_ = static_cast<double>(pairs_) * log_delta_ + sum;
}

CrossingRecord run_sprt(const RankSprtConfig& config, std::uint64_t seed,
                        std::size_t max_pairs) {
  config.validate();
  if (max_pairs < 1) throw ConfigError("max_pairs must be at least 1");
  Rng rng(seed);
  RankState state(config.delta);
  for (std::size_t n = 1; n <= max_pairs; ++n) {
    for (;;) {
      double x, y;
      lehmann_sample_pair(rng, config.a_exp, x, y);
      try {
        state.step(x, y);
        break;
      } catch (const TieError&) {
        // measure-zero event; redraw the pair
      }
    }
    const double z = state.loglik();
    if (z > config.upper) return {n, z - config.upper, z, false, false};
    if (z < -config.lower) return {n, -config.lower - z, z, true, false};
  }
  return {max_pairs, std::numeric_limits<double>::quiet_NaN(), state.loglik(),
          false, true};
}

double xi_null_form(const std::vector<double>& u_sorted,
                    const std::vector<bool>& g_flags, double delta) {
  if (u_sorted.size() != g_flags.size())
    throw ConfigError("values and flags must align");
  const std::size_t m = u_sorted.size();
  if (m % 2 != 0) throw ConfigError("pooled sample size must be even");
  const double eta = eta_of(delta);
  double first = 0.0;
  double second = 0.0;
  std::size_t y = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    if (!(u_sorted[k - 1] > 0.0) || !(u_sorted[k - 1] < 1.0))
      throw ConfigError("pooled values must lie in (0,1)");
    if (k > 1 && !(u_sorted[k - 1] > u_sorted[k - 2]))
      throw TieError("pooled values must be strictly increasing");
    if (g_flags[k - 1]) ++y;
    const double kk = static_cast<double>(k);
    const double yy = static_cast<double>(y);
    first -= std::log1p(eta * (2.0 * yy / kk - 1.0));
    const double u_next = (k == m) ? 1.0 : u_sorted[k];
    second += eta * (2.0 * yy - kk) *
              (std::log(u_next) - std::log(u_sorted[k - 1]));
  }
  return first + second;
}

DecompositionSample decompose(std::size_t n, double delta, double a_exp,
                              std::uint64_t seed, const QuadratureSpec& quad) {
  if (n < 1) throw ConfigError("need at least one pair");
  const LehmannSpec spec{delta, a_exp};
  spec.validate();
  Rng rng(seed);

  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(2 * n);
  double s = 0.0;
  const double log2 = std::log(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    double x, y;
    lehmann_sample_pair(rng, a_exp, x, y);
    pooled.emplace_back(x, false);
    pooled.emplace_back(y, true);
    // projected-walk contribution of this pair; identical expression to
    // lehmann_pair_increment, spelled out once so the decomposition stands
    // on its own
    s += std::log(delta) + lehmann_log_psi(x, delta, a_exp) +
         lehmann_log_psi(y, delta, a_exp) +
         (log2 - std::log(lehmann_h(x, a_exp))) +
         (log2 - std::log(lehmann_h(y, a_exp))) -
         lehmann_gw(x, delta, a_exp, quad) -
         delta * lehmann_gw(y, delta, a_exp, quad);
  }
  std::sort(pooled.begin(), pooled.end());
  std::vector<bool> flags(2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k) flags[k] = pooled[k].second;
  const double z = rank_loglik(flags, delta);

  DecompositionSample out;
  out.n = n;
  out.z = z;
  out.s = s;
  out.xi = z - s;
  return out;
}

XiScalingReport xi_scaling_check(double delta,
                                 const std::vector<std::size_t>& n_grid,
                                 std::size_t reps, std::uint64_t seed,
                                 int threads) {
  if (!(delta > 0.0) || delta == 1.0)
    throw ConfigError("delta must be positive and different from 1");
  if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
  if (reps < 2) throw ConfigError("need at least 2 replications");

  XiScalingReport report;
  report.delta = delta;
  report.eta = eta_of(delta);
  const CEtaResult ce = c_eta(std::abs(report.eta), 1600);
  report.c_eta_value = ce.extrapolated;

  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::size_t n = n_grid[gi];
    if (n < 2) throw ConfigError("grid indices must be at least 2");
    std::vector<double> xs(reps);
    const std::uint64_t level_seed = child_seed(seed, gi);
    parallel_reps(reps, threads, [&](std::size_t r) {
      Rng rng(child_seed(level_seed, r));
      for (;;) {
        // exchangeable null: all 2n pooled values uniform, first n from F
        std::vector<std::pair<double, bool>> pooled(2 * n);
        for (std::size_t i = 0; i < 2 * n; ++i) {
          double u;
          do {
            u = rng.uniform01();
          } while (u == 0.0);
          pooled[i] = {u, i >= n};
        }
        std::sort(pooled.begin(), pooled.end());
        std::vector<double> us(2 * n);
        std::vector<bool> flags(2 * n);
        for (std::size_t k = 0; k < 2 * n; ++k) {
          us[k] = pooled[k].first;
          flags[k] = pooled[k].second;
        }
        try {
          xs[r] = xi_null_form(us, flags, delta);
          break;
        } catch (const TieError&) {
          // duplicate uniforms; redraw the whole pooled sample
        }
      }
    });
    const SampleStats st = summarize(xs);
    const double log_n = std::log(static_cast<double>(n));
    const double theory_mean =
        0.5 * report.eta * report.eta * std::log(2.0 * static_cast<double>(n)) -
        ce.extrapolated;
    report.rows.push_back(
        {n, st.var / log_n, st.mean - theory_mean, st.se});
  }

  // headline: least-squares intercept of var_ratio against 1/log n
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(report.rows.size());
  for (const auto& row : report.rows) {
    const double x = 1.0 / std::log(static_cast<double>(row.n));
    sx += x;
    sy += row.var_ratio;
    sxx += x * x;
    sxy += x * row.var_ratio;
  }
  const double denom = m * sxx - sx * sx;
  report.var_ratio_limit =
      std::abs(denom) > 1e-12 ? (sy * sxx - sx * sxy) / denom
                              : sy / m;
  return report;
}

double predict_ET_rank(const RankSprtConfig& config,
                       const RenewalConstants& constants,
                       const std::optional<CEtaResult>& ce,
                       std::optional<double> h_int) {
  config.validate();
  const double mu = constants.mu;
  if (!(mu > 0.0))
    throw DriftError(
        "prediction needs positive drift; use swapped() for the mirrored "
        "test");
  const double b = config.upper;
  if (config.a_exp == 1.0) {
    if (!ce) throw ConfigError("exponent 1 prediction needs a c_eta result");
    const double eta = eta_of(config.delta);
    if (std::abs(std::abs(ce->eta) - std::abs(eta)) > 1e-9)
      throw ConfigError("c_eta result computed for a different eta");
    const double mu_et = b - 0.5 * eta * eta * std::log(2.0 * b / mu) +
                         ce->extrapolated + constants.overshoot_correction;
    return mu_et / mu;
  }
  if (!h_int)
    throw ConfigError("exponent != 1 prediction needs the h integral");
  return (b - *h_int + constants.overshoot_correction) / mu;
}

}  // namespace renewal
