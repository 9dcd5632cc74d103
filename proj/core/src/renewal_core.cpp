#include "renewalkit/renewal_core.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "renewalkit/stats.hpp"

namespace renewal {

CrossingRecord simulate_linear_crossing(const IncrementModel& model, double b,
                                        std::uint64_t seed,
                                        std::size_t max_steps) {
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
  Rng rng(seed);
  double s = 0.0;
  for (std::size_t n = 1; n <= max_steps; ++n) {
    s += model.sample(rng);
    if (s > b) return {n, s - b, s, false, false};
  }
  return {max_steps, std::numeric_limits<double>::quiet_NaN(), s, false, true};
}

RenewalConstants estimate_renewal_constants(const IncrementModel& model,
                                            std::size_t reps,
                                            std::uint64_t seed, int threads,
                                            std::size_t max_steps) {
  if (reps < 2) throw ConfigError("need at least 2 replications");
  if (!(model.mu() > 0.0))
    throw DriftError("ladder-epoch constants need positive drift");

  std::vector<double> s1(reps), s2(reps);
  std::vector<unsigned char> bad(reps, 0);
  parallel_reps(reps, threads, [&](std::size_t r) {
    const auto rec =
        simulate_linear_crossing(model, 0.0, child_seed(seed, r), max_steps);
    if (rec.censored) {
      bad[r] = 1;
      return;
    }
    s1[r] = rec.stopped_sum;
    s2[r] = rec.stopped_sum * rec.stopped_sum;
  });

  std::vector<double> v1, v2;
  v1.reserve(reps);
  v2.reserve(reps);
  std::size_t censored = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    if (bad[r]) {
      ++censored;
      continue;
    }
    v1.push_back(s1[r]);
    v2.push_back(s2[r]);
  }
  if (v1.size() < 2)
    throw NumericsError("all ladder-epoch paths censored");

  const SampleStats m1 = summarize(v1);
  const SampleStats m2 = summarize(v2);

  RenewalConstants out;
  out.mu = model.mu();
  out.se_mu = 0.0;
  if (model.sigma2()) {
    out.sigma2 = *model.sigma2();
    out.se_sigma2 = 0.0;
  } else {
    // No closed-form variance: estimate from a fresh increment sample.
    const auto xs = sample_increments(model, std::max<std::size_t>(reps, 1000),
                                      mix64(seed ^ 0x5157ad5157ad5157ULL));
    const SampleStats sx = summarize(xs);
    out.sigma2 = sx.var;
    out.se_sigma2 = sx.var_se;
  }
  out.e_s_tau0 = m1.mean;
  out.se_e_s_tau0 = m1.se;
  out.e_s_tau0_sq = m2.mean;
  out.se_e_s_tau0_sq = m2.se;
  if (!(m1.mean > 0.0))
    throw NumericsError("ladder-height mean came out nonpositive");
  out.overshoot_correction = m2.mean / (2.0 * m1.mean);

  // Delta method for g(m1, m2) = m2 / (2 m1) with the sample covariance.
  const std::size_t n = v1.size();
  double cov = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    cov += (v1[i] - m1.mean) * (v2[i] - m2.mean);
  cov /= static_cast<double>(n - 1);
  const double g1 = -m2.mean / (2.0 * m1.mean * m1.mean);
  const double g2 = 1.0 / (2.0 * m1.mean);
  const double var_g =
      (g1 * g1 * m1.var + 2.0 * g1 * g2 * cov + g2 * g2 * m2.var) /
      static_cast<double>(n);
  out.se_overshoot_correction = var_g > 0.0 ? std::sqrt(var_g) : 0.0;

  out.reps = reps;
  out.censored = censored;
  return out;
}

WaldReport wald_check(const IncrementModel& model, double b, std::size_t reps,
                      std::uint64_t seed, int threads, std::size_t max_steps) {
  if (reps < 2) throw ConfigError("need at least 2 replications");
  const double mu = model.mu();
  std::vector<double> d(reps);
  std::vector<unsigned char> bad(reps, 0);
  parallel_reps(reps, threads, [&](std::size_t r) {
    const auto rec =
        simulate_linear_crossing(model, b, child_seed(seed, r), max_steps);
    if (rec.censored) {
      bad[r] = 1;
      return;
    }
    d[r] = rec.stopped_sum - mu * static_cast<double>(rec.stop_index);
  });

  std::vector<double> kept;
  kept.reserve(reps);
  std::size_t censored = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    if (bad[r]) {
      ++censored;
      continue;
    }
    kept.push_back(d[r]);
  }
  if (kept.size() < 2) throw NumericsError("all crossing paths censored");
  const SampleStats st = summarize(kept);
  return {st.mean, st.se, reps, censored};
}

}  // namespace renewal
