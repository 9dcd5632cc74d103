#include "renewalkit/expansion.hpp"

#include <cmath>
#include <limits>

#include "renewalkit/errors.hpp"
#include "renewalkit/perturbed_walk.hpp"
#include "renewalkit/stats.hpp"

namespace renewal {
namespace {

std::size_t index_nb(double b, double mu) {
  if (!(mu > 0.0)) throw DriftError("positive drift required for n_b");
  if (!(b > 0.0)) throw ConfigError("boundary must be positive");
  const double raw = std::floor(b / mu);
  if (!(raw >= 1.0)) throw ConfigError("b / mu below 1; no valid n_b");
  return static_cast<std::size_t>(raw);
}

struct StopSample {
  std::vector<double> t;  // uncensored stop indices
  std::size_t censored = 0;
};

StopSample sample_T_b(const IncrementModel& increment,
                      const PerturbationModel& pert, double b,
                      std::size_t reps, std::uint64_t seed, int threads,
                      std::size_t max_steps) {
  if (reps < 2) throw ConfigError("need at least 2 replications");
  std::vector<double> t(reps);
  std::vector<unsigned char> bad(reps, 0);
  parallel_reps(reps, threads, [&](std::size_t r) {
    const auto rec =
        simulate_T_b(increment, pert, b, child_seed(seed, r), max_steps);
    if (rec.censored)
      bad[r] = 1;
    else
      t[r] = static_cast<double>(rec.stop_index);
  });
  StopSample out;
  out.t.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    if (bad[r])
      ++out.censored;
    else
      out.t.push_back(t[r]);
  }
  if (out.t.size() < 2) throw NumericsError("all crossing paths censored");
  return out;
}

}  // namespace

ZetaEstimate estimate_E_zeta_at_n(const IncrementModel& increment,
                                  const PerturbationModel& pert,
                                  std::size_t n, std::size_t reps,
                                  std::uint64_t seed, int threads) {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (reps < 2) throw ConfigError("need at least 2 replications");
  const TruncationParams& tp = pert.trunc();
  tp.validate();
  std::vector<double> xi_n(reps), zeta_n(reps);
  parallel_reps(reps, threads, [&](std::size_t r) {
    const auto path =
        generate_perturbation(pert, increment, n, child_seed(seed, r));
    xi_n[r] = path.back();
    zeta_n[r] = zeta(path.back(), n, tp);
  });
  const SampleStats sz = summarize(zeta_n);
  const SampleStats sx = summarize(xi_n);
  return {n, sz.mean, sz.se, sx.mean, sx.se};
}

ZetaEstimate estimate_E_zeta_nb(const IncrementModel& increment,
                                const PerturbationModel& pert, double b,
                                std::size_t reps, std::uint64_t seed,
                                int threads) {
  return estimate_E_zeta_at_n(increment, pert, index_nb(b, increment.mu()),
                              reps, seed, threads);
}

double predict_ET_second_order(double mu, double e_zeta_nb,
                               double overshoot_correction, double b) {
  if (!(mu > 0.0)) throw DriftError("positive drift required");
  return (b - e_zeta_nb + overshoot_correction) / mu;
}

Interval predict_ET_intermediate(double mu, double e_zeta_nb, double b,
                                 const RhoFunction& rho, double band_mult) {
  if (!(mu > 0.0)) throw DriftError("positive drift required");
  if (!(band_mult > 0.0)) throw ConfigError("band_mult must be positive");
  return {(b - e_zeta_nb) / mu, band_mult * rho(b) / mu};
}

Interval predict_var(double mu, double sigma2, double b,
                     const RhoFunction& rho, double band_mult) {
  if (!(mu > 0.0)) throw DriftError("positive drift required");
  if (!(sigma2 >= 0.0)) throw ConfigError("sigma2 must be nonnegative");
  if (!(band_mult > 0.0)) throw ConfigError("band_mult must be positive");
  const double r = rho(b);
  return {sigma2 * b / (mu * mu * mu),
          band_mult * (std::sqrt(b) * r + r * r)};
}

ExpansionReport compare_expansion(const IncrementModel& increment,
                                  const PerturbationModel& pert,
                                  const RenewalConstants& constants,
                                  const std::vector<double>& b_grid,
                                  std::size_t reps, std::uint64_t seed,
                                  int threads, double band_k,
                                  std::size_t max_steps) {
  if (b_grid.empty()) throw ConfigError("b_grid must not be empty");
  const double mu = increment.mu();
  if (!(mu > 0.0)) throw DriftError("positive drift required");
  ExpansionReport report;
  for (std::size_t bi = 0; bi < b_grid.size(); ++bi) {
    const double b = b_grid[bi];
    const std::uint64_t seed_b = child_seed(seed, bi);
    const ZetaEstimate zest = estimate_E_zeta_nb(
        increment, pert, b, reps, mix64(seed_b ^ 0x7a3c9e1fb4d25a6bULL),
        threads);
    const StopSample sample =
        sample_T_b(increment, pert, b, reps, seed_b, threads, max_steps);
    const SampleStats st = summarize(sample.t);

    ExpansionRow row;
    row.b = b;
    row.predicted = b - zest.e_zeta + constants.overshoot_correction;
    row.mc = mu * st.mean;
    row.se = std::sqrt(mu * mu * st.se * st.se + zest.se_zeta * zest.se_zeta +
                       constants.se_overshoot_correction *
                           constants.se_overshoot_correction);
    row.residual = row.mc - row.predicted;
    row.band_lo = row.predicted - band_k * row.se;
    row.band_hi = row.predicted + band_k * row.se;
    row.reps = reps;
    row.censored = sample.censored;
    report.rows.push_back(row);
  }
  return report;
}

ExpansionReport compare_intermediate(const IncrementModel& increment,
                                     const PerturbationModel& pert,
                                     const std::vector<double>& b_grid,
                                     std::size_t reps, std::uint64_t seed,
                                     int threads, double band_mult,
                                     std::size_t max_steps) {
  if (b_grid.empty()) throw ConfigError("b_grid must not be empty");
  const double mu = increment.mu();
  if (!(mu > 0.0)) throw DriftError("positive drift required");
  const RhoFunction& rho = pert.trunc().rho;
  ExpansionReport report;
  for (std::size_t bi = 0; bi < b_grid.size(); ++bi) {
    const double b = b_grid[bi];
    const std::uint64_t seed_b = child_seed(seed, bi);
    const ZetaEstimate zest = estimate_E_zeta_nb(
        increment, pert, b, reps, mix64(seed_b ^ 0x7a3c9e1fb4d25a6bULL),
        threads);
    const StopSample sample =
        sample_T_b(increment, pert, b, reps, seed_b, threads, max_steps);
    const SampleStats st = summarize(sample.t);

    ExpansionRow row;
    row.b = b;
    row.predicted = b - zest.e_zeta;
    row.mc = mu * st.mean;
    row.se = std::sqrt(mu * mu * st.se * st.se + zest.se_zeta * zest.se_zeta);
    row.residual = row.mc - row.predicted;
    row.band_lo = row.predicted - band_mult * rho(b);
    row.band_hi = row.predicted + band_mult * rho(b);
    row.reps = reps;
    row.censored = sample.censored;
    report.rows.push_back(row);
  }
  return report;
}

ExpansionReport compare_variance(const IncrementModel& increment,
                                 const PerturbationModel& pert, double sigma2,
                                 const std::vector<double>& b_grid,
                                 std::size_t reps, std::uint64_t seed,
                                 int threads, double band_mult,
                                 std::size_t max_steps) {
  if (b_grid.empty()) throw ConfigError("b_grid must not be empty");
  const double mu = increment.mu();
  if (!(mu > 0.0)) throw DriftError("positive drift required");
  const RhoFunction& rho = pert.trunc().rho;
  ExpansionReport report;
  for (std::size_t bi = 0; bi < b_grid.size(); ++bi) {
    const double b = b_grid[bi];
    const StopSample sample = sample_T_b(increment, pert, b, reps,
                                         child_seed(seed, bi), threads,
                                         max_steps);
    const SampleStats st = summarize(sample.t);
    const Interval band = predict_var(mu, sigma2, b, rho, band_mult);

    ExpansionRow row;
    row.b = b;
    row.predicted = band.center;
    row.mc = st.var;
    row.se = st.var_se;
    row.residual = row.mc - row.predicted;
    row.band_lo = band.lo();
    row.band_hi = band.hi();
    row.reps = reps;
    row.censored = sample.censored;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace renewal
