#include "renewalkit/perturbed_walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "renewalkit/stats.hpp"

namespace renewal {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double resolve_eta_star(const TruncationParams& tp, double mu,
                        double eta_star) {
  if (eta_star == 0.0) eta_star = tp.default_eta_star(mu);
  if (!(eta_star > tp.theta / std::pow(mu, 1.0 + tp.alpha)))
    throw ConfigError("eta_star must exceed theta / mu^(1+alpha)");
  if (tp.alpha == 1.0 && !(eta_star < 1.0 / mu))
    throw ConfigError("alpha = 1 needs eta_star < 1/mu");
  return eta_star;
}

std::size_t freeze_index(double b, double mu, double alpha, double eta_star) {
  const double raw = b / mu - eta_star * std::pow(b, alpha);
  if (!(raw >= 1.0))
    throw ConfigError("freeze index below 1; raise b or lower eta_star");
  return static_cast<std::size_t>(raw);
}

}  // namespace

CrossingRecord crossing_from_path(const PerturbedPath& path, double b) {
  if (path.steps.size() != path.xi.size())
    throw ConfigError("steps and xi must have the same length");
  double s = 0.0;
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    s += path.steps[i];
    const double z = s + path.xi[i];
    if (z > b) return {i + 1, z - b, s, false, false};
  }
  return {path.steps.size(), kNaN, s, false, true};
}

CrossingRecord simulate_T_b(const IncrementModel& increment,
                            const PerturbationModel& pert, double b,
                            std::uint64_t seed, std::size_t max_steps) {
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
  PathSampler sampler(increment, pert, seed);
  double s = 0.0;
  for (std::size_t n = 1; n <= max_steps; ++n) {
    const StepSample step = sampler.next();
    s += step.x;
    const double z = s + step.xi;
    if (z > b) return {n, z - b, s, false, false};
  }
  return {max_steps, kNaN, s, false, true};
}

CrossingRecord simulate_tau_star(const IncrementModel& increment,
                                 const PerturbationModel& pert, double b,
                                 double eta_star, std::uint64_t seed,
                                 std::size_t max_steps) {
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
  const TruncationParams& tp = pert.trunc();
  tp.validate();
  const double mu = increment.mu();
  tp.validate_against_mu(mu);
  eta_star = resolve_eta_star(tp, mu, eta_star);
  const std::size_t n_star = freeze_index(b, mu, tp.alpha, eta_star);

  PathSampler sampler(increment, pert, seed);
  double s = 0.0;
  double frozen = 0.0;
  for (std::size_t n = 1; n <= max_steps; ++n) {
    const StepSample step = sampler.next();
    s += step.x;
    if (n == n_star) frozen = zeta(step.xi, n_star, tp);
    if (n >= n_star && s + frozen > b)
      return {n, s + frozen - b, s, false, false};
  }
  return {max_steps, kNaN, s, false, true};
}

PairedCrossing simulate_paired_crossing(const IncrementModel& increment,
                                        const PerturbationModel& pert,
                                        double b, double eta_star,
                                        std::uint64_t seed,
                                        std::size_t max_steps) {
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
  const TruncationParams& tp = pert.trunc();
  tp.validate();
  const double mu = increment.mu();
  tp.validate_against_mu(mu);
  eta_star = resolve_eta_star(tp, mu, eta_star);
  const std::size_t n_star = freeze_index(b, mu, tp.alpha, eta_star);

  PairedCrossing out;
  out.n_star = n_star;
  out.direct.censored = true;
  out.frozen.censored = true;

  PathSampler sampler(increment, pert, seed);
  double s = 0.0;
  bool have_direct = false;
  bool have_frozen = false;
  for (std::size_t n = 1; n <= max_steps && !(have_direct && have_frozen);
       ++n) {
    const StepSample step = sampler.next();
    s += step.x;
    if (!have_direct) {
      const double z = s + step.xi;
      if (z > b) {
        out.direct = {n, z - b, s, false, false};
        have_direct = true;
      }
    }
    if (n == n_star) out.zeta_frozen = zeta(step.xi, n_star, tp);
    if (!have_frozen && n >= n_star && s + out.zeta_frozen > b) {
      out.frozen = {n, s + out.zeta_frozen - b, s, false, false};
      have_frozen = true;
    }
  }
  if (have_direct && have_frozen) {
    const double gap = out.direct.stop_index >= out.frozen.stop_index
                           ? static_cast<double>(out.direct.stop_index -
                                                 out.frozen.stop_index)
                           : static_cast<double>(out.frozen.stop_index -
                                                 out.direct.stop_index);
    out.diff_scaled = gap / tp.rho(b);
  } else {
    out.diff_scaled = kNaN;
  }
  return out;
}

ExitCounts simulate_U_and_N(const IncrementModel& increment,
                            const PerturbationModel& pert, double b,
                            std::uint64_t seed, std::size_t max_steps) {
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
  PathSampler sampler(increment, pert, seed);
  ExitCounts out;
  double s = 0.0;
  double last_z = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= max_steps; ++n) {
    const StepSample step = sampler.next();
    s += step.x;
    last_z = s + step.xi;
    if (last_z <= b) {
      ++out.u;
      out.n_last = n + 1;
    }
  }
  out.censored = last_z <= b;
  return out;
}

WaldReport wald_check_perturbed(const IncrementModel& increment,
                                const PerturbationModel& pert, double b,
                                std::size_t reps, std::uint64_t seed,
                                int threads, std::size_t max_steps) {
  if (reps < 2) throw ConfigError("need at least 2 replications");
  const double mu = increment.mu();
  std::vector<double> d(reps);
  std::vector<unsigned char> bad(reps, 0);
  parallel_reps(reps, threads, [&](std::size_t r) {
    const auto rec =
        simulate_T_b(increment, pert, b, child_seed(seed, r), max_steps);
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
    if (bad[r])
      ++censored;
    else
      kept.push_back(d[r]);
  }
  if (kept.size() < 2) throw NumericsError("all crossing paths censored");
  const SampleStats st = summarize(kept);
  return {st.mean, st.se, reps, censored};
}

bool DiagnosticsReport::condition_pass(const std::string& condition) const {
  bool seen = false;
  for (const auto& rec : records) {
    if (rec.condition != condition) continue;
    seen = true;
    if (!rec.pass) return false;
  }
  return seen;
}

bool DiagnosticsReport::all_pass() const {
  return std::all_of(records.begin(), records.end(),
                     [](const DiagnosticRecord& r) { return r.pass; });
}

std::string DiagnosticsReport::to_json() const {
  std::string out = "[\n";
  char buf[64];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out += "  {\"condition\": \"" + r.condition + "\", \"n\": ";
    std::snprintf(buf, sizeof(buf), "%zu", r.n);
    out += buf;
    out += ", \"estimate\": ";
    std::snprintf(buf, sizeof(buf), "%.17g", r.estimate);
    out += buf;
    out += ", \"std_error\": ";
    std::snprintf(buf, sizeof(buf), "%.17g", r.std_error);
    out += buf;
    out += ", \"pass\": ";
    out += r.pass ? "true" : "false";
    out += "}";
    if (i + 1 < records.size()) out += ",";
    out += "\n";
  }
  out += "]\n";
  return out;
}

DiagnosticsReport regularity_diagnostics(const IncrementModel& increment,
                                         const PerturbationModel& pert,
                                         const std::vector<std::size_t>& grid,
                                         std::size_t reps, std::uint64_t seed,
                                         double budget_factor, int threads) {
  if (grid.empty()) throw ConfigError("grid must not be empty");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw ConfigError("grid must be increasing");
  if (grid.front() < 4) throw ConfigError("grid indices must be at least 4");
  if (reps < 2) throw ConfigError("need at least 2 replications");
  if (!(budget_factor > 1.0))
    throw ConfigError("budget_factor must exceed 1");

  const TruncationParams& tp = pert.trunc();
  tp.validate();
  const double mu = increment.mu();
  tp.validate_against_mu(mu);
  const double m_window = tp.window_multiple(mu);

  struct ConditionSeries {
    std::string name;
    std::vector<double> estimate, se;
  };
  std::vector<ConditionSeries> series = {
      {"cap_exceed_prob", {}, {}},   {"lower_tail_sum", {}, {}},
      {"window_moment", {}, {}},     {"window_tail_c1", {}, {}},
      {"window_tail_c2", {}, {}},    {"window_tail_c4", {}, {}},
      {"window_tail_c8", {}, {}},    {"slow_change_eps_0.1", {}, {}},
      {"slow_change_eps_0.01", {}, {}}, {"last_entry_tail_sum", {}, {}}};
  const double cutoffs[4] = {1.0, 2.0, 4.0, 8.0};

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const std::size_t n = grid[gi];
    const double nd = static_cast<double>(n);
    const double n_alpha = std::pow(nd, tp.alpha);
    const std::size_t k_lo =
        n + static_cast<std::size_t>(std::ceil(tp.K * n_alpha));
    const std::size_t short_win =
        static_cast<std::size_t>(std::floor(n_alpha));
    const std::size_t long_win =
        static_cast<std::size_t>(std::ceil(m_window * n_alpha));
    const std::size_t horizon =
        std::max({static_cast<std::size_t>(std::ceil(budget_factor * nd)),
                  k_lo + 1, n + long_win, n + short_win});

    const double rho_n = tp.rho(nd);
    const double rho_p = std::pow(rho_n, tp.p);
    const double cap_level = tp.theta * n_alpha;
    const std::size_t lo_a =
        static_cast<std::size_t>(std::floor(tp.delta0 * nd)) + 1;

    // per-replication values for the ten statistics
    std::vector<std::vector<double>> vals(series.size(),
                                          std::vector<double>(reps));
    const std::uint64_t level_seed = child_seed(seed, gi);
    parallel_reps(reps, threads, [&](std::size_t r) {
      PathSampler sampler(increment, pert, child_seed(level_seed, r));
      std::vector<double> xi(horizon + 1);
      for (std::size_t j = 1; j <= horizon; ++j) xi[j] = sampler.next().xi;

      // cap_exceed_prob: max over (delta0 n, n]
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t j = lo_a; j <= n; ++j) mx = std::max(mx, xi[j]);
      vals[0][r] = mx > cap_level ? 1.0 : 0.0;

      // lower_tail_sum over k in [k_lo, horizon]
      double tail = 0.0;
      for (std::size_t k = k_lo; k <= horizon; ++k) {
        const double kd = static_cast<double>(k);
        const double bound = -(kd - nd) * mu + tp.w0 * std::pow(kd, tp.alpha);
        if (xi[k] <= bound) tail += std::pow(kd, tp.p - 1.0);
      }
      vals[1][r] = tail / rho_p;

      // window statistics against the frozen cap value
      const double frozen = zeta(xi[n], n, tp);
      double wmax = 0.0;
      for (std::size_t j = 0; j <= long_win; ++j) {
        const double dev = std::min(std::abs(frozen - xi[n + j]), n_alpha);
        wmax = std::max(wmax, dev);
      }
      const double u_p = std::pow(wmax / rho_n, tp.p);
      vals[2][r] = u_p;
      for (int c = 0; c < 4; ++c)
        vals[3 + c][r] = std::max(0.0, u_p - cutoffs[c]);

      double smax = 0.0;
      for (std::size_t j = 1; j <= short_win; ++j)
        smax = std::max(smax, std::abs(xi[n + j] - frozen));
      vals[7][r] = smax > 0.1 ? 1.0 : 0.0;
      vals[8][r] = smax > 0.01 ? 1.0 : 0.0;

      // last_entry_tail_sum: suffix supremum of j^-alpha (xi_j + (j-n) mu)
      double suffix = -std::numeric_limits<double>::infinity();
      std::vector<double> sup_from(horizon + 2, 0.0);
      for (std::size_t j = horizon; j >= k_lo; --j) {
        const double jd = static_cast<double>(j);
        suffix = std::max(suffix,
                          (xi[j] + (jd - nd) * mu) / std::pow(jd, tp.alpha));
        sup_from[j] = suffix;
      }
      double tail_e = 0.0;
      for (std::size_t k = k_lo; k <= horizon; ++k) {
        if (sup_from[k] <= tp.w0)
          tail_e += std::pow(static_cast<double>(k), tp.p - 1.0);
      }
      vals[9][r] = tail_e / rho_p;
    });

    const double prob_scale = std::pow(nd / rho_n, tp.p);
    for (std::size_t c = 0; c < series.size(); ++c) {
      SampleStats st = summarize(vals[c]);
      double est = st.mean;
      double se = st.se;
      if (c == 0) {  // scale the exceedance probability
        est *= prob_scale;
        se *= prob_scale;
      }
      series[c].estimate.push_back(est);
      series[c].se.push_back(se);
    }
  }

  DiagnosticsReport report;
  const std::size_t half = grid.size() / 2;
  for (const auto& s : series) {
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      DiagnosticRecord rec;
      rec.condition = s.name;
      rec.n = grid[gi];
      rec.estimate = s.estimate[gi];
      rec.std_error = s.se[gi];
      rec.pass = true;
      if (gi >= half && gi > 0) {
        const double slack = 2.0 * std::sqrt(s.se[gi] * s.se[gi] +
                                             s.se[gi - 1] * s.se[gi - 1]);
        rec.pass = s.estimate[gi] <= s.estimate[gi - 1] + slack;
      }
      report.records.push_back(rec);
    }
  }
  return report;
}

}  // namespace renewal
