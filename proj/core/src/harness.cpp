#include "renewalkit/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "renewalkit/constants.hpp"
#include "renewalkit/errors.hpp"
#include "renewalkit/expansion.hpp"
#include "renewalkit/perturbed_walk.hpp"
#include "renewalkit/rank_sprt.hpp"
#include "renewalkit/renewal_core.hpp"
#include "renewalkit/stats.hpp"

namespace renewal {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigError("empty value for " + what);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ConfigError("bad number '" + s + "' for " + what);
  return v;
}

std::size_t to_count(const std::string& raw, const std::string& what) {
  const double v = to_double(raw, what);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15)
    throw ConfigError("value for " + what + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// "name" or "name(a1,a2,...)"
std::pair<std::string, std::vector<double>> parse_call(
    const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  const auto open = s.find('(');
  if (open == std::string::npos) return {s, {}};
  if (s.back() != ')')
    throw ConfigError("missing ')' in " + what + " value '" + s + "'");
  const std::string name = trim(s.substr(0, open));
  const std::string inside = s.substr(open + 1, s.size() - open - 2);
  std::vector<double> args;
  if (!trim(inside).empty())
    for (const auto& part : split_commas(inside))
      args.push_back(to_double(part, what));
  return {name, args};
}

void need_args(const std::vector<double>& args, std::size_t n,
               const std::string& name) {
  if (args.size() != n)
    throw ConfigError(name + " takes " + std::to_string(n) + " argument" +
                      (n == 1 ? "" : "s"));
}

void check_increasing(const std::vector<double>& grid,
                      const std::string& key) {
  if (grid.empty()) throw ConfigError(key + " must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw ConfigError(key + " must be strictly increasing");
}

std::string json_number(double x) {
  if (!std::isfinite(x)) return "null";
  return format_double(x);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!cfg.kv_.emplace(key, value).second)
      throw ConfigError("duplicate key '" + key + "'");
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading config file '" + path + "'");
  return from_string(buf.str());
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing required key '" + key + "'");
  used_.insert(key);
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  used_.insert(key);
  return it->second;
}

double Config::get_double(const std::string& key) const {
  return to_double(get_string(key), key);
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  used_.insert(key);
  return to_double(it->second, key);
}

std::size_t Config::get_count(const std::string& key) const {
  return to_count(get_string(key), key);
}

std::size_t Config::get_count(const std::string& key,
                              std::size_t fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  used_.insert(key);
  return to_count(it->second, key);
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  used_.insert(key);
  const std::string s = trim(it->second);
  if (s.empty() || s[0] == '-')
    throw ConfigError("value for " + key + " must be a nonnegative integer");
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 0);
  if (end != s.c_str() + s.size())
    throw ConfigError("bad integer '" + s + "' for " + key);
  return static_cast<std::uint64_t>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  used_.insert(key);
  std::string s = trim(it->second);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("bad boolean '" + it->second + "' for " + key);
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  const std::string raw = get_string(key);
  std::vector<double> out;
  for (const auto& part : split_commas(raw)) out.push_back(to_double(part, key));
  return out;
}

std::vector<std::size_t> Config::get_count_list(const std::string& key) const {
  const std::string raw = get_string(key);
  std::vector<std::size_t> out;
  for (const auto& part : split_commas(raw)) out.push_back(to_count(part, key));
  return out;
}

void Config::finish() const {
  for (const auto& [key, value] : kv_) {
    if (!used_.count(key))
      throw ConfigError("unknown key '" + key + "' in config");
  }
}

IncrementModel parse_increment(const std::string& text) {
  const auto [name, args] = parse_call(text, "increment");
  if (name == "deterministic") {
    need_args(args, 1, name);
    return IncrementModel::deterministic(args[0]);
  }
  if (name == "exponential") {
    need_args(args, 1, name);
    return IncrementModel::exponential(args[0]);
  }
  if (name == "uniform") {
    need_args(args, 2, name);
    return IncrementModel::uniform(args[0], args[1]);
  }
  if (name == "shifted_normal") {
    need_args(args, 2, name);
    return IncrementModel::shifted_normal(args[0], args[1]);
  }
  if (name == "rank_pair") {
    need_args(args, 2, name);
    return IncrementModel::rank_pair(args[0], args[1]);
  }
  throw ConfigError("unknown increment model '" + name + "'");
}

PerturbationModel parse_perturbation(const std::string& text) {
  const auto [name, args] = parse_call(text, "perturbation");
  if (name == "zero") {
    need_args(args, 0, name);
    return PerturbationModel::zero();
  }
  if (name == "constant") {
    need_args(args, 1, name);
    return PerturbationModel::constant(args[0]);
  }
  if (name == "scaled_partial_sum") {
    need_args(args, 0, name);
    return PerturbationModel::scaled_partial_sum();
  }
  if (name == "rank_residual") {
    need_args(args, 0, name);
    return PerturbationModel::rank_residual();
  }
  throw ConfigError("unknown perturbation model '" + name + "'");
}

TruncationParams parse_trunc(const Config& cfg) {
  TruncationParams tp;
  tp.theta = cfg.get_double("theta", tp.theta);
  tp.theta_star = cfg.get_double("theta_star", tp.theta_star);
  tp.alpha = cfg.get_double("alpha", tp.alpha);
  tp.delta0 = cfg.get_double("delta0", tp.delta0);
  tp.K = cfg.get_double("K", tp.K);
  tp.w0 = cfg.get_double("w0", tp.w0);
  tp.p = cfg.get_double("p", tp.p);
  tp.rho.beta = cfg.get_double("rho_beta", tp.rho.beta);
  tp.rho.gamma = cfg.get_double("rho_gamma", tp.rho.gamma);
  tp.validate();
  return tp;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("unknown format '" + text + "' (use csv or json)");
}

namespace {

Table expansion_table(const ExpansionReport& report,
                      std::vector<std::string>& notes) {
  Table t;
  t.columns = {"b",        "predicted", "mc",     "se",
               "residual", "band_lo",   "band_hi"};
  for (const auto& r : report.rows) {
    t.rows.push_back(
        {r.b, r.predicted, r.mc, r.se, r.residual, r.band_lo, r.band_hi});
    if (r.censored > 0)
      notes.push_back("censored b=" + format_double(r.b) + " count=" +
                      std::to_string(r.censored));
  }
  return t;
}

struct CommonOpts {
  std::uint64_t seed = 1;
  int threads = 0;
  std::size_t max_steps = 10'000'000;
};

CommonOpts common_opts(const Config& cfg, const RunOptions& opt) {
  CommonOpts c;
  // read the config seed even when overridden, so the key stays recognized
  const std::uint64_t cfg_seed = cfg.get_u64("master_seed", 1);
  c.seed = opt.seed ? *opt.seed : cfg_seed;
  const auto cfg_threads = cfg.get_count("threads", 0);
  c.threads = opt.threads != 0 ? opt.threads : static_cast<int>(cfg_threads);
  c.max_steps = cfg.get_count("max_steps", 10'000'000);
  cfg.get_bool("exact_repro", false);  // accepted; outputs are always stable
  return c;
}

ReplicationSummary run_expansion_family(const std::string& kind,
                                        const Config& cfg,
                                        const RunOptions& opt) {
  const CommonOpts c = common_opts(cfg, opt);
  const IncrementModel model = parse_increment(cfg.get_string("increment"));
  PerturbationModel pert =
      kind == "linear-renewal"
          ? PerturbationModel::zero()
          : parse_perturbation(cfg.get_string("perturbation", "zero"));
  pert.with_trunc(parse_trunc(cfg));
  const std::vector<double> b_grid = cfg.get_double_list("b_grid");
  check_increasing(b_grid, "b_grid");
  const std::size_t reps = cfg.get_count("reps");

  ReplicationSummary summary;
  summary.experiment = kind;
  std::vector<std::string> notes;
  if (kind == "linear-renewal" || kind == "perturbed-expansion") {
    const double band_k = cfg.get_double("band_k", 4.0);
    cfg.finish();
    const RenewalConstants constants = estimate_renewal_constants(
        model, reps, mix64(c.seed ^ 0x1ce4e5b9a5d2f8c3ULL), c.threads,
        c.max_steps);
    const ExpansionReport report =
        compare_expansion(model, pert, constants, b_grid, reps, c.seed,
                          c.threads, band_k, c.max_steps);
    summary.table = expansion_table(report, notes);
    notes.push_back("overshoot_correction=" +
                    format_double(constants.overshoot_correction));
  } else if (kind == "intermediate") {
    const double band_mult = cfg.get_double("band_mult", 10.0);
    cfg.finish();
    const ExpansionReport report = compare_intermediate(
        model, pert, b_grid, reps, c.seed, c.threads, band_mult, c.max_steps);
    summary.table = expansion_table(report, notes);
  } else {  // variance
    const double band_mult = cfg.get_double("band_mult", 10.0);
    double sigma2 = std::numeric_limits<double>::quiet_NaN();
    if (cfg.has("sigma2"))
      sigma2 = cfg.get_double("sigma2");
    else if (model.sigma2())
      sigma2 = *model.sigma2();
    cfg.finish();
    if (!std::isfinite(sigma2) || sigma2 < 0.0)
      throw ConfigError(
          "sigma2 unknown for this increment model; set sigma2 = <value>");
    const ExpansionReport report = compare_variance(
        model, pert, sigma2, b_grid, reps, c.seed, c.threads, band_mult,
        c.max_steps);
    summary.table = expansion_table(report, notes);
  }
  summary.notes = std::move(notes);
  return summary;
}

ReplicationSummary run_rank_sprt(const Config& cfg, const RunOptions& opt) {
  const CommonOpts c = common_opts(cfg, opt);
  RankSprtConfig rc;
  rc.delta = cfg.get_double("delta", rc.delta);
  rc.a_exp = cfg.get_double("a_exp", rc.a_exp);
  rc.lower = cfg.get_double("lower", rc.lower);
  rc.upper = cfg.get_double("upper", rc.upper);
  rc.validate();
  const std::size_t reps = cfg.get_count("reps");
  if (reps < 1) throw ConfigError("reps must be at least 1");
  const std::size_t max_pairs = std::min<std::size_t>(c.max_steps, 1'000'000);
  cfg.finish();

  std::vector<CrossingRecord> recs(reps);
  parallel_reps(reps, c.threads, [&](std::size_t r) {
    recs[r] = run_sprt(rc, child_seed(c.seed, r), max_pairs);
  });

  ReplicationSummary summary;
  summary.experiment = "rank-sprt-et";
  summary.table.columns = {"rep", "stop_n", "boundary", "overshoot"};
  for (std::size_t r = 0; r < reps; ++r) {
    const auto& rec = recs[r];
    const double boundary = rec.censored ? 0.0 : (rec.hit_lower ? -1.0 : 1.0);
    summary.table.rows.push_back({static_cast<double>(r),
                                  static_cast<double>(rec.stop_index),
                                  boundary, rec.overshoot});
  }
  return summary;
}

ReplicationSummary run_xi_scaling(const Config& cfg, const RunOptions& opt) {
  const CommonOpts c = common_opts(cfg, opt);
  const double delta = cfg.get_double("delta", 2.0);
  const std::vector<std::size_t> n_grid = cfg.get_count_list("n_grid");
  const std::size_t reps = cfg.get_count("reps");
  cfg.finish();

  const XiScalingReport report =
      xi_scaling_check(delta, n_grid, reps, c.seed, c.threads);
  ReplicationSummary summary;
  summary.experiment = "xi-scaling";
  summary.table.columns = {"n", "var_ratio", "mean_residual", "se"};
  for (const auto& row : report.rows)
    summary.table.rows.push_back({static_cast<double>(row.n), row.var_ratio,
                                  row.mean_residual, row.se});
  summary.notes = {"eta=" + format_double(report.eta),
                   "c_eta=" + format_double(report.c_eta_value),
                   "var_ratio_limit=" + format_double(report.var_ratio_limit)};
  return summary;
}

ReplicationSummary run_diagnostics(const Config& cfg, const RunOptions& opt) {
  const CommonOpts c = common_opts(cfg, opt);
  const IncrementModel model = parse_increment(cfg.get_string("increment"));
  PerturbationModel pert =
      parse_perturbation(cfg.get_string("perturbation", "scaled_partial_sum"));
  pert.with_trunc(parse_trunc(cfg));
  const std::vector<std::size_t> n_grid = cfg.get_count_list("n_grid");
  const std::size_t reps = cfg.get_count("reps");
  const double budget_factor = cfg.get_double("budget_factor", 4.0);
  cfg.finish();

  const DiagnosticsReport report = regularity_diagnostics(
      model, pert, n_grid, reps, c.seed, budget_factor, c.threads);
  ReplicationSummary summary;
  summary.experiment = "diagnostics";
  summary.table.columns = {"condition", "n", "estimate", "std_error", "pass"};
  for (const auto& rec : report.records) {
    summary.table.labels.push_back(rec.condition);
    summary.table.rows.push_back({static_cast<double>(rec.n), rec.estimate,
                                  rec.std_error, rec.pass ? 1.0 : 0.0});
  }
  summary.json = report.to_json();
  return summary;
}

ReplicationSummary run_constants(const Config& cfg, const RunOptions& opt) {
  common_opts(cfg, opt);  // consumes the shared keys; constants need no seed
  const double delta = cfg.get_double("delta", 2.0);
  const double a_exp = cfg.get_double("a_exp", 1.0);
  const double eta_default = (delta - 1.0) / (delta + 1.0);
  const double eta = cfg.get_double("eta", eta_default);
  const std::size_t n_max = cfg.get_count("n_max", 2000);
  cfg.finish();

  QuadratureSpec quad;
  const double mu = drift_mu(delta, a_exp, quad);
  const bool has_h = a_exp != 1.0;
  const double h_int = has_h ? h_integral(delta, a_exp, quad) : 0.0;
  const CEtaResult ce = c_eta(eta, n_max);

  std::string json = "{\n";
  json += "  \"delta\": " + format_double(delta) + ",\n";
  json += "  \"a_exp\": " + format_double(a_exp) + ",\n";
  json += "  \"eta\": " + format_double(eta) + ",\n";
  json += "  \"mu\": " + format_double(mu) + ",\n";
  json += "  \"h_integral\": " +
          (has_h ? format_double(h_int) : std::string("null")) + ",\n";
  json += "  \"c_eta\": " + format_double(ce.extrapolated) + ",\n";
  json += "  \"err_estimates\": {\"mu\": " + format_double(quad.abs_tol) +
          ", \"h_integral\": " +
          (has_h ? format_double(quad.abs_tol) : std::string("null")) +
          ", \"c_eta\": " + format_double(ce.err_estimate) + "}\n";
  json += "}\n";

  ReplicationSummary summary;
  summary.experiment = "constants";
  summary.table.columns = {"mu", "h_integral", "c_eta", "c_eta_err"};
  summary.table.rows.push_back(
      {mu, has_h ? h_int : std::numeric_limits<double>::quiet_NaN(),
       ce.extrapolated, ce.err_estimate});
  summary.json = json;
  return summary;
}

}  // namespace

ReplicationSummary run(const Config& cfg, const RunOptions& opt) {
  const std::string kind = cfg.get_string("experiment");
  if (kind == "linear-renewal" || kind == "perturbed-expansion" ||
      kind == "intermediate" || kind == "variance")
    return run_expansion_family(kind, cfg, opt);
  if (kind == "rank-sprt-et") return run_rank_sprt(cfg, opt);
  if (kind == "xi-scaling") return run_xi_scaling(cfg, opt);
  if (kind == "diagnostics") return run_diagnostics(cfg, opt);
  if (kind == "constants") return run_constants(cfg, opt);
  throw ConfigError("unknown experiment '" + kind + "'");
}

void emit(const ReplicationSummary& summary, std::ostream& out,
          OutputFormat format) {
  const Table& t = summary.table;
  const bool labeled = !t.labels.empty();
  if (labeled && t.labels.size() != t.rows.size())
    throw NumericsError("label column length mismatch");

  if (format == OutputFormat::csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      if (i) out << ',';
      out << t.columns[i];
    }
    out << '\n';
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (labeled) out << t.labels[r] << ',';
      for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
        if (i) out << ',';
        out << format_double(t.rows[r][i]);
      }
      out << '\n';
    }
    for (const auto& note : summary.notes) out << "# " << note << '\n';
  } else {
    if (!summary.json.empty()) {
      out << summary.json;
    } else {
      out << "{\n  \"experiment\": \"" << summary.experiment
          << "\",\n  \"columns\": [";
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out << ", ";
        out << '"' << t.columns[i] << '"';
      }
      out << "],\n  \"rows\": [\n";
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out << "    [";
        bool first = true;
        if (labeled) {
          out << '"' << t.labels[r] << '"';
          first = false;
        }
        for (double v : t.rows[r]) {
          if (!first) out << ", ";
          first = false;
          out << json_number(v);
        }
        out << ']' << (r + 1 < t.rows.size() ? "," : "") << '\n';
      }
      out << "  ],\n  \"notes\": [";
      for (std::size_t i = 0; i < summary.notes.size(); ++i) {
        if (i) out << ", ";
        out << '"' << summary.notes[i] << '"';
      }
      out << "]\n}\n";
    }
  }
  out.flush();
  if (!out) throw IoError("failed writing output");
}

void emit_to_file(const ReplicationSummary& summary, const std::string& path,
                  OutputFormat format) {
  if (path == "-" || path.empty()) {
    emit(summary, std::cout, format);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  emit(summary, out, format);
  out.close();
  if (!out) throw IoError("failed writing output file '" + path + "'");
}

}  // namespace renewal
