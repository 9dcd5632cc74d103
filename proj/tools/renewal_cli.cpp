// Command-line driver around the experiment harness.
//
//   renewal_cli simulate  --config exp.cfg [--out path] [--format csv|json]
//   renewal_cli sprt      --config exp.cfg ...
//   renewal_cli diagnose  --config exp.cfg ...
//   renewal_cli constants [--config exp.cfg | --delta D --a-exp A [--eta E]]
//   renewal_cli report    --config exp.cfg        (human-readable table)
//
// Exit codes: 0 ok, 2 configuration error, 3 numerics error, 4 I/O error,
// 1 anything unexpected.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "renewalkit/errors.hpp"
#include "renewalkit/harness.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path = "-";
  std::string format;  // empty = subcommand default
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  int threads = 0;
  bool exact_repro = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool config_required) {
  auto* cfg = cmd->add_option("--config", a.config_path,
                              "experiment config file (key = value lines)");
  if (config_required) cfg->required();
  cmd->add_option("--out", a.out_path, "output path, '-' for stdout");
  cmd->add_option("--format", a.format, "output format: csv or json");
  a.seed_opt = cmd->add_option("--seed", a.seed, "override master_seed");
  cmd->add_option("--threads", a.threads,
                  "worker threads (0 = RENEWALKIT_THREADS or hardware)");
  cmd->add_flag("--exact-repro", a.exact_repro,
                "assert byte-stable output mode (always on)");
}

renewal::RunOptions options_from(const CommonArgs& a) {
  renewal::RunOptions opt;
  if (a.seed_opt != nullptr && a.seed_opt->count() > 0) opt.seed = a.seed;
  opt.threads = a.threads;
  opt.exact_repro = a.exact_repro;
  return opt;
}

void check_family(const renewal::Config& cfg,
                  const std::vector<std::string>& allowed,
                  const std::string& subcommand) {
  const std::string kind = cfg.get_string("experiment");
  for (const auto& k : allowed)
    if (kind == k) return;
  throw renewal::ConfigError("experiment '" + kind +
                             "' does not belong to subcommand '" + subcommand +
                             "'");
}

int run_and_emit(const renewal::Config& cfg, const CommonArgs& a,
                 const std::string& default_format) {
  const renewal::ReplicationSummary summary =
      renewal::run(cfg, options_from(a));
  const renewal::OutputFormat fmt =
      renewal::parse_format(a.format.empty() ? default_format : a.format);
  renewal::emit_to_file(summary, a.out_path, fmt);
  return 0;
}

// Fixed-width human-readable rendering for the `report` subcommand.
void print_text_table(const renewal::ReplicationSummary& summary,
                      std::ostream& out) {
  const renewal::Table& t = summary.table;
  const bool labeled = !t.labels.empty();
  out << "experiment: " << summary.experiment << "\n";
  std::vector<std::vector<std::string>> cells;
  cells.push_back(t.columns);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::vector<std::string> row;
    if (labeled) row.push_back(t.labels[r]);
    for (double v : t.rows[r]) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6g", v);
      row.push_back(buf);
    }
    cells.push_back(row);
  }
  std::vector<std::size_t> width(t.columns.size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << "  ";
      out << std::string(width[i] - row[i].size(), ' ') << row[i];
    }
    out << "\n";
  }
  for (const auto& note : summary.notes) out << "# " << note << "\n";
  out.flush();
  if (!out) throw renewal::IoError("failed writing report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and prediction toolkit for perturbed random "
               "walks and rank-based sequential tests"};
  app.require_subcommand(1);

  CommonArgs sim_args, sprt_args, diag_args, const_args, report_args;

  CLI::App* sim = app.add_subcommand(
      "simulate",
      "crossing experiments: linear-renewal, perturbed-expansion, "
      "intermediate, variance");
  add_common(sim, sim_args, true);

  CLI::App* sprt = app.add_subcommand(
      "sprt", "rank test experiments: rank-sprt-et, xi-scaling");
  add_common(sprt, sprt_args, true);

  CLI::App* diag =
      app.add_subcommand("diagnose", "perturbation regularity diagnostics");
  add_common(diag, diag_args, true);

  CLI::App* consts = app.add_subcommand(
      "constants", "drift, boundary-functional and centering constants");
  add_common(consts, const_args, false);
  double c_delta = 2.0, c_a = 1.0, c_eta_val = 0.0;
  std::size_t c_nmax = 2000;
  auto* eta_opt =
      consts->add_option("--eta", c_eta_val, "residual centering parameter");
  consts->add_option("--delta", c_delta, "tested Lehmann exponent");
  consts->add_option("--a-exp", c_a, "data-generating Lehmann exponent");
  consts->add_option("--n-max", c_nmax, "centering-series depth");

  CLI::App* report = app.add_subcommand(
      "report", "run any experiment and print a plain-text table");
  add_common(report, report_args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      const auto cfg = renewal::Config::from_file(sim_args.config_path);
      check_family(cfg,
                   {"linear-renewal", "perturbed-expansion", "intermediate",
                    "variance"},
                   "simulate");
      return run_and_emit(cfg, sim_args, "csv");
    }
    if (sprt->parsed()) {
      const auto cfg = renewal::Config::from_file(sprt_args.config_path);
      check_family(cfg, {"rank-sprt-et", "xi-scaling"}, "sprt");
      return run_and_emit(cfg, sprt_args, "csv");
    }
    if (diag->parsed()) {
      const auto cfg = renewal::Config::from_file(diag_args.config_path);
      check_family(cfg, {"diagnostics"}, "diagnose");
      return run_and_emit(cfg, diag_args, "json");
    }
    if (consts->parsed()) {
      renewal::Config cfg;
      if (!const_args.config_path.empty()) {
        cfg = renewal::Config::from_file(const_args.config_path);
        check_family(cfg, {"constants"}, "constants");
      } else {
        std::string text = "experiment = constants\n";
        text += "delta = " + renewal::format_double(c_delta) + "\n";
        text += "a_exp = " + renewal::format_double(c_a) + "\n";
        if (eta_opt->count() > 0)
          text += "eta = " + renewal::format_double(c_eta_val) + "\n";
        text += "n_max = " + std::to_string(c_nmax) + "\n";
        cfg = renewal::Config::from_string(text);
      }
      return run_and_emit(cfg, const_args, "json");
    }
    if (report->parsed()) {
      const auto cfg = renewal::Config::from_file(report_args.config_path);
      const renewal::ReplicationSummary summary =
          renewal::run(cfg, options_from(report_args));
      if (report_args.out_path == "-" || report_args.out_path.empty()) {
        print_text_table(summary, std::cout);
      } else {
        std::ofstream out(report_args.out_path);
        if (!out)
          throw renewal::IoError("cannot open output file '" +
                                 report_args.out_path + "'");
        print_text_table(summary, out);
      }
      return 0;
    }
  } catch (const renewal::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const renewal::NumericsError& e) {
    std::cerr << "numerics error: " << e.what() << "\n";
    return 3;
  } catch (const renewal::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
