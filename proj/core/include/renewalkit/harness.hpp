#pragma once

// Experiment orchestration: a key-value config file names one experiment and
// its parameters; run() executes it with deterministic child seeding and
// emit() serializes the result with a stable schema and stable number
// formatting (%.17g), so identical (config, seed) runs are byte-identical
// regardless of thread count.
//
// Config syntax: one `key = value` per line, '#' starts a comment, blank
// lines ignored. Unknown or repeated keys are configuration errors. Model
// values use call syntax, e.g. increment = exponential(1.0).
//
// Experiments and their row schemas:
//   linear-renewal | perturbed-expansion  b,predicted,mc,se,residual,band_lo,band_hi
//   intermediate                          same columns, rho-band bounds
//   variance                              same columns, variance units
//   rank-sprt-et                          rep,stop_n,boundary,overshoot
//   xi-scaling                            n,var_ratio,mean_residual,se
//   diagnostics                           JSON array {condition,n,estimate,std_error,pass}
//   constants                             JSON object {mu,h_integral,c_eta,err_estimates}

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "renewalkit/increment_model.hpp"
#include "renewalkit/perturbation.hpp"

namespace renewal {

class Config {
 public:
  static Config from_string(const std::string& text);
  static Config from_file(const std::string& path);

  // Typed getters; the one-argument forms are required keys. Every getter
  // marks its key consumed; finish() rejects configs with leftover keys.
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_count(const std::string& key) const;
  std::size_t get_count(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::size_t> get_count_list(const std::string& key) const;
  bool has(const std::string& key) const;

  void finish() const;  // throws ConfigError naming any unconsumed key

 private:
  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> used_;
};

// "exponential(1.0)", "uniform(0,1)", "deterministic(2)",
// "shifted_normal(1,0.5)", "rank_pair(2,2)".
IncrementModel parse_increment(const std::string& text);

// "zero", "constant(0.5)", "scaled_partial_sum", "rank_residual".
// Truncation parameters are attached separately via with_trunc().
PerturbationModel parse_perturbation(const std::string& text);

// Reads optional truncation keys (theta, theta_star, alpha, delta0, K, w0,
// p, rho_beta, rho_gamma) on top of the defaults.
TruncationParams parse_trunc(const Config& cfg);

enum class OutputFormat { csv, json };
OutputFormat parse_format(const std::string& text);

// Numeric table with an optional leading label column.
struct Table {
  std::vector<std::string> columns;      // includes the label column if any
  std::vector<std::string> labels;       // empty, or one per row
  std::vector<std::vector<double>> rows;
};

struct ReplicationSummary {
  std::string experiment;
  Table table;
  std::vector<std::string> notes;  // context lines; "# ..." rows in CSV
  std::string json;  // pre-rendered JSON when the natural shape is not a table
};

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides master_seed from config
  int threads = 0;                    // 0 = env var / hardware
  bool exact_repro = false;           // accepted; outputs are always stable
};

ReplicationSummary run(const Config& cfg, const RunOptions& opt = {});

void emit(const ReplicationSummary& summary, std::ostream& out,
          OutputFormat format);
// Writes to path ("-" means stdout). I/O failure -> IoError.
void emit_to_file(const ReplicationSummary& summary, const std::string& path,
                  OutputFormat format);

// %.17g rendering used everywhere numbers are serialized.
std::string format_double(double x);

}  // namespace renewal
