#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "renewalkit/lehmann.hpp"
#include "renewalkit/rng.hpp"

namespace renewal {

enum class IncrementKind {
  deterministic,
  exponential,
  uniform,
  shifted_normal,
  rank_pair,  // per-pair increment of the projected rank walk
};

// An i.i.d. step law X_n for the walk S_n = X_1 + ... + X_n, with its
// declared mean and (when known in closed form) variance.
class IncrementModel {
 public:
  static IncrementModel deterministic(double c);
  static IncrementModel exponential(double mean);
  static IncrementModel uniform(double lo, double hi);
  static IncrementModel shifted_normal(double mu, double sigma);
  // Drift comes from drift_mu(delta, a_exp); variance is left to MC.
  static IncrementModel rank_pair(double delta, double a_exp,
                                  const QuadratureSpec& quad = {});

  IncrementKind kind() const { return kind_; }
  double mu() const { return mu_; }
  std::optional<double> sigma2() const { return sigma2_; }
  const LehmannSpec& lehmann() const;

  double sample(Rng& rng) const;

 private:
  IncrementModel() = default;

  IncrementKind kind_ = IncrementKind::deterministic;
  double mu_ = 0.0;
  std::optional<double> sigma2_;
  double p0_ = 0.0, p1_ = 0.0;  // kind-specific parameters
  LehmannSpec lehmann_{};
  QuadratureSpec quad_{};
};

// n draws from a fresh stream; same (model, seed) gives the same sequence.
std::vector<double> sample_increments(const IncrementModel& model,
                                      std::size_t n, std::uint64_t seed);

}  // namespace renewal
