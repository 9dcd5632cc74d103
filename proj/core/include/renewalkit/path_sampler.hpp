#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "renewalkit/increment_model.hpp"
#include "renewalkit/perturbation.hpp"
#include "renewalkit/rank_sprt.hpp"

namespace renewal {

struct StepSample {
  double x = 0.0;   // walk increment X_n
  double xi = 0.0;  // perturbation value xi_n after this step
};

// Joint generator of (X_n, xi_n). Per step the walk increment is drawn
// first, then the perturbation is advanced, so models that consume no
// randomness (zero, constant) leave the walk stream identical to a plain
// linear simulation with the same seed.
//
// rank_residual must be paired with the rank_pair increment law: both sides
// are then computed from the same Lehmann pair draws, X_n being the
// projected-walk increment and xi_n the rank log-likelihood residual.
class PathSampler {
 public:
  PathSampler(const IncrementModel& increment, const PerturbationModel& pert,
              std::uint64_t seed);

  StepSample next();
  std::size_t index() const { return n_; }

 private:
  IncrementModel increment_;
  PerturbationKind kind_;
  double offset_ = 0.0;
  Rng rng_;
  std::size_t n_ = 0;
  double xi_ = 0.0;
  double walk_sum_ = 0.0;  // rank mode: running projected walk
  std::optional<RankState> rank_;
};

// xi_1 .. xi_n from a fresh path; the increment model supplies the path
// randomness the perturbation rides on.
std::vector<double> generate_perturbation(const PerturbationModel& pert,
                                          const IncrementModel& increment,
                                          std::size_t n, std::uint64_t seed);

}  // namespace renewal
