#include "renewalkit/path_sampler.hpp"

#include <cmath>

namespace renewal {

PathSampler::PathSampler(const IncrementModel& increment,
                         const PerturbationModel& pert, std::uint64_t seed)
    : increment_(increment),
      kind_(pert.kind()),
      offset_(pert.offset()),
      rng_(seed) {
  if (kind_ == PerturbationKind::rank_residual) {
    if (increment_.kind() != IncrementKind::rank_pair)
      throw ConfigError(
          "rank_residual perturbation requires the rank_pair increment law");
    rank_.emplace(increment_.lehmann().delta);
  }
}

StepSample PathSampler::next() {
  ++n_;
  if (kind_ == PerturbationKind::rank_residual) {
    const LehmannSpec& spec = increment_.lehmann();
    for (;;) {
      double x, y;
      lehmann_sample_pair(rng_, spec.a_exp, x, y);
      try {
        rank_->step(x, y);
      } catch (const TieError&) {
        continue;  // measure-zero; redraw the pair
      }
      const double d = lehmann_pair_increment(x, y, spec);
      walk_sum_ += d;
      xi_ = rank_->loglik() - walk_sum_;
      return {d, xi_};
    }
  }

  const double x = increment_.sample(rng_);
  switch (kind_) {
    case PerturbationKind::zero:
      xi_ = 0.0;
      break;
    case PerturbationKind::constant:
      xi_ = offset_;
      break;
    case PerturbationKind::scaled_partial_sum:
      xi_ += rng_.rademacher() / std::sqrt(static_cast<double>(n_));
      break;
    case PerturbationKind::rank_residual:
      break;  // handled above
  }
  return {x, xi_};
}

std::vector<double> generate_perturbation(const PerturbationModel& pert,
                                          const IncrementModel& increment,
                                          std::size_t n, std::uint64_t seed) {
  PathSampler sampler(increment, pert, seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sampler.next().xi;
  return out;
}

}  // namespace renewal
