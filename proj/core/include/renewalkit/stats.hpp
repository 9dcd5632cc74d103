#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace renewal {

// Mean / unbiased variance / standard error of a sample. Accumulation runs
// in index order so results do not depend on how work was scheduled.
struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double var = 0.0;  // unbiased; 0 when n < 2
  double se = 0.0;   // sqrt(var / n)

  // Standard error of the sample variance itself, from the fourth central
  // moment: se(s^2) ~ sqrt((m4 - s^4) / n).
  double var_se = 0.0;
};

SampleStats summarize(std::span<const double> xs);

// Welford pass in index order over xs[i] for i in [0, n).
SampleStats summarize(const std::vector<double>& xs);

// Runs body(r) for r in [0, reps) across `threads` workers (0 = pick from
// RENEWALKIT_THREADS or hardware). Each replication writes only to its own
// slots, so output is identical for every thread count.
void parallel_reps(std::size_t reps, int threads,
                   const std::function<void(std::size_t)>& body);

// Thread count resolution: flag value if > 0, else RENEWALKIT_THREADS, else
// hardware concurrency (at least 1).
int resolve_threads(int requested);

}  // namespace renewal
