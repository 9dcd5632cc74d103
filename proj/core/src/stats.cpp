#include "renewalkit/stats.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace renewal {

SampleStats summarize(std::span<const double> xs) {
  SampleStats out;
  out.n = xs.size();
  if (out.n == 0) return out;

  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double x : xs) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  out.mean = mean;
  if (out.n >= 2) {
    out.var = m2 / static_cast<double>(out.n - 1);
    out.se = std::sqrt(out.var / static_cast<double>(out.n));
    double m4 = 0.0;
    for (double x : xs) {
      const double d = x - mean;
      m4 += d * d * d * d;
    }
    m4 /= static_cast<double>(out.n);
    const double s4 = out.var * out.var;
    const double v = (m4 - s4) / static_cast<double>(out.n);
    out.var_se = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  return out;
}

SampleStats summarize(const std::vector<double>& xs) {
  return summarize(std::span<const double>(xs.data(), xs.size()));
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RENEWALKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_reps(std::size_t reps, int threads,
                   const std::function<void(std::size_t)>& body) {
  const int t = resolve_threads(threads);
  if (t <= 1 || reps < 2) {
    for (std::size_t r = 0; r < reps; ++r) body(r);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(t), reps);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mu;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        // Fixed block partition: replication r is a pure function of its
        // child seed, so the partition only affects scheduling, not output.
        const std::size_t lo = reps * w / workers;
        const std::size_t hi = reps * (w + 1) / workers;
        for (std::size_t r = lo; r < hi; ++r) body(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace renewal
