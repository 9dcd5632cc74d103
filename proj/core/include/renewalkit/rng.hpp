#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace renewal {

// splitmix64 finalizer. Bit-stable everywhere; used to derive child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for replication r under a master seed. Pure function of (master, r),
// so a replication produces the same stream no matter which worker runs it.
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t r) {
  return mix64(master + 0x9e3779b97f4a7c15ULL * (r + 1));
}

// mt19937_64 plus explicit inverse-transform samplers. The engine is fully
// specified by the standard; the <random> distributions are not, and would
// break byte-reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform on [0, 1)
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

  // Box-Muller, cosine branch only: one normal per two engine draws.
  double normal(double mu, double sigma) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return mu + sigma * r * std::cos(two_pi * u2);
  }

  double rademacher() { return uniform01() < 0.5 ? -1.0 : 1.0; }

  std::uint64_t raw() { return engine_(); }

 private:
  static constexpr double two_pi = 6.28318530717958647692528676655900577;
  std::mt19937_64 engine_;
};

}  // namespace renewal
