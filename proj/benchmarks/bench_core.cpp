#include <benchmark/benchmark.h>

#include "renewalkit/constants.hpp"
#include "renewalkit/path_sampler.hpp"
#include "renewalkit/perturbed_walk.hpp"
#include "renewalkit/rank_sprt.hpp"
#include "renewalkit/renewal_core.hpp"

namespace {

using namespace renewal;

void BM_linear_crossing(benchmark::State& state) {
  const auto model = IncrementModel::exponential(1.0);
  const double b = static_cast<double>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_linear_crossing(model, b, seed++));
  }
}
BENCHMARK(BM_linear_crossing)->Arg(10)->Arg(100);

void BM_perturbed_step(benchmark::State& state) {
  const auto model = IncrementModel::exponential(1.0);
  const auto pert = PerturbationModel::scaled_partial_sum();
  PathSampler sampler(model, pert, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.next());
  }
}
BENCHMARK(BM_perturbed_step);

void BM_rank_sprt_path(benchmark::State& state) {
  RankSprtConfig config;
  config.delta = 2.0;
  config.a_exp = 2.0;
  config.lower = config.upper = static_cast<double>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sprt(config, seed++, 100000));
  }
}
BENCHMARK(BM_rank_sprt_path)->Arg(6)->Arg(12);

void BM_hypergeom_series(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= 2 * n; ++k)
      acc += hypergeom_e_log(n, k, 1.0 / 3.0);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_hypergeom_series)->Arg(100)->Arg(400);

void BM_drift_quadrature(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(drift_mu(2.0, 2.0));
  }
}
BENCHMARK(BM_drift_quadrature);

}  // namespace
