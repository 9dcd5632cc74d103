#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "renewalkit/constants.hpp"
#include "renewalkit/increment_model.hpp"
#include "renewalkit/path_sampler.hpp"
#include "renewalkit/perturbation.hpp"
#include "renewalkit/rng.hpp"
#include "renewalkit/stats.hpp"

using namespace renewal;

TEST_SUITE("rng_models") {

TEST_CASE("child seeds are pure and collision-free over a wide range") {
  const std::uint64_t master = 0xdeadbeefcafef00dULL;
  std::set<std::uint64_t> seen;
  for (std::size_t r = 0; r < 4096; ++r) seen.insert(child_seed(master, r));
  CHECK(seen.size() == 4096);
  CHECK(child_seed(master, 17) == child_seed(master, 17));
  CHECK(child_seed(master, 17) != child_seed(master + 1, 17));
}

TEST_CASE("uniform01 stays in [0,1) and has the right first moments") {
  Rng rng(42);
  std::vector<double> xs(20000);
  for (auto& x : xs) {
    x = rng.uniform01();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
  }
  const auto st = summarize(xs);
  CHECK(std::abs(st.mean - 0.5) <= 4.0 * st.se);
  // Var = 1/12
  CHECK(std::abs(st.var - 1.0 / 12.0) <= 4.0 * st.var_se);
}

TEST_CASE("exponential sampler matches its declared mean and variance") {
  const auto model = IncrementModel::exponential(2.0);
  const auto xs = sample_increments(model, 40000, 7);
  const auto st = summarize(xs);
  CHECK(model.mu() == 2.0);
  CHECK(*model.sigma2() == 4.0);
  CHECK(std::abs(st.mean - 2.0) <= 4.0 * st.se);
  CHECK(std::abs(st.var - 4.0) <= 4.0 * st.var_se);
  CHECK(*std::min_element(xs.begin(), xs.end()) > 0.0);
}

TEST_CASE("shifted normal sampler matches mean and variance") {
  const auto model = IncrementModel::shifted_normal(1.0, 0.5);
  const auto xs = sample_increments(model, 40000, 11);
  const auto st = summarize(xs);
  CHECK(std::abs(st.mean - 1.0) <= 4.0 * st.se);
  CHECK(std::abs(st.var - 0.25) <= 4.0 * st.var_se);
}

TEST_CASE("uniform sampler respects its support") {
  const auto model = IncrementModel::uniform(1.0, 3.0);
  const auto xs = sample_increments(model, 20000, 3);
  const auto st = summarize(xs);
  CHECK(std::abs(st.mean - 2.0) <= 4.0 * st.se);
  CHECK(*std::min_element(xs.begin(), xs.end()) >= 1.0);
  CHECK(*std::max_element(xs.begin(), xs.end()) < 3.0);
}

TEST_CASE("deterministic model emits the constant exactly") {
  const auto xs = sample_increments(IncrementModel::deterministic(2.0), 50, 1);
  for (double x : xs) CHECK(x == 2.0);
}

TEST_CASE("rank pair model declares the quadrature drift and no variance") {
  const auto model = IncrementModel::rank_pair(2.0, 2.0);
  CHECK(model.mu() == doctest::Approx(drift_mu(2.0, 2.0)).epsilon(1e-14));
  CHECK(!model.sigma2().has_value());
  CHECK(model.lehmann().delta == 2.0);

  // sample mean of per-pair increments agrees with the declared drift
  const auto xs = sample_increments(model, 20000, 5);
  const auto st = summarize(xs);
  CHECK(std::abs(st.mean - model.mu()) <= 4.0 * st.se);
}

TEST_CASE("model validation rejects broken parameters") {
  CHECK_THROWS_AS(IncrementModel::exponential(0.0), ConfigError);
  CHECK_THROWS_AS(IncrementModel::exponential(-1.0), ConfigError);
  CHECK_THROWS_AS(IncrementModel::uniform(2.0, 2.0), ConfigError);
  CHECK_THROWS_AS(IncrementModel::shifted_normal(1.0, -0.1), ConfigError);
  CHECK_THROWS_AS(IncrementModel::rank_pair(-2.0, 1.0), ConfigError);
  CHECK_THROWS_AS(IncrementModel::deterministic(1.0).lehmann(), ConfigError);
}

TEST_CASE("increment streams are reproducible and seed-sensitive") {
  const auto model = IncrementModel::exponential(1.0);
  const auto a = sample_increments(model, 1000, 123);
  const auto b = sample_increments(model, 1000, 123);
  const auto c = sample_increments(model, 1000, 124);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("zero and constant perturbations are exact") {
  const auto model = IncrementModel::exponential(1.0);
  const auto zs =
      generate_perturbation(PerturbationModel::zero(), model, 64, 9);
  for (double z : zs) CHECK(z == 0.0);
  const auto cs =
      generate_perturbation(PerturbationModel::constant(0.7), model, 64, 9);
  for (double c : cs) CHECK(c == 0.7);
}

TEST_CASE("scaled partial sum perturbation grows like the harmonic sum") {
  // xi_n = sum_{k<=n} eps_k / sqrt(k); Var(xi_n) = H_n, E xi_n = 0.
  const auto model = IncrementModel::exponential(1.0);
  const auto pert = PerturbationModel::scaled_partial_sum();
  const std::size_t n = 1000, reps = 4000;
  double harmonic = 0.0;
  for (std::size_t k = 1; k <= n; ++k)
    harmonic += 1.0 / static_cast<double>(k);

  std::vector<double> tail(reps);
  parallel_reps(reps, 0, [&](std::size_t r) {
    tail[r] = generate_perturbation(pert, model, n, child_seed(21, r)).back();
  });
  const auto st = summarize(tail);
  CHECK(std::abs(st.mean) <= 4.0 * st.se);
  CHECK(std::abs(st.var - harmonic) <= 4.0 * st.var_se);
}

TEST_CASE("perturbation paths are reproducible given the seed") {
  const auto model = IncrementModel::exponential(1.0);
  const auto pert = PerturbationModel::scaled_partial_sum();
  CHECK(generate_perturbation(pert, model, 200, 77) ==
        generate_perturbation(pert, model, 200, 77));
  CHECK(generate_perturbation(pert, model, 200, 77) !=
        generate_perturbation(pert, model, 200, 78));
}

TEST_CASE("rank residual perturbation needs a rank pair walk") {
  CHECK_THROWS_AS(PathSampler(IncrementModel::exponential(1.0),
                              PerturbationModel::rank_residual(), 1),
                  ConfigError);
}

}  // TEST_SUITE
