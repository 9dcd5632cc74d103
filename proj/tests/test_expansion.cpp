#include <cmath>

#include "doctest.h"
#include "renewalkit/expansion.hpp"
#include "renewalkit/stats.hpp"

using namespace renewal;

TEST_SUITE("expansion") {

TEST_CASE("second-order prediction is plain arithmetic") {
  // (b - e_zeta + correction) / mu
  CHECK(predict_ET_second_order(2.0, 0.5, 1.0, 10.0) == 5.25);
  CHECK_THROWS_AS(predict_ET_second_order(0.0, 0.5, 1.0, 10.0), DriftError);
}

TEST_CASE("intermediate band centers and scales as documented") {
  RhoFunction flat;  // rho = 1
  const auto band = predict_ET_intermediate(2.0, 0.5, 10.0, flat, 10.0);
  CHECK(band.center == doctest::Approx(4.75).epsilon(1e-14));
  CHECK(band.half_width == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(band.contains(4.75));
  CHECK(band.contains(9.7));
  CHECK(!band.contains(9.8));

  RhoFunction grow{0.5, 0.0};
  const auto wide = predict_ET_intermediate(2.0, 0.5, 100.0, grow, 10.0);
  CHECK(wide.half_width == doctest::Approx(10.0 * 10.0 / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(predict_ET_intermediate(-1.0, 0.0, 10.0, flat, 10.0),
                  DriftError);
}

TEST_CASE("variance band matches sigma^2 b / mu^3") {
  RhoFunction flat;
  const auto band = predict_var(2.0, 4.0, 50.0, flat, 10.0);
  CHECK(band.center == doctest::Approx(25.0).epsilon(1e-14));
  CHECK(band.half_width ==
        doctest::Approx(10.0 * (std::sqrt(50.0) + 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(predict_var(2.0, -1.0, 50.0, flat, 10.0), ConfigError);
}

TEST_CASE("zeta estimates are exact for degenerate perturbations") {
  const auto model = IncrementModel::exponential(1.0);

  auto zero = PerturbationModel::zero();
  zero.with_trunc(TruncationParams{});
  const auto ez = estimate_E_zeta_at_n(model, zero, 50, 10, 1);
  CHECK(ez.e_zeta == 0.0);
  CHECK(ez.se_zeta == 0.0);
  CHECK(ez.e_xi == 0.0);

  auto small = PerturbationModel::constant(0.7);
  small.with_trunc(TruncationParams{});
  const auto ec = estimate_E_zeta_at_n(model, small, 50, 10, 1);
  CHECK(ec.e_zeta == 0.7);
  CHECK(ec.se_zeta == 0.0);

  // cap active: theta n^alpha = 4^0.6 < 10
  auto big = PerturbationModel::constant(10.0);
  big.with_trunc(TruncationParams{});
  const auto eb = estimate_E_zeta_at_n(model, big, 4, 10, 1);
  CHECK(eb.e_zeta == doctest::Approx(std::pow(4.0, 0.6)).epsilon(1e-14));
  CHECK(eb.e_xi == 10.0);
}

TEST_CASE("n_b uses the floor of b over mu") {
  const auto exp_model = IncrementModel::exponential(1.0);
  auto pert = PerturbationModel::zero();
  pert.with_trunc(TruncationParams{});
  CHECK(estimate_E_zeta_nb(exp_model, pert, 10.0, 10, 1).n == 10);

  const auto det = IncrementModel::deterministic(2.0);
  CHECK(estimate_E_zeta_nb(det, pert, 5.0, 10, 1).n == 2);
  CHECK_THROWS_AS(estimate_E_zeta_nb(det, pert, 1.5, 10, 1), ConfigError);
  CHECK_THROWS_AS(
      estimate_E_zeta_nb(IncrementModel::deterministic(-2.0), pert, 5.0, 10, 1),
      DriftError);
}

TEST_CASE("scaled perturbation has centered zeta at moderate n") {
  const auto model = IncrementModel::exponential(1.0);
  auto pert = PerturbationModel::scaled_partial_sum();
  pert.with_trunc(TruncationParams{});
  const auto est = estimate_E_zeta_at_n(model, pert, 100, 4000, 7);
  CHECK(std::abs(est.e_zeta) <= 4.0 * est.se_zeta);
  // caps are far in the tail here, so xi and zeta moments agree closely
  CHECK(est.e_zeta == doctest::Approx(est.e_xi).epsilon(1e-6));
}

TEST_CASE("expansion residuals vanish for the exponential baseline") {
  const auto model = IncrementModel::exponential(1.0);
  auto pert = PerturbationModel::zero();
  pert.with_trunc(TruncationParams{});
  const auto constants = estimate_renewal_constants(model, 20000, 3);
  const auto report =
      compare_expansion(model, pert, constants, {5.0, 10.0}, 20000, 5);
  REQUIRE(report.rows.size() == 2);
  for (const auto& row : report.rows) {
    CHECK(row.censored == 0);
    // exact theory: mu ET = b + 1 and predicted = b + correction-hat
    CHECK(std::abs(row.residual) <= 4.0 * row.se);
    CHECK(row.band_lo == doctest::Approx(row.predicted - 4.0 * row.se));
    CHECK(row.band_hi == doctest::Approx(row.predicted + 4.0 * row.se));
    CHECK(std::abs(row.mc - (row.b + 1.0)) <= 5.0 * row.se);
  }
}

TEST_CASE("intermediate bands swallow the constant-order terms") {
  const auto model = IncrementModel::exponential(1.0);
  auto pert = PerturbationModel::scaled_partial_sum();
  pert.with_trunc(TruncationParams{});
  const auto report = compare_intermediate(model, pert, {30.0}, 8000, 9);
  REQUIRE(report.rows.size() == 1);
  const auto& row = report.rows[0];
  // band half-width 10 rho(b) = 10 dominates the order-one correction
  CHECK(row.band_hi - row.band_lo == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(row.mc >= row.band_lo);
  CHECK(row.mc <= row.band_hi);
}

TEST_CASE("variance comparison sits inside the reported band") {
  const auto model = IncrementModel::exponential(1.0);
  auto pert = PerturbationModel::zero();
  pert.with_trunc(TruncationParams{});
  const auto report =
      compare_variance(model, pert, 1.0, {50.0}, 20000, 11);
  REQUIRE(report.rows.size() == 1);
  const auto& row = report.rows[0];
  CHECK(row.predicted == doctest::Approx(50.0).epsilon(1e-14));
  // exact Var(tau_b) = b for the exponential walk
  CHECK(std::abs(row.mc - 50.0) <= 4.0 * row.se);
  CHECK(row.mc >= row.band_lo);
  CHECK(row.mc <= row.band_hi);
}

TEST_CASE("comparison runs are byte-deterministic across thread counts") {
  const auto model = IncrementModel::exponential(1.0);
  auto pert = PerturbationModel::scaled_partial_sum();
  pert.with_trunc(TruncationParams{});
  const auto constants = estimate_renewal_constants(model, 4000, 3);
  const auto one =
      compare_expansion(model, pert, constants, {20.0}, 4000, 5, 1);
  const auto three =
      compare_expansion(model, pert, constants, {20.0}, 4000, 5, 3);
  CHECK(one.rows[0].mc == three.rows[0].mc);
  CHECK(one.rows[0].se == three.rows[0].se);
  CHECK(one.rows[0].residual == three.rows[0].residual);
}

}  // TEST_SUITE
