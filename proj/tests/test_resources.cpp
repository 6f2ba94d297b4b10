#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entpoly/error.hpp"
#include "entpoly/resources.hpp"
#include "entpoly/state_prep.hpp"

using namespace entpoly;

TEST_CASE("measurement counts") {
  CHECK(measurement_count({Method::LPM}, 4) == 16);
  CHECK(measurement_count({Method::FQST}, 4) == 256);
  CHECK(measurement_count({Method::CSQST}, 4) == 256);
  CHECK(measurement_count({Method::CSQST, 3}, 2) == 48);
  CHECK(measurement_count({Method::WITNESS_A}, 4) == 2);
  CHECK(measurement_count({Method::WITNESS_B}, 4) == 12);
  CHECK_THROWS_AS(measurement_count({Method::CSQST, 0}, 4), InvalidArgument);
  CHECK_THROWS_AS(measurement_count({Method::LPM}, 0), InvalidArgument);
  CHECK(parse_method("WITNESS_B") == Method::WITNESS_B);
  CHECK_THROWS_AS(parse_method("PLM"), InvalidArgument);
}

TEST_CASE("count rates") {
  CHECK(count_rate(0.25, 1e4, 1) / count_rate(0.25, 1e4, 4) == doctest::Approx(64.0));
  CHECK(count_rate(1.0, 1234.0, 7) == 1234.0);
  CHECK(count_rate(0.5, 1000.0, 2) == doctest::Approx(250.0));
  CHECK_THROWS_AS(count_rate(0.0, 1.0, 1), InvalidArgument);
}

TEST_CASE("overhead closed forms") {
  CHECK(overhead({Method::LPM}, 4, 0.5).overhead == doctest::Approx(32.0));
  CHECK(overhead({Method::WITNESS_A}, 4, 0.5).overhead == doctest::Approx(32.0));
  CHECK(overhead({Method::WITNESS_B}, 4, 0.75).overhead == doctest::Approx(64.0 / 3.0));
  CHECK(overhead({Method::LPM}, 4, 0.75).overhead == doctest::Approx(64.0 / 3.0));
  CHECK(overhead({Method::LPM}, 8, 1.0).overhead == 32.0);
  for (Method m : {Method::LPM, Method::FQST, Method::CSQST, Method::WITNESS_A, Method::WITNESS_B}) {
    for (int n = 2; n <= 8; ++n) {
      for (double eta : {0.1, 0.5, 0.9, 1.0}) {
        const OverheadReport r = overhead({m}, n, eta);
        CHECK(std::abs(r.overhead - static_cast<double>(r.measurements) / r.efficiency) <=
              1e-12 * r.overhead);
        CHECK(r.efficiency == doctest::Approx(std::pow(eta, measurement_scope(m, n))));
      }
    }
  }
}

TEST_CASE("crossing efficiencies") {
  CHECK(std::abs(crossing_efficiency(4, WitnessType::A) - 0.5) < 1e-12);
  CHECK(std::abs(crossing_efficiency(4, WitnessType::B) - 0.75) < 1e-12);
  CHECK(std::abs(crossing_efficiency(8, WitnessType::A) - std::pow(16.0, -1.0 / 7.0)) < 1e-12);
  CHECK(crossing_efficiency(9, WitnessType::B) == 1.0);
  for (int n = 2; n <= 12; ++n) {
    const double eta = crossing_efficiency(n, WitnessType::A);
    const double lhs = overhead({Method::LPM}, n, eta).overhead;
    const double rhs = overhead({Method::WITNESS_A}, n, eta).overhead;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * lhs);
  }
  CHECK_THROWS_AS(crossing_efficiency(1, WitnessType::A), InvalidArgument);
}

TEST_CASE("local method beats the pairwise witness above five qubits") {
  for (int n = 6; n <= 12; ++n) {
    for (int i = 1; i <= 100; ++i) {
      const double eta = i / 100.0;
      CHECK(overhead({Method::LPM}, n, eta).overhead < overhead({Method::WITNESS_B}, n, eta).overhead);
    }
  }
}

TEST_CASE("Monte Carlo spectrum errors") {
  const DensityMatrix ghz = canonical_three_qubit(ThreeQubitClass::GHZ).projector();
  const auto plan = local_tomography_plan(3);
  const auto recs = simulate_plan(ghz, plan, {1.0, 1e4, 1.0}, 1);
  const ErrorEstimate e = monte_carlo_spectrum(recs, 100, 9);
  REQUIRE(e.std_dev.size() == 3);
  for (double s : e.std_dev) {
    CHECK(s >= 0.0);
    CHECK(s < 5e-3);
  }
  CHECK(e.aborted == 0);
  const ErrorEstimate again = monte_carlo_spectrum(recs, 100, 9);
  CHECK(again.mean == e.mean);
  CHECK(again.std_dev == e.std_dev);

  const ErrorEstimate two = monte_carlo_spectrum(recs, 2, 1);
  CHECK(two.trials == 2);
  CHECK_THROWS_AS(monte_carlo_spectrum(recs, 1, 1), InvalidArgument);
}

TEST_CASE("Monte Carlo errors shrink with the square root of the counts") {
  // A partially polarized marginal keeps the eigenvalue away from the 1/2 kink.
  const DensityMatrix rho = mix_white_noise(canonical_three_qubit(ThreeQubitClass::BS_AB_C, 0.8, 0.6), 0.9);
  const auto plan = local_tomography_plan(3);
  const auto low = simulate_plan(rho, plan, {1.0, 1e3, 1.0}, 3);
  const auto high = simulate_plan(rho, plan, {1.0, 1e5, 1.0}, 3);
  const ErrorEstimate a = monte_carlo_spectrum(low, 200, 4);
  const ErrorEstimate b = monte_carlo_spectrum(high, 200, 4);
  for (int q = 0; q < 2; ++q) {
    const double ratio = a.std_dev[static_cast<std::size_t>(q)] / b.std_dev[static_cast<std::size_t>(q)];
    CHECK(ratio == doctest::Approx(10.0).epsilon(0.2));
  }
}

TEST_CASE("Monte Carlo purity") {
  const DensityMatrix rho = mix_white_noise(haar_random_pure(2, 1), 0.9);
  const auto recs = simulate_plan(rho, full_tomography_plan(2), {1.0, 5e3, 1.0}, 2);
  const ErrorEstimate e = monte_carlo_purity(recs, 10, 3);
  REQUIRE(e.point.size() == 1);
  CHECK(e.point[0] == doctest::Approx(purity(rho)).epsilon(0.05));
  CHECK(e.std_dev[0] > 0.0);
}
