#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "entpoly/error.hpp"
#include "entpoly/measure.hpp"
#include "entpoly/state_prep.hpp"

using namespace entpoly;

TEST_CASE("projector labels round-trip") {
  for (Projector p : kTomographyProjectors) CHECK(projector_from_label(projector_label(p)) == p);
  CHECK_THROWS_AS(projector_from_label('x'), InvalidArgument);
}

TEST_CASE("projector pairs are orthonormal bases") {
  for (Projector p : kTomographyProjectors) CHECK_NOTHROW(ProjectorPair::from(p).validate());
  ProjectorPair bad{Vec2(1.0, 0.0), Vec2(1.0, 0.0)};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("setting ids round-trip") {
  const MeasurementSetting s = MeasurementSetting::product({0, 2}, {Projector::Plus, Projector::PlusI});
  CHECK(s.id(3) == "+_r");
  const MeasurementSetting back = MeasurementSetting::from_id("+_r");
  CHECK(back.scope == s.scope);
  CHECK(back.labels == s.labels);
  CHECK(s.outcome_label(2) == "10");
  CHECK_THROWS_AS(MeasurementSetting::product({1, 0}, {Projector::Zero, Projector::Zero}), InvalidArgument);
  CHECK_THROWS_AS(MeasurementSetting::from_id("___"), InvalidArgument);
}

TEST_CASE("outcome probabilities follow the Born rule") {
  const DensityMatrix ghz = canonical_three_qubit(ThreeQubitClass::GHZ).projector();
  const auto z = outcome_probabilities(ghz, MeasurementSetting::local(1, Projector::Zero));
  CHECK(z[0] == doctest::Approx(0.5));
  CHECK(z[1] == doctest::Approx(0.5));
  const auto zz = outcome_probabilities(
      ghz, MeasurementSetting::product({0, 2}, {Projector::Zero, Projector::Zero}));
  CHECK(zz[0] == doctest::Approx(0.5));
  CHECK(zz[3] == doctest::Approx(0.5));
  CHECK(zz[1] == doctest::Approx(0.0));
  const auto xxx = outcome_probabilities(
      ghz, MeasurementSetting::product({0, 1, 2}, {Projector::Plus, Projector::Plus, Projector::Plus}));
  // <XXX> = 1 on GHZ: only even-parity outcomes appear.
  CHECK(xxx[0] + xxx[3] + xxx[5] + xxx[6] == doctest::Approx(1.0));
  for (const MeasurementSetting& s : full_tomography_plan(2)) {
    const auto p = outcome_probabilities(DensityMatrix::maximally_mixed(2), s);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("plans have the stated sizes") {
  CHECK(local_tomography_plan(3).size() == 12);
  CHECK(full_tomography_plan(3).size() == 64);
  CHECK(full_tomography_plan(1).size() == 4);
  CHECK_THROWS_AS(full_tomography_plan(7), ResourceLimit);
  CHECK_THROWS_AS(local_tomography_plan(0), InvalidArgument);
}

TEST_CASE("detector model scaling") {
  DetectorModel d{0.5, 1000.0, 2.0};
  CHECK(d.expected_events(1) == doctest::Approx(1000.0));
  CHECK(d.expected_events(3) == doctest::Approx(250.0));
  CHECK_THROWS_AS((DetectorModel{0.0, 1.0, 1.0}).validate(), InvalidArgument);
  CHECK_THROWS_AS((DetectorModel{1.0, -1.0, 1.0}).validate(), InvalidArgument);
}

TEST_CASE("simulated counts are seeded and Poissonian") {
  const DensityMatrix rho = canonical_three_qubit(ThreeQubitClass::W).projector();
  const MeasurementSetting s = MeasurementSetting::local(0, Projector::Zero);
  const DetectorModel d{1.0, 1e4, 1.0};
  const CountRecord a = simulate_counts(rho, s, d, 42);
  const CountRecord b = simulate_counts(rho, s, d, 42);
  CHECK(a.counts == b.counts);
  CHECK(simulate_counts(rho, s, d, 43).counts != a.counts);

  // Mean and variance over many seeds track eta R T p.
  const double p0 = outcome_probabilities(rho, s)[0];
  const DetectorModel small{0.5, 400.0, 1.0};
  double sum = 0.0;
  double sum2 = 0.0;
  const int runs = 2000;
  for (int i = 0; i < runs; ++i) {
    const double c = static_cast<double>(simulate_counts(rho, s, small, 1000 + i).counts[0]);
    sum += c;
    sum2 += c * c;
  }
  const double mean = sum / runs;
  const double var = sum2 / runs - mean * mean;
  const double expected = 200.0 * p0;
  CHECK(std::abs(mean - expected) < 4.0 * std::sqrt(expected / runs));
  CHECK(var == doctest::Approx(expected).epsilon(0.1));
}

TEST_CASE("zero-probability outcomes record zero counts") {
  const DensityMatrix rho = PureState::basis(1, 0).projector();
  const CountRecord r = simulate_counts(rho, MeasurementSetting::local(0, Projector::Zero), {}, 1);
  CHECK(r.counts[1] == 0);
  CHECK(r.total() == r.counts[0]);
}

TEST_CASE("plan simulation derives one seed per setting") {
  const DensityMatrix rho = canonical_three_qubit(ThreeQubitClass::GHZ).projector();
  const auto plan = local_tomography_plan(3);
  const auto recs = simulate_plan(rho, plan, {}, 7);
  REQUIRE(recs.size() == plan.size());
  CHECK(recs[0].seed != recs[1].seed);
  CHECK(recs[5].setting_index == 5);
}
