#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "entpoly/error.hpp"
#include "entpoly/polytope.hpp"
#include "entpoly/random.hpp"
#include "entpoly/state_prep.hpp"

using namespace entpoly;
using std::numbers::pi;

namespace {

// Term-by-term expansion of the three-qubit circuit output.
CVector expected_three_qubit(cplx alpha, cplx beta, double split, double rotation) {
  CVector v = CVector::Zero(8);
  v[0b000] = alpha;
  v[0b110] = beta * std::cos(2 * split);
  v[0b011] = -beta * std::sin(2 * split) * std::cos(2 * rotation);
  v[0b111] = beta * std::sin(2 * split) * std::sin(2 * rotation);
  return v;
}

std::array<int, 3> ranks_of(const PureState& psi) {
  const std::vector<int> r = marginal_ranks(psi);
  return {r[0], r[1], r[2]};
}

Verdict exact_verdict(const PureState& psi) {
  return classify(LocalSpectrum(local_max_eigenvalues(psi)), NoiseBound::exact(psi.num_qubits()));
}

}  // namespace

TEST_CASE("three-qubit circuit matches the term expansion for random settings") {
  Rng rng = make_rng(2024);
  std::uniform_real_distribution<double> angle(0.0, pi);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    cplx alpha(g(rng), g(rng));
    cplx beta(g(rng), g(rng));
    const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    alpha /= norm;
    beta /= norm;
    const double split = angle(rng);
    const double rotation = angle(rng);
    const PureState psi = prepare_three_qubit({alpha, beta, {split, rotation}});
    const CVector expected = expected_three_qubit(alpha, beta, split, rotation);
    CHECK((psi.amplitudes() - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("four-qubit circuit factorizes into one interferometer per photon") {
  Rng rng = make_rng(99);
  std::uniform_real_distribution<double> angle(0.0, pi);
  for (int trial = 0; trial < 20; ++trial) {
    const WaveplateConfig4 cfg = WaveplateConfig4::from_angle_list(
        cplx(0.6), cplx(0.8), {angle(rng), angle(rng), angle(rng), angle(rng)});
    const PureState psi = prepare_four_qubit(cfg);
    // Amplitude of |1100> is the product of both photons' undeflected branches.
    const double sa = cfg.photon_a.split;
    CHECK(std::abs(psi[0] - cplx(0.6)) < 1e-12);
    const double cb = std::cos(2 * cfg.photon_b.split);
    CHECK(std::abs(psi[0b1100] - cplx(0.8 * std::cos(2 * sa) * cb)) < 1e-12);
  }
  CHECK_THROWS_AS(prepare_four_qubit(WaveplateConfig4::from_angle_list(cplx(1.0), cplx(1.0), {0, 0, 0, 0})),
                  InvalidArgument);
}

TEST_CASE("pump amplitudes are normalized") {
  for (double g : {0.0, 0.3, pi / 8, pi / 3}) {
    const auto a = pump_amplitudes(g);
    CHECK(std::norm(a[0]) + std::norm(a[1]) == doctest::Approx(1.0));
  }
}

TEST_CASE("three-qubit presets land in the intended classes") {
  for (const CircuitPreset& p : three_qubit_presets()) {
    CAPTURE(p.name);
    const PureState psi = p.prepare();
    const auto cls = parse_three_qubit_class(p.expected);
    REQUIRE(cls.has_value());
    CHECK(ranks_of(psi) == expected_ranks(*cls));
    const Verdict v = exact_verdict(psi);
    switch (*cls) {
      case ThreeQubitClass::GHZ: CHECK(v.statement == Statement::GhzCertified); break;
      case ThreeQubitClass::W: CHECK(v.statement == Statement::GenuineUndetermined); break;
      case ThreeQubitClass::BS_AB_C: CHECK(v.label() == "BISEPARABLE-CONSISTENT(3)"); break;
      case ThreeQubitClass::BS_BC_A: CHECK(v.label() == "BISEPARABLE-CONSISTENT(1)"); break;
      default: FAIL("unexpected preset class");
    }
  }
}

TEST_CASE("W preset is the W state up to a flip of the second qubit and one sign") {
  const PureState psi = three_qubit_presets()[2].prepare();
  const double t = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(psi[0b000] - cplx(t)) < 1e-12);
  CHECK(std::abs(psi[0b110] - cplx(t)) < 1e-12);
  CHECK(std::abs(psi[0b011] + cplx(t)) < 1e-12);
}

TEST_CASE("four-qubit presets and their spectra") {
  std::map<std::string, CircuitPreset> by_name;
  for (const CircuitPreset& p : four_qubit_presets()) by_name[p.name] = p;

  const auto spectrum = [&](const std::string& name) { return local_max_eigenvalues(by_name.at(name).prepare()); };
  const auto near = [](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i] - b[i]) > 1e-12) return false;
    }
    return true;
  };
  CHECK(near(spectrum("ghz4"), {0.5, 0.5, 0.5, 0.5}));
  CHECK(near(spectrum("w4_type"), {0.75, 0.75, 0.75, 0.75}));
  CHECK(near(spectrum("ghz3_product"), {0.5, 0.5, 0.5, 1.0}));
  CHECK(near(spectrum("w3_product"), {2.0 / 3, 2.0 / 3, 2.0 / 3, 1.0}));
  CHECK(near(spectrum("bell_polarization"), {0.5, 0.5, 1.0, 1.0}));
  CHECK(near(spectrum("separable"), {1.0, 1.0, 1.0, 1.0}));

  CHECK(exact_verdict(by_name.at("ghz4").prepare()).label() == "GHZ-CLASS-CERTIFIED");
  CHECK(exact_verdict(by_name.at("w4_type").prepare()).label() == "GENUINE-MULTIPARTITE-CLASS-UNDETERMINED");
  CHECK(exact_verdict(by_name.at("ghz3_product").prepare()).label() == "GHZ-CLASS-CERTIFIED(1,2,3)");
  CHECK(exact_verdict(by_name.at("w3_product").prepare()).label() ==
        "GENUINE-MULTIPARTITE-CLASS-UNDETERMINED(1,2,3)");
  CHECK(exact_verdict(by_name.at("bell_polarization").prepare()).label() == "BISEPARABLE-CONSISTENT(3,4)");
  CHECK(exact_verdict(by_name.at("separable").prepare()).label() == "SEPARABLE-CONSISTENT");
  CHECK(by_name.at("ghz4_flipped").ambiguous);
}

TEST_CASE("canonical four-qubit families") {
  const cplx a(0.7), b(0.3, 0.2), c(-0.4), d(0.1);
  for (Family f : kFamilies) {
    CAPTURE(to_string(f));
    const PureState psi = canonical_four_qubit({f, a, b, c, d});
    CHECK(psi.amplitudes().norm() == doctest::Approx(1.0));
    CHECK(parse_family(to_string(f)) == f);
  }
  CHECK_THROWS_AS(canonical_four_qubit({Family::G_abcd, 0.0, 0.0, 0.0, 0.0}), DegenerateFamily);
  CHECK(family_warning(Family::L_0_3plus1bar_0_3plus1).has_value());
  CHECK_FALSE(family_warning(Family::G_abcd).has_value());
}

TEST_CASE("canonical three-qubit classes have their rank signatures") {
  for (ThreeQubitClass c : kThreeQubitClasses) {
    CAPTURE(to_string(c));
    CHECK(ranks_of(canonical_three_qubit(c)) == expected_ranks(c));
    CHECK(parse_three_qubit_class(to_string(c)) == c);
  }
  CHECK_FALSE(parse_three_qubit_class("X").has_value());
}

TEST_CASE("random class members keep the marginal ranks of their class") {
  for (ThreeQubitClass c : kThreeQubitClasses) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      CHECK(ranks_of(random_class_member(c, seed)) == expected_ranks(c));
    }
  }
  const PureState a = random_class_member(ThreeQubitClass::W, 5);
  const PureState b = random_class_member(ThreeQubitClass::W, 5);
  CHECK((a.amplitudes() - b.amplitudes()).norm() == 0.0);
}
