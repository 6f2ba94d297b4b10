#include "entpoly/state_prep.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "entpoly/error.hpp"
#include "entpoly/random.hpp"

namespace entpoly {
namespace {

using std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void check_amplitudes(cplx alpha, cplx beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12) {
    throw InvalidArgument("pump amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
  }
}

// Output of the interferometer for input |1>_p|1>_s, indexed by 2*p + s.
std::array<double, 4> photon_output(const PhotonAngles& angles) {
  const double c = std::cos(2.0 * angles.split);
  const double s = std::sin(2.0 * angles.split);
  const double cr = std::cos(2.0 * angles.rotation);
  const double sr = std::sin(2.0 * angles.rotation);
  return {0.0, -s * cr, c, s * sr};
}

CVector from_terms(int n, std::initializer_list<std::pair<const char*, cplx>> terms) {
  CVector v = CVector::Zero(Eigen::Index{1} << n);
  for (const auto& [bits, amp] : terms) {
    Eigen::Index idx = 0;
    for (int q = 0; q < n; ++q) idx = (idx << 1) | (bits[q] == '1' ? 1 : 0);
    v[idx] += amp;
  }
  return v;
}

}  // namespace

void WaveplateConfig3::validate() const { check_amplitudes(alpha, beta); }

void WaveplateConfig4::validate() const { check_amplitudes(alpha, beta); }

WaveplateConfig4 WaveplateConfig4::from_angle_list(cplx alpha, cplx beta,
                                                   const std::array<double, 4>& angles) {
  WaveplateConfig4 cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.photon_a = {angles[0], angles[2]};
  cfg.photon_b = {angles[1], angles[3]};
  return cfg;
}

std::array<cplx, 2> pump_amplitudes(double half_wave_angle) {
  return {cplx(std::cos(2.0 * half_wave_angle)), cplx(std::sin(2.0 * half_wave_angle))};
}

PureState prepare_three_qubit(const WaveplateConfig3& cfg) {
  cfg.validate();
  // After the beam displacer: alpha|000> + beta|111>; the interferometer then
  // acts on (A_p, A_s) = (qubit 0, qubit 2).
  const auto out = photon_output(cfg.photon_a);
  CVector v = CVector::Zero(8);
  v[0] = cfg.alpha;
  for (int p = 0; p < 2; ++p) {
    for (int s = 0; s < 2; ++s) v[(p << 2) | (1 << 1) | s] += cfg.beta * out[2 * p + s];
  }
  return PureState(3, std::move(v));
}

PureState prepare_four_qubit(const WaveplateConfig4& cfg) {
  cfg.validate();
  // alpha|0000> + beta|1111> after both displacers, then one interferometer
  // per photon: A on (qubit 0, qubit 2), B on (qubit 1, qubit 3).
  const auto out_a = photon_output(cfg.photon_a);
  const auto out_b = photon_output(cfg.photon_b);
  CVector v = CVector::Zero(16);
  v[0] = cfg.alpha;
  for (int pa = 0; pa < 2; ++pa) {
    for (int sa = 0; sa < 2; ++sa) {
      for (int pb = 0; pb < 2; ++pb) {
        for (int sb = 0; sb < 2; ++sb) {
          const int idx = (pa << 3) | (pb << 2) | (sa << 1) | sb;
          v[idx] += cfg.beta * out_a[2 * pa + sa] * out_b[2 * pb + sb];
        }
      }
    }
  }
  return PureState(4, std::move(v));
}

std::string_view to_string(ThreeQubitClass c) {
  switch (c) {
    case ThreeQubitClass::S: return "S";
    case ThreeQubitClass::BS_AB_C: return "BS_AB_C";
    case ThreeQubitClass::BS_AC_B: return "BS_AC_B";
    case ThreeQubitClass::BS_BC_A: return "BS_BC_A";
    case ThreeQubitClass::W: return "W";
    case ThreeQubitClass::GHZ: return "GHZ";
  }
  return "?";
}

std::optional<ThreeQubitClass> parse_three_qubit_class(std::string_view name) {
  for (ThreeQubitClass c : kThreeQubitClasses) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::array<int, 3> expected_ranks(ThreeQubitClass c) {
  switch (c) {
    case ThreeQubitClass::S: return {1, 1, 1};
    case ThreeQubitClass::BS_AB_C: return {2, 2, 1};
    case ThreeQubitClass::BS_AC_B: return {2, 1, 2};
    case ThreeQubitClass::BS_BC_A: return {1, 2, 2};
    case ThreeQubitClass::W:
    case ThreeQubitClass::GHZ: return {2, 2, 2};
  }
  return {0, 0, 0};
}

PureState canonical_three_qubit(ThreeQubitClass c, cplx alpha, cplx beta) {
  const cplx third(1.0 / std::sqrt(3.0));
  switch (c) {
    case ThreeQubitClass::S: return PureState::basis(3, 0);
    case ThreeQubitClass::BS_AB_C:
      check_amplitudes(alpha, beta);
      return PureState(3, from_terms(3, {{"000", alpha}, {"110", beta}}));
    case ThreeQubitClass::BS_AC_B:
      check_amplitudes(alpha, beta);
      return PureState(3, from_terms(3, {{"000", alpha}, {"101", beta}}));
    case ThreeQubitClass::BS_BC_A:
      check_amplitudes(alpha, beta);
      return PureState(3, from_terms(3, {{"000", alpha}, {"011", beta}}));
    case ThreeQubitClass::W:
      return PureState(3, from_terms(3, {{"001", third}, {"010", third}, {"100", third}}));
    case ThreeQubitClass::GHZ:
      return PureState(3, from_terms(3, {{"000", kInvSqrt2}, {"111", kInvSqrt2}}));
  }
  throw InvalidArgument("unknown three-qubit class");
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::G_abcd: return "G_abcd";
    case Family::L_abc2: return "L_abc2";
    case Family::L_a2b2: return "L_a2b2";
    case Family::L_ab3: return "L_ab3";
    case Family::L_a4: return "L_a4";
    case Family::L_a2_0_3plus1: return "L_a2_0_3plus1";
    case Family::L_0_5plus3: return "L_0_5plus3";
    case Family::L_0_7plus1bar: return "L_0_7plus1bar";
    case Family::L_0_3plus1bar_0_3plus1: return "L_0_3plus1bar_0_3plus1";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : kFamilies) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::optional<std::string_view> family_warning(Family f) {
  switch (f) {
    case Family::L_0_3plus1bar_0_3plus1:
      return "published representative is textually identical to L_a2_0_3plus1; "
             "implemented as printed";
    case Family::L_ab3:
      return "published representative contains a doubled '+'; read as a single '+'";
    default: return std::nullopt;
  }
}

PureState canonical_four_qubit(const FamilySpec& spec) {
  const cplx a = spec.a, b = spec.b, c = spec.c, d = spec.d;
  const cplx i(0.0, 1.0);
  CVector v;
  switch (spec.family) {
    case Family::G_abcd:
      v = from_terms(4, {{"0000", (a + b) / 2.0}, {"1111", (a + b) / 2.0},
                         {"0011", (a - d) / 2.0}, {"1100", (a - d) / 2.0},
                         {"0101", (b + c) / 2.0}, {"1010", (b + c) / 2.0},
                         {"0110", (b - c) / 2.0}, {"1001", (b - c) / 2.0}});
      break;
    case Family::L_abc2:
      v = from_terms(4, {{"0000", (a + b) / 2.0}, {"1111", (a + b) / 2.0},
                         {"0011", (a - b) / 2.0}, {"1100", (a - b) / 2.0},
                         {"0101", c}, {"1010", c}, {"0110", 1.0}});
      break;
    case Family::L_a2b2:
      v = from_terms(4, {{"0000", a}, {"1111", a}, {"0101", b}, {"1010", b},
                         {"0110", 1.0}, {"0011", 1.0}});
      break;
    case Family::L_ab3: {
      const cplx k = i / std::numbers::sqrt2;
      v = from_terms(4, {{"0000", a}, {"1111", a},
                         {"0101", (a + b) / 2.0}, {"1010", (a + b) / 2.0},
                         {"0110", (a - b) / 2.0}, {"1001", (a - b) / 2.0},
                         {"0001", k}, {"0010", k}, {"0111", k}, {"1011", k}});
      break;
    }
    case Family::L_a4:
      v = from_terms(4, {{"0000", a}, {"0101", a}, {"1010", a}, {"1111", a},
                         {"0001", i}, {"0110", 1.0}, {"1011", -i}});
      break;
    case Family::L_a2_0_3plus1:
    case Family::L_0_3plus1bar_0_3plus1:
      v = from_terms(4, {{"0000", a}, {"1111", a}, {"0011", 1.0}, {"0101", 1.0}, {"0110", 1.0}});
      break;
    case Family::L_0_5plus3:
      v = from_terms(4, {{"0000", 1.0}, {"0101", 1.0}, {"1000", 1.0}, {"1110", 1.0}});
      break;
    case Family::L_0_7plus1bar:
      v = from_terms(4, {{"0000", 1.0}, {"1011", 1.0}, {"1100", 1.0}, {"1110", 1.0}});
      break;
  }
  if (!(v.norm() > 1e-9)) {
    throw DegenerateFamily(std::string("parameters give a zero vector for family ") +
                           std::string(to_string(spec.family)));
  }
  return PureState::normalized(4, std::move(v));
}

PureState random_class_member(ThreeQubitClass c, std::uint64_t seed) {
  const PureState base = canonical_three_qubit(c);
  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Mat2> factors;
    bool ok = true;
    for (int q = 0; q < 3; ++q) {
      Mat2 m;
      for (int r = 0; r < 2; ++r) {
        for (int col = 0; col < 2; ++col) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          m(r, col) = cplx(re, im);
        }
      }
      if (!(std::abs(m.determinant()) > 0.1)) ok = false;
      factors.push_back(m);
    }
    if (!ok) continue;
    try {
      return apply_sloc(SlocOperator(std::move(factors)), base);
    } catch (const DegenerateOperator&) {
    }
  }
  throw DegenerateOperator("random_class_member: no admissible operator after 100 attempts");
}

PureState CircuitPreset::prepare() const {
  return num_qubits == 3 ? prepare_three_qubit(config3) : prepare_four_qubit(config4);
}

std::vector<CircuitPreset> three_qubit_presets() {
  const cplx h(kInvSqrt2);
  const cplx third(1.0 / std::sqrt(3.0));
  const cplx two_thirds(std::sqrt(2.0 / 3.0));
  std::vector<CircuitPreset> out;

  CircuitPreset bs_ab;
  bs_ab.name = "bs_ab_c";
  bs_ab.config3 = {h, h, {0.0, 0.0}};
  bs_ab.expected = "BS_AB_C";
  bs_ab.note = "(|000> + |110>)/sqrt2";
  out.push_back(bs_ab);

  CircuitPreset bs_bc;
  bs_bc.name = "bs_bc_a";
  bs_bc.config3 = {h, h, {pi / 4, 0.0}};
  bs_bc.expected = "BS_BC_A";
  bs_bc.note = "(|000> - |011>)/sqrt2";
  out.push_back(bs_bc);

  CircuitPreset w;
  w.name = "w";
  w.config3 = {third, two_thirds, {pi / 8, 0.0}};
  w.expected = "W";
  w.note = "(|000> + |110> - |011>)/sqrt3: W with qubit B_p flipped, one relative sign";
  out.push_back(w);

  CircuitPreset ghz;
  ghz.name = "ghz";
  ghz.config3 = {h, h, {pi / 4, pi / 4}};
  ghz.expected = "GHZ";
  ghz.note = "(|000> + |111>)/sqrt2";
  out.push_back(ghz);
  return out;
}

std::vector<CircuitPreset> four_qubit_presets() {
  const cplx h(kInvSqrt2);
  const cplx third(1.0 / std::sqrt(3.0));
  const cplx two_thirds(std::sqrt(2.0 / 3.0));
  auto make = [](std::string name, cplx alpha, cplx beta, std::array<double, 4> angles,
                 std::string expected, std::string note, bool ambiguous = false) {
    CircuitPreset p;
    p.name = std::move(name);
    p.num_qubits = 4;
    p.config4 = WaveplateConfig4::from_angle_list(alpha, beta, angles);
    p.expected = std::move(expected);
    p.note = std::move(note);
    p.ambiguous = ambiguous;
    return p;
  };
  return {
      make("separable", cplx(1.0), cplx(0.0), {0, 0, 0, 0}, "L_abc2", "|0000>"),
      make("bell_polarization", h, h, {0, 0, 0, 0}, "L_a2b2",
           "Bell pair on (A_p, B_p), spatial qubits in |0>"),
      make("ghz3_product", h, h, {pi / 4, 0, pi / 4, 0}, "L_0_3plus1bar_0_3plus1",
           "GHZ on (A_p, B_p, A_s) times |0> on B_s"),
      make("w3_product", third, two_thirds, {pi / 8, 0, 0, 0}, "L_a2_0_3plus1",
           "W-type state on (A_p, B_p, A_s) times |0> on B_s"),
      make("w4_type", h, h, {pi / 8, pi / 8, 0, 0}, "L_ab3",
           "local spectrum (3/4, 3/4, 3/4, 3/4) equal to that of the 4-qubit W state; "
           "the amplitudes are not the W state itself"),
      make("ghz4", h, h, {pi / 4, pi / 4, pi / 4, pi / 4}, "G_abcd", "(|0000> + |1111>)/sqrt2"),
      make("ghz4_flipped", h, h, {pi / 4, pi / 4, pi / 4, 0}, "L_0_5plus3",
           "output (|0000> - |1011>)/sqrt2 is a GHZ state up to a bit flip on B_p, "
           "so the named family is not reproduced",
           true),
  };
}

}  // namespace entpoly
