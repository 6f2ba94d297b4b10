#pragma once

// Prepared states of the photonic circuits and canonical SLOCC
// representatives for three and four qubits.

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entpoly/linalg.hpp"

namespace entpoly {

// Per-photon angles of the half-wave plates inside one nested interferometer.
//
//   |0>_p |0>_s -> |0>_p |0>_s
//   |1>_p |1>_s -> cos(2 split) |1>_p |0>_s
//                  - sin(2 split) (cos(2 rotation) |0>_p |1>_s - sin(2 rotation) |1>_p |1>_s)
struct PhotonAngles {
  double split = 0.0;
  double rotation = 0.0;
};

// Three-qubit circuit (A_p, B_p, A_s). alpha, beta are the pump amplitudes of
// alpha|00> + beta|11> on the polarizations.
struct WaveplateConfig3 {
  cplx alpha{1.0 / std::numbers::sqrt2, 0.0};
  cplx beta{1.0 / std::numbers::sqrt2, 0.0};
  PhotonAngles photon_a;

  void validate() const;
};

// Four-qubit circuit (A_p, B_p, A_s, B_s), one interferometer per photon.
struct WaveplateConfig4 {
  cplx alpha{1.0 / std::numbers::sqrt2, 0.0};
  cplx beta{1.0 / std::numbers::sqrt2, 0.0};
  PhotonAngles photon_a;
  PhotonAngles photon_b;

  void validate() const;

  // Builds from the positional angle list [split_a, split_b, rotation_a, rotation_b].
  static WaveplateConfig4 from_angle_list(cplx alpha, cplx beta, const std::array<double, 4>& angles);
};

// One convention for the pump half-wave plate: alpha = cos(2g), beta = sin(2g).
// Hardware calibrations differ, so the circuit API takes amplitudes directly.
std::array<cplx, 2> pump_amplitudes(double half_wave_angle);

PureState prepare_three_qubit(const WaveplateConfig3& cfg);
PureState prepare_four_qubit(const WaveplateConfig4& cfg);

enum class ThreeQubitClass { S, BS_AB_C, BS_AC_B, BS_BC_A, W, GHZ };

inline constexpr std::array<ThreeQubitClass, 6> kThreeQubitClasses = {
    ThreeQubitClass::S,       ThreeQubitClass::BS_AB_C, ThreeQubitClass::BS_AC_B,
    ThreeQubitClass::BS_BC_A, ThreeQubitClass::W,       ThreeQubitClass::GHZ};

std::string_view to_string(ThreeQubitClass c);
std::optional<ThreeQubitClass> parse_three_qubit_class(std::string_view name);

// Marginal rank signature of the class representative (rank rho_A, rho_B, rho_C).
std::array<int, 3> expected_ranks(ThreeQubitClass c);

// Representative state. The biseparable ones use alpha|00> + beta|11> on the
// entangled pair.
PureState canonical_three_qubit(ThreeQubitClass c, cplx alpha = 1.0 / std::numbers::sqrt2,
                                cplx beta = 1.0 / std::numbers::sqrt2);

enum class Family {
  G_abcd,
  L_abc2,
  L_a2b2,
  L_ab3,
  L_a4,
  L_a2_0_3plus1,
  L_0_5plus3,
  L_0_7plus1bar,
  L_0_3plus1bar_0_3plus1,
};

inline constexpr std::array<Family, 9> kFamilies = {
    Family::G_abcd, Family::L_abc2,        Family::L_a2b2,     Family::L_ab3,
    Family::L_a4,   Family::L_a2_0_3plus1, Family::L_0_5plus3, Family::L_0_7plus1bar,
    Family::L_0_3plus1bar_0_3plus1};

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view name);

// Families whose published representative needs a caveat (e.g. a text that
// duplicates another family). Empty for the rest.
std::optional<std::string_view> family_warning(Family f);

struct FamilySpec {
  Family family = Family::G_abcd;
  cplx a{0.0};
  cplx b{0.0};
  cplx c{0.0};
  cplx d{0.0};
};

// Normalized representative; throws DegenerateFamily when the unnormalized
// vector has norm <= 1e-9.
PureState canonical_four_qubit(const FamilySpec& spec);

// Random invertible local operator (complex Gaussian entries, |det| > 0.1)
// applied to the class representative.
PureState random_class_member(ThreeQubitClass c, std::uint64_t seed);

// A named angle setting of the photonic circuits together with the family or
// class it is meant to produce.
struct CircuitPreset {
  std::string name;
  int num_qubits = 3;
  WaveplateConfig3 config3;
  WaveplateConfig4 config4;
  std::string expected;  // class or family label
  bool ambiguous = false;
  std::string note;

  PureState prepare() const;
};

std::vector<CircuitPreset> three_qubit_presets();
std::vector<CircuitPreset> four_qubit_presets();

}  // namespace entpoly
