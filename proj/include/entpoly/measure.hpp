#pragma once

// Projective measurements with finite detector efficiency and Poissonian
// coincidence statistics.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entpoly/linalg.hpp"

namespace entpoly {

using Vec2 = Eigen::Vector2cd;

// The four single-qubit tomography projectors |0>, |1>, |+>, |+i>. A setting
// built on one of them records both that projector (outcome bit 0) and its
// orthogonal complement (outcome bit 1).
enum class Projector { Zero, One, Plus, PlusI };

inline constexpr std::array<Projector, 4> kTomographyProjectors = {
    Projector::Zero, Projector::One, Projector::Plus, Projector::PlusI};

char projector_label(Projector p);
Projector projector_from_label(char c);

// Orthonormal pair (first, second) defining a two-outcome measurement.
struct ProjectorPair {
  Vec2 first;
  Vec2 second;

  static ProjectorPair from(Projector p);
  void validate() const;
};

struct MeasurementSetting {
  std::vector<int> scope;                 // ascending, jointly detected qubits
  std::vector<ProjectorPair> bases;       // one per scope entry
  std::vector<Projector> labels;          // empty for explicit pairs

  static MeasurementSetting local(int qubit, Projector p);
  static MeasurementSetting product(std::vector<int> scope, std::vector<Projector> projectors);

  int size() const { return static_cast<int>(scope.size()); }
  std::size_t num_outcomes() const { return std::size_t{1} << scope.size(); }
  void validate() const;

  // Product vector of outcome `k` (bit j of k, MSB first, selects second of pair j).
  CVector outcome_vector(std::size_t k) const;

  // "_+_" style id over `num_qubits` positions; '_' marks unmeasured qubits.
  std::string id(int num_qubits) const;
  static MeasurementSetting from_id(const std::string& id);

  std::string outcome_label(std::size_t k) const;
};

struct DetectorModel {
  double efficiency = 1.0;         // eta per detector, (0, 1]
  double source_rate = 1e4;        // R, events per second
  double integration_time = 1.0;   // T, seconds

  void validate() const;
  // Expected number of m-fold coincidences for a certain outcome.
  double expected_events(int m) const;
};

struct CountRecord {
  int setting_index = 0;
  MeasurementSetting setting;
  std::vector<std::uint64_t> counts;
  std::uint64_t seed = 0;
  DetectorModel detector;

  std::uint64_t total() const;
};

// Born-rule probabilities of the setting's outcomes on the reduced state.
std::vector<double> outcome_probabilities(const DensityMatrix& rho, const MeasurementSetting& setting);

// Poisson counts with mean eta^m R T p per outcome.
CountRecord simulate_counts(const DensityMatrix& rho, const MeasurementSetting& setting,
                            const DetectorModel& detector, std::uint64_t seed);

// Simulates every setting of a plan with seeds derived from (seed, index).
std::vector<CountRecord> simulate_plan(const DensityMatrix& rho,
                                       std::span<const MeasurementSetting> plan,
                                       const DetectorModel& detector, std::uint64_t seed);

// 4 single-qubit settings per qubit, 4N in total.
std::vector<MeasurementSetting> local_tomography_plan(int num_qubits);

// All 4^N products of the single-qubit projector set over every qubit.
std::vector<MeasurementSetting> full_tomography_plan(int num_qubits);

}  // namespace entpoly
