#pragma once

// Measurement budgets, detection overheads and Poissonian error propagation.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entpoly/measure.hpp"

namespace entpoly {

enum class Method { LPM, FQST, CSQST, WITNESS_A, WITNESS_B };

std::string to_string(Method m);
Method parse_method(const std::string& name);

struct MethodSpec {
  Method method = Method::LPM;
  int rank = 1;  // compressed-sensing rank, used by CSQST only

  void validate() const;
};

// LPM 4N, FQST 4^N, CSQST r N^2 2^N, WITNESS_A 2, WITNESS_B N(N-1).
std::uint64_t measurement_count(const MethodSpec& method, int num_qubits);

// Number of detectors that must fire jointly for one measurement of the method.
int measurement_scope(Method method, int num_qubits);

// eta^m R
double count_rate(double eta, double source_rate, int m);

struct OverheadReport {
  MethodSpec method;
  int num_qubits = 0;
  double eta = 1.0;
  std::uint64_t measurements = 0;
  double efficiency = 1.0;  // eta^scope
  double overhead = 0.0;    // measurements / efficiency
};

OverheadReport overhead(const MethodSpec& method, int num_qubits, double eta);

enum class WitnessType { A, B };

// Efficiency below which the local method needs less overhead than the witness.
// Type B is clamped to 1, meaning the local method wins at every efficiency.
double crossing_efficiency(int num_qubits, WitnessType witness);

struct ErrorEstimate {
  std::vector<double> point;    // estimate from the observed counts
  std::vector<double> mean;     // over successful trials
  std::vector<double> std_dev;  // sample standard deviation over successful trials
  int trials = 0;
  int aborted = 0;
  std::uint64_t seed = 0;
};

// Resamples every count as Poisson(observed), re-runs local tomography per
// trial and reports per-qubit statistics of the maximal local eigenvalues.
ErrorEstimate monte_carlo_spectrum(std::span<const CountRecord> records, int trials, std::uint64_t seed);

// Same resampling applied to global records, propagated to the MLE purity.
ErrorEstimate monte_carlo_purity(std::span<const CountRecord> records, int trials, std::uint64_t seed);

}  // namespace entpoly
