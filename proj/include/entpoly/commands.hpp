#pragma once

// Subcommand implementations shared by the command-line tool and its tests.

#include <array>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "entpoly/io.hpp"
#include "entpoly/state_prep.hpp"

namespace entpoly::cli {

using io::Json;

inline constexpr const char* kVersion = "0.1.0";

enum class StateKind { Class, Preset, Family, Circuit3, Circuit4 };

struct StateSpec {
  StateKind kind = StateKind::Class;
  std::string name = "GHZ";             // class, preset or family name
  cplx alpha{1.0 / std::numbers::sqrt2}; // pump or pair amplitudes
  cplx beta{1.0 / std::numbers::sqrt2};
  std::array<cplx, 4> params{};          // family parameters a, b, c, d
  std::vector<double> angles;            // circuit3: split, rotation; circuit4: split_a, split_b, rotation_a, rotation_b

  int num_qubits() const;
  std::string label() const;
};

enum class PuritySource { Tomography, Exact, Value };

struct ExperimentConfig {
  StateSpec state;
  double visibility = 1.0;
  DetectorModel detector{1.0, 1e4, 1.0};
  std::optional<std::uint64_t> seed;
  bool degrees = false;
  PuritySource purity_source = PuritySource::Tomography;
  std::optional<double> purity;  // used with PuritySource::Value
  int mc_trials = 50;             // spectrum error bars, 0 disables
  int purity_trials = 10;         // purity error bars, 0 disables
  double statistical_z = 3.0;     // epsilon grows by z times the summed spectrum error bars
  std::filesystem::path out_dir = ".";

  static ExperimentConfig from_json(const Json& j);
  Json to_json() const;  // everything except out_dir
  void validate() const;
  std::uint64_t require_seed() const;
};

// Resolves "GHZ", "w", "G_abcd" etc. to a class, preset or family spec.
StateSpec state_from_name(const std::string& name);

PureState target_state(const StateSpec& spec, bool degrees);
DensityMatrix prepared_state(const ExperimentConfig& cfg);

// Marks the pipeline stage reported when an error escapes.
void set_stage(const std::string& stage);
const std::string& current_stage();

// 2 invalid input, 3 numeric failure, 4 witness inapplicable.
int exit_code_for(const std::exception& e);

struct RunOutcome {
  Json report;
  std::vector<CountRecord> local_counts;
  std::vector<CountRecord> global_counts;
  std::vector<double> lambdas;
  double purity_used = 1.0;
  Verdict verdict;
};

// prepare -> measure -> tomography -> witness -> resources, in memory.
RunOutcome run_pipeline(const ExperimentConfig& cfg);

enum class Format { Json, Csv };
Format parse_format(const std::string& text);

// Each command writes its artifacts under cfg.out_dir and returns the written paths.
std::vector<std::filesystem::path> cmd_prepare(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> cmd_measure(const ExperimentConfig& cfg, bool full_plan, Format format);
std::vector<std::filesystem::path> cmd_reconstruct(const std::filesystem::path& counts_file, bool global,
                                                   const ExperimentConfig& cfg);

struct WitnessInput {
  std::optional<std::vector<double>> spectrum;
  std::optional<std::filesystem::path> counts_file;
  std::optional<double> purity;
  std::optional<double> epsilon;
};
std::vector<std::filesystem::path> cmd_witness(const WitnessInput& input, const ExperimentConfig& cfg,
                                               Format format);

std::vector<std::filesystem::path> cmd_overhead(int num_qubits, double eta, const std::string& method,
                                                int rank, const ExperimentConfig& cfg, Format format);

// Writes report.json, projection.csv (three qubits) and purity.csv. Removes
// whatever it wrote when a later stage fails.
std::vector<std::filesystem::path> cmd_run(const ExperimentConfig& cfg);

// One of fig3, fig4, table1, overhead.
Json reproduce(const std::string& target, std::uint64_t seed);
std::vector<std::filesystem::path> cmd_reproduce(const std::string& target, const ExperimentConfig& cfg);

}  // namespace entpoly::cli
