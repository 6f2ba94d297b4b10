#pragma once

// File formats: density matrices and reports as JSON, counts as CSV.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "entpoly/linalg.hpp"
#include "entpoly/measure.hpp"
#include "entpoly/polytope.hpp"
#include "entpoly/resources.hpp"
#include "entpoly/tomo.hpp"

namespace entpoly::io {

using Json = nlohmann::json;

inline constexpr int kSignificantDigits = 12;

// Rounds to `digits` significant digits through a decimal round trip.
double round_significant(double x, int digits = kSignificantDigits);

// Copy with every floating-point value rounded; object keys are already sorted.
Json canonical(const Json& j);

// Canonical, two-space indented text with a trailing newline.
std::string dump(const Json& j);

// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t value);

// {num_qubits, entries: row-major [re, im]}
Json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& j);

// Header setting_id,outcome,count; one row per outcome of every record.
std::string counts_to_csv(std::span<const CountRecord> records, int num_qubits);
std::vector<CountRecord> counts_from_csv(const std::string& text);

Json to_json(const LocalSpectrum& s);
Json to_json(const NoiseBound& b);
Json to_json(const Verdict& v);
Json to_json(const OverheadReport& r);
Json to_json(const ErrorEstimate& e);
Json to_json(const ReconstructionResult& r);

// Parses "0.5,0.6,0.7" style lists.
std::vector<double> parse_list(const std::string& text);

}  // namespace entpoly::io
