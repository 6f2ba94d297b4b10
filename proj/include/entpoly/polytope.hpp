#pragma once

// Entanglement-polytope witness: polygon inequalities, noise margins and
// class verdicts for three- and four-qubit local spectra.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entpoly/spectrum.hpp"

namespace entpoly {

inline constexpr double kFacetTol = 1e-9;

struct PolygonCheck {
  bool feasible = true;
  std::vector<int> violated;  // indices k with lambda_k < sum_{i != k} lambda_i - (N - 2)
};

// lambda_k >= sum_{i != k} lambda_i - (N - 2) for every k, within 1e-9.
PolygonCheck check_polygon(std::span<const double> lambdas);
PolygonCheck check_polygon(const LocalSpectrum& spectrum);

// Shrinkage of every certification boundary for a state of the given purity.
struct NoiseBound {
  double epsilon = 0.0;
  double purity_used = 1.0;
  int num_qubits = 0;

  static NoiseBound exact(int num_qubits) { return {0.0, 1.0, num_qubits}; }
};

// epsilon = N/2 (1 - sqrt(2p - 1)); throws BoundInapplicable for p <= 1/2.
NoiseBound epsilon_bound(int num_qubits, double purity);

// Purity at which epsilon_bound yields `epsilon`.
NoiseBound bound_from_epsilon(int num_qubits, double epsilon);

// Bound from the lowest purity of a batch.
NoiseBound worst_purity_bound(int num_qubits, std::span<const double> purities);

enum class Statement {
  SeparableConsistent,
  BiseparableConsistent,
  GenuineUndetermined,
  GhzCertified,
  Indeterminate,
};

std::string to_string(Statement s);

struct Margin {
  std::string name;
  double value = 0.0;  // positive on the side where the named condition holds
};

struct HullDiagnostic {
  bool inside = false;
  double margin = 0.0;          // signed distance to the nearest facet, positive inside
  std::vector<double> weights;  // convex weights over the region's vertices when inside
  int lp_iterations = 0;
};

struct Verdict {
  bool feasible = true;
  std::vector<int> violated;
  Statement statement = Statement::Indeterminate;
  std::vector<int> parties;         // qubits the statement is about
  std::vector<int> product_qubits;  // qubits consistent with a product factor
  std::vector<std::string> excluded_classes;
  std::vector<Margin> margins;
  NoiseBound epsilon;
  bool within_epsilon_band = false;
  std::optional<HullDiagnostic> hull;

  // Statement with its partition, e.g. "BISEPARABLE-CONSISTENT(1)" (1-based qubits).
  std::string label() const;
};

Verdict classify3(const LocalSpectrum& spectrum, const NoiseBound& epsilon);
Verdict classify4(const LocalSpectrum& spectrum, const NoiseBound& epsilon);
Verdict classify(const LocalSpectrum& spectrum, const NoiseBound& epsilon);

enum class FacetSense { LessEqual, GreaterEqual };

struct Facet {
  std::string name;
  std::vector<double> coefficients;
  double bound = 0.0;
  FacetSense sense = FacetSense::LessEqual;

  // Signed Euclidean distance, positive when the inequality holds.
  double signed_distance(std::span<const double> point) const;
};

struct PolytopeRegion {
  int dimension = 0;
  std::vector<std::vector<double>> vertices;
  std::vector<Facet> facets;

  void validate() const;
  double facet_margin(std::span<const double> point) const;
  bool satisfies_facets(std::span<const double> point, double tol = kFacetTol) const;
};

// Polygon-feasible spectra of three qubits, hull of 5 vertices.
PolytopeRegion three_qubit_region();

// Polygon-feasible spectra of four qubits, hull of 12 vertices.
PolytopeRegion four_qubit_region();

// Permutations of (2/3, 2/3, 2/3, 1). They lie on the face lambda_k = 1 but
// are not vertices of the four-qubit region.
std::vector<std::vector<double>> four_qubit_w_points();

// L1-nearest spectrum inside [1/2, 1]^N that satisfies the polygon
// inequalities, by linear programming. Returns the input when it is feasible.
std::vector<double> nearest_feasible_spectrum(std::span<const double> lambdas);

// Convex-combination feasibility over the region's vertices by linear programming.
HullDiagnostic hull_membership(std::span<const double> point, const PolytopeRegion& region);

// Membership predicates for the three-qubit class polytopes.
bool in_separable_polytope(std::span<const double> l, double tol = kFacetTol);
bool in_biseparable_polytope(std::span<const double> l, double tol = kFacetTol);
bool in_w_polytope(std::span<const double> l, double tol = kFacetTol);
bool in_ghz_polytope(std::span<const double> l, double tol = kFacetTol);

struct PlotPoint {
  double x = 0.0;  // sum of the two largest entries
  double y = 0.0;  // remaining entry
};

// Planar projection of a three-qubit spectrum; ties resolved by lowest index.
PlotPoint project_for_plot(const LocalSpectrum& spectrum);

struct Polyline {
  std::string name;
  std::vector<PlotPoint> points;
};

// Region boundaries in the projection plane for a given epsilon.
std::vector<Polyline> plot_boundaries(double epsilon);

}  // namespace entpoly
