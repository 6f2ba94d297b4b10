#include "entpoly/polytope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "entpoly/error.hpp"
#include "entpoly/simplex.hpp"

namespace entpoly {
namespace {

double sum_of(std::span<const double> l) { return std::accumulate(l.begin(), l.end(), 0.0); }

std::string qubit_list(const std::vector<int>& qubits) {
  std::string out = "(";
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(qubits[i] + 1);
  }
  return out + ")";
}

std::vector<int> complement(const std::vector<int>& set, int n) {
  std::vector<int> out;
  for (int q = 0; q < n; ++q) {
    if (std::find(set.begin(), set.end(), q) == set.end()) out.push_back(q);
  }
  return out;
}

void require_feasible(const LocalSpectrum& spectrum, const NoiseBound& bound, int n, Verdict& v) {
  if (spectrum.size() != n) {
    throw InvalidArgument("expected a " + std::to_string(n) + "-qubit spectrum, got " +
                          std::to_string(spectrum.size()));
  }
  if (bound.num_qubits != n) throw InvalidArgument("noise bound computed for a different qubit count");
  if (!(bound.epsilon >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
  const PolygonCheck poly = check_polygon(spectrum);
  v.feasible = poly.feasible;
  v.violated = poly.violated;
  v.epsilon = bound;
  if (!poly.feasible) {
    throw MarginalInfeasible("spectrum violates the polygon inequalities at " + qubit_list(poly.violated));
  }
}

std::vector<double> unit(int n, int i, double value) {
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  c[static_cast<std::size_t>(i)] = value;
  return c;
}

PolytopeRegion polygon_region(int n) {
  PolytopeRegion region;
  region.dimension = n;
  for (int i = 0; i < n; ++i) {
    region.facets.push_back({"upper_" + std::to_string(i + 1), unit(n, i, 1.0), 1.0, FacetSense::LessEqual});
    region.facets.push_back({"lower_" + std::to_string(i + 1), unit(n, i, 1.0), 0.5, FacetSense::GreaterEqual});
  }
  for (int k = 0; k < n; ++k) {
    std::vector<double> c(static_cast<std::size_t>(n), -1.0);
    c[static_cast<std::size_t>(k)] = 1.0;
    region.facets.push_back({"polygon_" + std::to_string(k + 1), std::move(c), -(n - 2.0), FacetSense::GreaterEqual});
  }
  return region;
}

// All distinct permutations of a sorted multiset.
void add_permutations(std::vector<std::vector<double>>& out, std::vector<double> v) {
  std::sort(v.begin(), v.end());
  do {
    out.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
}

}  // namespace

PolygonCheck check_polygon(std::span<const double> lambdas) {
  PolygonCheck check;
  const auto n = static_cast<double>(lambdas.size());
  const double total = sum_of(lambdas);
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double others = total - lambdas[k];
    if (lambdas[k] < others - (n - 2.0) - kFacetTol) {
      check.feasible = false;
      check.violated.push_back(static_cast<int>(k));
    }
  }
  return check;
}

PolygonCheck check_polygon(const LocalSpectrum& spectrum) { return check_polygon(spectrum.lambdas()); }

NoiseBound epsilon_bound(int num_qubits, double purity) {
  if (num_qubits < 1) throw InvalidArgument("qubit count must be positive");
  if (!std::isfinite(purity) || purity > 1.0 + 1e-12) throw InvalidArgument("purity must not exceed 1");
  if (purity <= 0.5) {
    throw BoundInapplicable("purity " + std::to_string(purity) + " <= 1/2 leaves the witness without a bound");
  }
  const double p = std::min(purity, 1.0);
  return {0.5 * num_qubits * (1.0 - std::sqrt(2.0 * p - 1.0)), p, num_qubits};
}

NoiseBound bound_from_epsilon(int num_qubits, double epsilon) {
  if (num_qubits < 1) throw InvalidArgument("qubit count must be positive");
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
  const double root = 1.0 - 2.0 * epsilon / num_qubits;
  if (root <= 0.0) throw BoundInapplicable("epsilon corresponds to purity <= 1/2");
  return {epsilon, 0.5 * (root * root + 1.0), num_qubits};
}

NoiseBound worst_purity_bound(int num_qubits, std::span<const double> purities) {
  if (purities.empty()) throw InvalidArgument("no purities given");
  return epsilon_bound(num_qubits, *std::min_element(purities.begin(), purities.end()));
}

std::string to_string(Statement s) {
  switch (s) {
    case Statement::SeparableConsistent: return "SEPARABLE-CONSISTENT";
    case Statement::BiseparableConsistent: return "BISEPARABLE-CONSISTENT";
    case Statement::GenuineUndetermined: return "GENUINE-MULTIPARTITE-CLASS-UNDETERMINED";
    case Statement::GhzCertified: return "GHZ-CLASS-CERTIFIED";
    case Statement::Indeterminate: return "INDETERMINATE-WITHIN-EPSILON";
  }
  return "UNKNOWN";
}

std::string Verdict::label() const {
  const int n = epsilon.num_qubits;
  switch (statement) {
    case Statement::BiseparableConsistent: return to_string(statement) + qubit_list(product_qubits);
    case Statement::GhzCertified:
    case Statement::GenuineUndetermined:
      if (static_cast<int>(parties.size()) < n) return to_string(statement) + qubit_list(parties);
      return to_string(statement);
    default: return to_string(statement);
  }
}

Verdict classify3(const LocalSpectrum& spectrum, const NoiseBound& bound) {
  Verdict v;
  require_feasible(spectrum, bound, 3, v);
  const double eps = bound.epsilon;
  const double total = spectrum.sum();
  const double pure_floor = 1.0 - eps;

  std::vector<int> pure_like;
  for (int k = 0; k < 3; ++k) {
    if (spectrum[k] >= pure_floor - kFacetTol) pure_like.push_back(k);
  }
  const auto pair_gap = [&](int k) {
    const int i = (k + 1) % 3;
    const int j = (k + 2) % 3;
    return std::abs(spectrum[i] - spectrum[j]);
  };

  v.margins.push_back({"ghz_boundary", (2.0 - eps) - total});
  for (int k = 0; k < 3; ++k) {
    v.margins.push_back({"product_" + std::to_string(k + 1), spectrum[k] - pure_floor});
    v.margins.push_back({"pair_balance_" + std::to_string(k + 1), 2.0 * eps - pair_gap(k)});
  }

  if (pure_like.size() < 3) v.excluded_classes.push_back("SEPARABLE");
  for (int k = 0; k < 3; ++k) {
    if (spectrum[k] < pure_floor - kFacetTol || pair_gap(k) > 2.0 * eps + kFacetTol) {
      v.excluded_classes.push_back("BISEPARABLE" + qubit_list({k}));
    }
  }
  if (total < 2.0 - eps - kFacetTol) v.excluded_classes.push_back("W");

  const std::vector<int> all{0, 1, 2};
  if (total < 2.0 - eps - kFacetTol) {
    v.statement = Statement::GhzCertified;
    v.parties = all;
  } else if (pure_like.empty()) {
    v.statement = Statement::GenuineUndetermined;
    v.parties = all;
    v.within_epsilon_band = total < 2.0 - kFacetTol;
  } else if (pure_like.size() == 3) {
    v.product_qubits = all;
    if (total < 2.0 - kFacetTol) {
      v.statement = Statement::Indeterminate;
      v.within_epsilon_band = true;
    } else {
      v.statement = Statement::SeparableConsistent;
    }
  } else {
    int k = pure_like.front();
    for (int q : pure_like) {
      if (spectrum[q] > spectrum[k]) k = q;
    }
    if (pair_gap(k) <= 2.0 * eps + kFacetTol) {
      v.statement = Statement::BiseparableConsistent;
      v.product_qubits = {k};
      v.parties = complement({k}, 3);
    } else {
      v.statement = Statement::Indeterminate;
    }
  }
  return v;
}

Verdict classify4(const LocalSpectrum& spectrum, const NoiseBound& bound) {
  Verdict v;
  require_feasible(spectrum, bound, 4, v);
  const double eps = bound.epsilon;
  const double total = spectrum.sum();
  const double pure_floor = 1.0 - eps;

  std::vector<int> pure_like;
  for (int k = 0; k < 4; ++k) {
    if (spectrum[k] >= pure_floor - kFacetTol) pure_like.push_back(k);
  }

  v.margins.push_back({"ghz4_boundary", (3.0 - eps) - total});
  for (int k = 0; k < 4; ++k) {
    v.margins.push_back({"product_" + std::to_string(k + 1), spectrum[k] - pure_floor});
    v.margins.push_back({"triple_ghz_without_" + std::to_string(k + 1), (2.0 - eps) - (total - spectrum[k])});
  }
  const PolytopeRegion region = four_qubit_region();
  v.hull = hull_membership(spectrum.lambdas(), region);

  if (pure_like.size() < 4) v.excluded_classes.push_back("SEPARABLE");
  for (int k = 0; k < 4; ++k) {
    if (spectrum[k] < pure_floor - kFacetTol) v.excluded_classes.push_back("PRODUCT" + qubit_list({k}));
  }

  const std::vector<int> all{0, 1, 2, 3};

  // A product qubit whose complementary triple sits below the three-qubit W boundary.
  int embedded = -1;
  double best = 0.0;
  for (int k : pure_like) {
    const double margin = (2.0 - eps) - (total - spectrum[k]);
    if (margin > kFacetTol && (embedded < 0 || margin > best)) {
      embedded = k;
      best = margin;
    }
  }
  if (embedded >= 0) {
    v.statement = Statement::GhzCertified;
    v.product_qubits = {embedded};
    v.parties = complement({embedded}, 4);
    v.excluded_classes.push_back("W" + qubit_list(v.parties));
    return v;
  }
  if (total < 3.0 - eps - kFacetTol) {
    v.statement = Statement::GhzCertified;
    v.parties = all;
    v.excluded_classes.push_back("W" + qubit_list(all));
    return v;
  }
  if (pure_like.empty()) {
    v.statement = Statement::GenuineUndetermined;
    v.parties = all;
    v.within_epsilon_band = total < 3.0 - kFacetTol;
    return v;
  }
  if (pure_like.size() == 1) {
    const int k = pure_like.front();
    v.statement = Statement::GenuineUndetermined;
    v.product_qubits = {k};
    v.parties = complement({k}, 4);
    v.within_epsilon_band = total - spectrum[k] < 2.0 - kFacetTol;
    return v;
  }
  if (pure_like.size() == 4) {
    v.product_qubits = all;
    if (total < 3.0 - kFacetTol) {
      v.statement = Statement::Indeterminate;
      v.within_epsilon_band = true;
    } else {
      v.statement = Statement::SeparableConsistent;
    }
    return v;
  }
  if (pure_like.size() == 2) {
    const std::vector<int> pair = complement(pure_like, 4);
    if (std::abs(spectrum[pair[0]] - spectrum[pair[1]]) <= 2.0 * eps + kFacetTol) {
      v.statement = Statement::BiseparableConsistent;
      v.product_qubits = pure_like;
      v.parties = pair;
      return v;
    }
  } else {
    // Three pure-like qubits: the remaining one must pair with one of them.
    const int lone = complement(pure_like, 4).front();
    for (int j : pure_like) {
      if (std::abs(spectrum[j] - spectrum[lone]) <= 2.0 * eps + kFacetTol) {
        v.statement = Statement::BiseparableConsistent;
        for (int q : pure_like) {
          if (q != j) v.product_qubits.push_back(q);
        }
        v.parties = {std::min(j, lone), std::max(j, lone)};
        return v;
      }
    }
  }
  v.statement = Statement::Indeterminate;
  return v;
}

Verdict classify(const LocalSpectrum& spectrum, const NoiseBound& bound) {
  switch (spectrum.size()) {
    case 3: return classify3(spectrum, bound);
    case 4: return classify4(spectrum, bound);
    default: throw InvalidArgument("classification supports three or four qubits");
  }
}

double Facet::signed_distance(std::span<const double> point) const {
  if (point.size() != coefficients.size()) throw InvalidArgument("facet and point dimensions differ");
  double dot = 0.0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < point.size(); ++i) {
    dot += coefficients[i] * point[i];
    norm2 += coefficients[i] * coefficients[i];
  }
  const double slack = sense == FacetSense::LessEqual ? bound - dot : dot - bound;
  return slack / std::sqrt(norm2);
}

void PolytopeRegion::validate() const {
  if (dimension < 1) throw InvalidArgument("region dimension must be positive");
  for (const Facet& f : facets) {
    if (static_cast<int>(f.coefficients.size()) != dimension) throw InvalidArgument("facet dimension mismatch");
  }
  for (const auto& vertex : vertices) {
    if (static_cast<int>(vertex.size()) != dimension) throw InvalidArgument("vertex dimension mismatch");
    if (!satisfies_facets(vertex, 1e-12)) throw InvalidArgument("vertex violates a facet of its region");
  }
}

double PolytopeRegion::facet_margin(std::span<const double> point) const {
  double margin = std::numeric_limits<double>::infinity();
  for (const Facet& f : facets) margin = std::min(margin, f.signed_distance(point));
  return margin;
}

bool PolytopeRegion::satisfies_facets(std::span<const double> point, double tol) const {
  return facet_margin(point) >= -tol;
}

PolytopeRegion three_qubit_region() {
  PolytopeRegion region = polygon_region(3);
  region.vertices.push_back({1.0, 1.0, 1.0});
  add_permutations(region.vertices, {0.5, 0.5, 1.0});
  region.vertices.push_back({0.5, 0.5, 0.5});
  return region;
}

PolytopeRegion four_qubit_region() {
  PolytopeRegion region = polygon_region(4);
  region.vertices.push_back({1.0, 1.0, 1.0, 1.0});
  add_permutations(region.vertices, {0.5, 0.5, 1.0, 1.0});
  add_permutations(region.vertices, {0.5, 0.5, 0.5, 1.0});
  region.vertices.push_back({0.5, 0.5, 0.5, 0.5});
  return region;
}

std::vector<std::vector<double>> four_qubit_w_points() {
  std::vector<std::vector<double>> out;
  add_permutations(out, {2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0});
  return out;
}

HullDiagnostic hull_membership(std::span<const double> point, const PolytopeRegion& region) {
  if (static_cast<int>(point.size()) != region.dimension) {
    throw InvalidArgument("point dimension does not match the region");
  }
  if (region.vertices.empty()) throw InvalidArgument("region has no vertices");
  const auto d = static_cast<Eigen::Index>(region.dimension);
  const auto nv = static_cast<Eigen::Index>(region.vertices.size());
  Eigen::MatrixXd a(d + 1, nv);
  Eigen::VectorXd b(d + 1);
  for (Eigen::Index j = 0; j < nv; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = region.vertices[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    a(d, j) = 1.0;
  }
  for (Eigen::Index i = 0; i < d; ++i) b[i] = point[static_cast<std::size_t>(i)];
  b[d] = 1.0;

  const LpResult lp = solve_lp(a, b, Eigen::VectorXd::Zero(nv));
  if (lp.status == LpStatus::IterationLimit || lp.status == LpStatus::Unbounded) {
    throw NumericError("hull membership LP did not converge after " + std::to_string(lp.iterations) +
                       " iterations (phase-one residual " + std::to_string(lp.infeasibility) + ")");
  }
  HullDiagnostic diag;
  diag.inside = lp.status == LpStatus::Optimal;
  diag.margin = region.facet_margin(point);
  diag.lp_iterations = lp.iterations;
  if (diag.inside) diag.weights.assign(lp.x.data(), lp.x.data() + lp.x.size());
  return diag;
}

std::vector<double> nearest_feasible_spectrum(std::span<const double> lambdas) {
  const int n = static_cast<int>(lambdas.size());
  if (n < 1) throw InvalidArgument("empty spectrum");
  std::vector<double> out(lambdas.begin(), lambdas.end());
  if (check_polygon(lambdas).feasible) return out;

  // Columns: raise p_i, lower q_i, then slacks for upper, lower and polygon rows.
  const Eigen::Index cols = 5 * n;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * n, cols);
  Eigen::VectorXd b(3 * n);
  double total = 0.0;
  for (double l : lambdas) total += l;
  for (int i = 0; i < n; ++i) {
    const double li = lambdas[static_cast<std::size_t>(i)];
    a(i, i) = 1.0;
    a(i, n + i) = -1.0;
    a(i, 2 * n + i) = 1.0;
    b[i] = 1.0 - li;

    a(n + i, i) = 1.0;
    a(n + i, n + i) = -1.0;
    a(n + i, 3 * n + i) = -1.0;
    b[n + i] = 0.5 - li;

    for (int j = 0; j < n; ++j) {
      const double sign = j == i ? 1.0 : -1.0;
      a(2 * n + i, j) = sign;
      a(2 * n + i, n + j) = -sign;
    }
    a(2 * n + i, 4 * n + i) = -1.0;
    b[2 * n + i] = -(n - 2.0) - (2.0 * li - total);
  }
  for (Eigen::Index r = 0; r < b.size(); ++r) {
    if (b[r] < 0.0) {
      a.row(r) *= -1.0;
      b[r] = -b[r];
    }
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
  c.head(2 * n).setOnes();
  const LpResult lp = solve_lp(a, b, c);
  if (lp.status != LpStatus::Optimal) {
    throw NumericError("feasibility projection LP failed after " + std::to_string(lp.iterations) + " iterations");
  }
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = std::clamp(lambdas[static_cast<std::size_t>(i)] + lp.x[i] - lp.x[n + i], 0.5, 1.0);
  }
  return out;
}

bool in_separable_polytope(std::span<const double> l, double tol) {
  return std::all_of(l.begin(), l.end(), [tol](double x) { return x >= 1.0 - tol; });
}

bool in_biseparable_polytope(std::span<const double> l, double tol) {
  if (l.size() != 3) throw InvalidArgument("three-qubit predicate needs three entries");
  for (int k = 0; k < 3; ++k) {
    const double i = l[static_cast<std::size_t>((k + 1) % 3)];
    const double j = l[static_cast<std::size_t>((k + 2) % 3)];
    if (l[static_cast<std::size_t>(k)] >= 1.0 - tol && std::abs(i - j) <= tol) return true;
  }
  return false;
}

bool in_w_polytope(std::span<const double> l, double tol) {
  return in_ghz_polytope(l, tol) && sum_of(l) >= 2.0 - tol;
}

bool in_ghz_polytope(std::span<const double> l, double tol) {
  if (l.size() != 3) throw InvalidArgument("three-qubit predicate needs three entries");
  for (double x : l) {
    if (x < 0.5 - tol || x > 1.0 + tol) return false;
  }
  return check_polygon(l).feasible;
}

PlotPoint project_for_plot(const LocalSpectrum& spectrum) {
  if (spectrum.size() != 3) throw InvalidArgument("plot projection needs a three-qubit spectrum");
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return spectrum[a] > spectrum[b]; });
  return {spectrum[order[0]] + spectrum[order[1]], spectrum[order[2]]};
}

std::vector<Polyline> plot_boundaries(double epsilon) {
  std::vector<Polyline> lines{
      {"domain_floor", {{1.0, 0.5}, {1.5, 0.5}}},
      {"symmetric", {{1.0, 0.5}, {2.0, 1.0}}},
      {"biseparable", {{1.5, 0.5}, {2.0, 1.0}}},
      {"w_boundary", {{1.5, 0.5}, {4.0 / 3.0, 2.0 / 3.0}}},
  };
  // x + y = 2 - epsilon between the floor y = 1/2 and the diagonal y = x/2.
  const double c = 2.0 - epsilon;
  if (epsilon > 0.0 && c - 0.5 >= 1.0) {
    lines.push_back({"w_boundary_minus_epsilon", {{c - 0.5, 0.5}, {2.0 * c / 3.0, c / 3.0}}});
  }
  return lines;
}

}  // namespace entpoly
