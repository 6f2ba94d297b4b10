#include "entpoly/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <string>

#include "entpoly/error.hpp"

namespace entpoly {
namespace {

// Flattened outcome data: one product vector and count per outcome.
struct OutcomeData {
  Eigen::Index dim = 0;
  int num_qubits = 0;
  std::vector<CVector> vectors;
  std::vector<double> counts;
  std::vector<std::size_t> setting_of;  // record index per outcome
  std::vector<double> setting_totals;
  double total = 0.0;
};

OutcomeData flatten(std::span<const CountRecord> records, Eigen::Index dim) {
  if (records.empty()) throw NotInformationallyComplete("no count records");
  const auto& scope = records.front().setting.scope;
  if ((Eigen::Index{1} << scope.size()) != dim) {
    throw InvalidArgument("record scope does not match dimension " + std::to_string(dim));
  }
  OutcomeData data;
  data.dim = dim;
  data.num_qubits = static_cast<int>(scope.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    const CountRecord& rec = records[r];
    if (rec.setting.scope != scope) throw InvalidArgument("records mix different measurement scopes");
    if (rec.counts.size() != rec.setting.num_outcomes()) {
      throw InvalidArgument("record outcome count does not match its setting");
    }
    double setting_total = 0.0;
    for (std::size_t k = 0; k < rec.counts.size(); ++k) {
      data.vectors.push_back(rec.setting.outcome_vector(k));
      data.counts.push_back(static_cast<double>(rec.counts[k]));
      data.setting_of.push_back(r);
      setting_total += static_cast<double>(rec.counts[k]);
    }
    data.setting_totals.push_back(setting_total);
    data.total += setting_total;
  }
  if (!(data.total > 0.0)) throw InvalidArgument("records contain no counts");
  return data;
}

// Row of the Born-rule design in the real basis {E_ii, E_ij + E_ji, iE_ij - iE_ji}.
Eigen::RowVectorXd design_row(const CVector& psi) {
  const Eigen::Index d = psi.size();
  Eigen::RowVectorXd row(d * d);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < d; ++i) row[col++] = std::norm(psi[i]);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const cplx c = std::conj(psi[i]) * psi[j];
      row[col++] = 2.0 * c.real();
      row[col++] = -2.0 * c.imag();
    }
  }
  return row;
}

CMatrix from_coordinates(const Eigen::VectorXd& x, Eigen::Index d) {
  CMatrix rho = CMatrix::Zero(d, d);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < d; ++i) rho(i, i) = x[col++];
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double a = x[col++];
      const double b = x[col++];
      rho(i, j) = cplx(a, b);
      rho(j, i) = cplx(a, -b);
    }
  }
  return rho;
}

CMatrix solve_linear(const OutcomeData& data) {
  const Eigen::Index d = data.dim;
  const Eigen::Index n_par = d * d;
  std::vector<Eigen::Index> rows_used;
  for (std::size_t k = 0; k < data.vectors.size(); ++k) {
    if (data.setting_totals[data.setting_of[k]] > 0.0) rows_used.push_back(static_cast<Eigen::Index>(k));
  }
  const auto m = static_cast<Eigen::Index>(rows_used.size());
  Eigen::MatrixXd design(m, n_par);
  Eigen::VectorXd freq(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto k = static_cast<std::size_t>(rows_used[static_cast<std::size_t>(r)]);
    design.row(r) = design_row(data.vectors[k]);
    freq[r] = data.counts[k] / data.setting_totals[data.setting_of[k]];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> full_qr(design);
  full_qr.setThreshold(1e-10);
  if (full_qr.rank() < n_par) {
    throw NotInformationallyComplete("measurement design has rank " + std::to_string(full_qr.rank()) +
                                     " < " + std::to_string(n_par));
  }

  // Eliminate the last diagonal entry through Tr(rho) = 1.
  const Eigen::Index last = d - 1;
  Eigen::MatrixXd reduced(m, n_par - 1);
  Eigen::VectorXd rhs = freq - design.col(last);
  for (Eigen::Index c = 0, out = 0; c < n_par; ++c) {
    if (c == last) continue;
    reduced.col(out) = design.col(c);
    if (c < d) reduced.col(out) -= design.col(last);
    ++out;
  }
  const Eigen::VectorXd sol = reduced.colPivHouseholderQr().solve(rhs);
  Eigen::VectorXd x(n_par);
  double diag_sum = 0.0;
  for (Eigen::Index c = 0, in = 0; c < n_par; ++c) {
    if (c == last) continue;
    x[c] = sol[in++];
    if (c < d) diag_sum += x[c];
  }
  x[last] = 1.0 - diag_sum;
  return from_coordinates(x, d);
}

// Lower-triangular T packed as [diag (real) | strictly-lower (re, im) pairs].
Eigen::VectorXd pack(const CMatrix& t) {
  const Eigen::Index d = t.rows();
  Eigen::VectorXd x(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) x[k++] = t(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      x[k++] = t(i, j).real();
      x[k++] = t(i, j).imag();
    }
  }
  return x;
}

CMatrix unpack(const Eigen::VectorXd& x, Eigen::Index d) {
  CMatrix t = CMatrix::Zero(d, d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) t(i, i) = x[k++];
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      t(i, j) = cplx(x[k], x[k + 1]);
      k += 2;
    }
  }
  return t;
}

// Per-count log-likelihood F(T) = (1/n) [sum_k n_k log q_k - n log t] and its gradient.
class Likelihood {
 public:
  explicit Likelihood(const OutcomeData& data) : data_(data) {}

  // Returns -inf when an outcome with counts gets zero probability.
  double value(const CMatrix& t) const {
    const double tr = t.squaredNorm();
    if (!(tr > 0.0)) return -std::numeric_limits<double>::infinity();
    double f = 0.0;
    for (std::size_t k = 0; k < data_.vectors.size(); ++k) {
      const double n = data_.counts[k];
      if (n == 0.0) continue;
      const double q = (t * data_.vectors[k]).squaredNorm();
      if (!(q > 0.0)) return -std::numeric_limits<double>::infinity();
      f += n * std::log(q);
    }
    return (f - data_.total * std::log(tr)) / data_.total;
  }

  Eigen::VectorXd gradient(const CMatrix& t) const {
    const Eigen::Index d = data_.dim;
    CMatrix a = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < data_.vectors.size(); ++k) {
      const double n = data_.counts[k];
      if (n == 0.0) continue;
      const CVector& v = data_.vectors[k];
      const double q = (t * v).squaredNorm();
      a.noalias() += (n / q) * (v * v.adjoint());
    }
    const double tr = t.squaredNorm();
    const CMatrix g = 2.0 * (t * a - (data_.total / tr) * t) / data_.total;
    return pack(g.triangularView<Eigen::Lower>());
  }

  // Sum_k n_k log p_k with p_k = q_k / t.
  double log_likelihood(const CMatrix& rho) const {
    double f = 0.0;
    for (std::size_t k = 0; k < data_.vectors.size(); ++k) {
      const double n = data_.counts[k];
      if (n == 0.0) continue;
      const CVector& v = data_.vectors[k];
      f += n * std::log(std::max((v.adjoint() * rho * v)(0, 0).real(), 1e-300));
    }
    return f;
  }

 private:
  const OutcomeData& data_;
};

// Clips the spectrum to a positive floor and returns T with rho = T^dagger T.
CMatrix initial_factor(const CMatrix& estimate) {
  const Eigen::Index d = estimate.rows();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (estimate + estimate.adjoint()));
  Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(1e-4);
  ev /= ev.sum();
  const CMatrix rho = eig.eigenvectors() * ev.cast<cplx>().asDiagonal() * eig.eigenvectors().adjoint();
  // Reverse Cholesky: J rho J = L L^dagger gives rho = (J L J)(J L J)^dagger.
  const CMatrix j = CMatrix::Identity(d, d).rowwise().reverse();
  const CMatrix flipped = j * rho * j;
  const Eigen::LLT<CMatrix> llt(0.5 * (flipped + flipped.adjoint()));
  if (llt.info() != Eigen::Success) throw NumericError("initial Cholesky factorization failed");
  const CMatrix l = llt.matrixL();
  CMatrix t = (j * l * j).adjoint();
  return t.triangularView<Eigen::Lower>();
}

}  // namespace

CMatrix linear_inversion(std::span<const CountRecord> records, Eigen::Index dim) {
  return solve_linear(flatten(records, dim));
}

ReconstructionResult mle_reconstruct(std::span<const CountRecord> records, Eigen::Index dim,
                                     const MleOptions& options) {
  const OutcomeData data = flatten(records, dim);
  const Likelihood lik(data);
  const Eigen::Index d = dim;

  Eigen::VectorXd x = pack(initial_factor(solve_linear(data)));
  double f = lik.value(unpack(x, d));
  Eigen::VectorXd g = lik.gradient(unpack(x, d));
  if (!std::isfinite(f)) throw NumericError("initial estimate has zero likelihood");

  std::vector<double> trace{f * data.total};
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;  // (s, y) for the minimized -F
  bool converged = g.norm() < options.gradient_tol;
  int iter = 0;

  while (!converged && iter < options.max_iterations) {
    ++iter;
    // Two-loop recursion on phi = -F with gradient -g.
    Eigen::VectorXd q = -g;
    std::vector<double> alphas(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      const auto& [s, y] = memory[i];
      alphas[i] = s.dot(q) / y.dot(s);
      q -= alphas[i] * y;
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      q *= s.dot(y) / y.dot(y);
    } else {
      q *= 0.1 * x.norm() / std::max(q.norm(), 1e-300);
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, y] = memory[i];
      const double beta = y.dot(q) / y.dot(s);
      q += (alphas[i] - beta) * s;
    }
    Eigen::VectorXd dir = -q;  // ascent direction for F
    double slope = g.dot(dir);
    if (!(slope > 0.0)) {
      memory.clear();
      dir = g * (0.1 * x.norm() / std::max(g.norm(), 1e-300));
      slope = g.dot(dir);
    }

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = f;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * dir;
      f_new = lik.value(unpack(x_new, d));
      if (std::isfinite(f_new) && f_new >= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      // No ascent possible along the gradient at machine precision.
      converged = true;
      break;
    }

    Eigen::VectorXd g_new = lik.gradient(unpack(x_new, d));
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g - g_new;  // gradient change of phi = -F
    if (s.dot(y) > 1e-16 * s.norm() * y.norm()) {
      memory.emplace_back(s, y);
      if (static_cast<int>(memory.size()) > options.history) memory.pop_front();
    }
    const double change = std::abs(f_new - f);
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    trace.push_back(f * data.total);

    // F is scale invariant in T; keep ||T|| near 1 for well-scaled gradients.
    const double norm2 = x.squaredNorm();
    if (norm2 < 0.25 || norm2 > 4.0) {
      x /= std::sqrt(norm2);
      g *= std::sqrt(norm2);
      memory.clear();
    }

    if (g.norm() * std::sqrt(x.squaredNorm()) < options.gradient_tol ||
        change <= options.relative_tol * std::max(1.0, std::abs(f))) {
      converged = true;
    }
  }

  const CMatrix t = unpack(x, d);
  CMatrix rho = t.adjoint() * t;
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  ReconstructionResult result{DensityMatrix(data.num_qubits, rho), lik.log_likelihood(rho), iter, converged,
                              std::move(trace)};
  return result;
}

LocalReconstruction reconstruct_local(std::span<const CountRecord> records) {
  std::map<int, std::vector<CountRecord>> by_qubit;
  for (const CountRecord& rec : records) {
    if (rec.setting.scope.size() != 1) throw InvalidArgument("local reconstruction needs single-qubit records");
    by_qubit[rec.setting.scope.front()].push_back(rec);
  }
  if (by_qubit.empty()) throw InvalidArgument("no single-qubit records");
  const int n = static_cast<int>(by_qubit.size());
  if (by_qubit.begin()->first != 0 || by_qubit.rbegin()->first != n - 1) {
    throw InvalidArgument("single-qubit records must cover qubits 0..N-1");
  }
  std::vector<double> lambdas;
  std::vector<ReconstructionResult> marginals;
  for (auto& [qubit, recs] : by_qubit) {
    // Rebase onto a one-qubit register so the marginal is reconstructed alone.
    for (CountRecord& rec : recs) rec.setting.scope = {0};
    ReconstructionResult res = mle_reconstruct(recs, 2);
    lambdas.push_back(max_eigenvalue(res.rho));
    marginals.push_back(std::move(res));
  }
  return {LocalSpectrum(std::move(lambdas)), std::move(marginals)};
}

LocalSpectrum local_spectrum_from_counts(std::span<const CountRecord> records) {
  return reconstruct_local(records).spectrum;
}

}  // namespace entpoly
