#include "entpoly/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "entpoly/error.hpp"
#include "entpoly/random.hpp"

namespace entpoly {
namespace {

void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw InvalidArgument("qubit count " + std::to_string(num_qubits) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
  }
}

Eigen::Index dim_of(int num_qubits) { return Eigen::Index{1} << num_qubits; }

// Bit mask of qubit q inside a basis index of an n-qubit register.
std::uint64_t qubit_bit(int q, int n) { return std::uint64_t{1} << (n - 1 - q); }

std::vector<int> normalize_keep(std::span<const int> keep, int n) {
  if (keep.empty()) throw InvalidArgument("partial trace: keep set is empty");
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("partial trace: duplicate qubit index");
  }
  if (sorted.front() < 0 || sorted.back() >= n) {
    throw InvalidArgument("partial trace: qubit index out of range");
  }
  return sorted;
}

// Maps a compact index over `qubits` onto the full n-qubit index bits.
std::vector<std::uint64_t> scatter_table(const std::vector<int>& qubits, int n) {
  const std::size_t m = qubits.size();
  std::vector<std::uint64_t> table(std::size_t{1} << m, 0);
  for (std::size_t k = 0; k < table.size(); ++k) {
    std::uint64_t full = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (k & (std::size_t{1} << (m - 1 - j))) full |= qubit_bit(qubits[j], n);
    }
    table[k] = full;
  }
  return table;
}

std::vector<int> complement(const std::vector<int>& keep, int n) {
  std::vector<int> out;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(keep.begin(), keep.end(), q)) out.push_back(q);
  }
  return out;
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

// ---------------------------------------------------------------------------

PureState::PureState(int num_qubits, CVector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(num_qubits_);
  if (amplitudes_.size() != dim_of(num_qubits_)) {
    throw InvalidArgument("state vector length " + std::to_string(amplitudes_.size()) +
                          " does not match 2^" + std::to_string(num_qubits_));
  }
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTol) {
    throw InvalidArgument("state vector is not normalized");
  }
}

PureState PureState::normalized(int num_qubits, CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > kNormTol)) throw InvalidArgument("cannot normalize a zero vector");
  amplitudes /= norm;
  return PureState(num_qubits, std::move(amplitudes));
}

PureState PureState::basis(int num_qubits, std::uint64_t index) {
  check_qubit_count(num_qubits);
  if (index >= static_cast<std::uint64_t>(dim_of(num_qubits))) {
    throw InvalidArgument("basis index out of range");
  }
  CVector v = CVector::Zero(dim_of(num_qubits));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return PureState(num_qubits, std::move(v));
}

DensityMatrix PureState::projector() const {
  return DensityMatrix(num_qubits_, amplitudes_ * amplitudes_.adjoint(), DensityMatrix::Trusted{});
}

DensityMatrix::DensityMatrix(int num_qubits, CMatrix entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
  check_qubit_count(num_qubits_);
  const Eigen::Index d = dim_of(num_qubits_);
  if (entries_.rows() != d || entries_.cols() != d) {
    throw InvalidArgument("density matrix shape does not match qubit count");
  }
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw InvalidArgument("density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace() - cplx(1.0)) > kTraceTol) {
    throw InvalidArgument("density matrix trace is not 1");
  }
  entries_ = hermitize(entries_);
  if (hermitian_eigenvalues(entries_).minCoeff() < -kPsdTol) {
    throw InvalidArgument("density matrix is not positive semidefinite");
  }
}

DensityMatrix::DensityMatrix(int num_qubits, CMatrix entries, Trusted)
    : num_qubits_(num_qubits), entries_(hermitize(entries)) {}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  check_qubit_count(num_qubits);
  const Eigen::Index d = dim_of(num_qubits);
  return DensityMatrix(num_qubits, CMatrix::Identity(d, d) / static_cast<double>(d));
}

LocalUnitary::LocalUnitary(int target_qubit, Mat2 matrix) : target_(target_qubit), matrix_(matrix) {
  if (target_ < 0) throw InvalidArgument("negative target qubit");
  if ((matrix_.adjoint() * matrix_ - Mat2::Identity()).cwiseAbs().maxCoeff() > kNormTol) {
    throw InvalidArgument("local operator is not unitary");
  }
}

SlocOperator::SlocOperator(std::vector<Mat2> factors) : factors_(std::move(factors)) {
  check_qubit_count(static_cast<int>(factors_.size()));
  for (const Mat2& f : factors_) {
    if (!(std::abs(f.determinant()) > 1e-9)) {
      throw InvalidArgument("SLOC factor is not invertible");
    }
  }
}

SlocOperator SlocOperator::identity(int num_qubits) {
  return SlocOperator(std::vector<Mat2>(static_cast<std::size_t>(num_qubits), Mat2::Identity()));
}

// ---------------------------------------------------------------------------

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  const std::vector<int> kept = normalize_keep(keep, n);
  const std::vector<int> traced = complement(kept, n);
  const auto keep_idx = scatter_table(kept, n);
  const auto trace_idx = scatter_table(traced, n);

  const auto dk = static_cast<Eigen::Index>(keep_idx.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  const CMatrix& m = rho.entries();
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      cplx acc = 0.0;
      for (std::uint64_t t : trace_idx) {
        acc += m(static_cast<Eigen::Index>(keep_idx[a] | t), static_cast<Eigen::Index>(keep_idx[b] | t));
      }
      out(a, b) = acc;
    }
  }
  return DensityMatrix(static_cast<int>(kept.size()), std::move(out), DensityMatrix::Trusted{});
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

DensityMatrix reduced_state(const PureState& psi, std::span<const int> keep) {
  const int n = psi.num_qubits();
  const std::vector<int> kept = normalize_keep(keep, n);
  const std::vector<int> traced = complement(kept, n);
  const auto keep_idx = scatter_table(kept, n);
  const auto trace_idx = scatter_table(traced, n);

  // Reshape into a (kept x traced) coefficient matrix M; the marginal is M M^dagger.
  const auto dk = static_cast<Eigen::Index>(keep_idx.size());
  const auto dt = static_cast<Eigen::Index>(trace_idx.size());
  CMatrix coeffs(dk, dt);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index t = 0; t < dt; ++t) {
      coeffs(a, t) = psi[static_cast<Eigen::Index>(keep_idx[a] | trace_idx[t])];
    }
  }
  return DensityMatrix(static_cast<int>(kept.size()), coeffs * coeffs.adjoint(),
                       DensityMatrix::Trusted{});
}

double max_eigenvalue(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw InvalidArgument("max_eigenvalue expects a single-qubit state");
  const double a = rho(0, 0).real();
  const double d = rho(1, 1).real();
  const double half_gap = 0.5 * (a - d);
  return 0.5 * (a + d) + std::sqrt(half_gap * half_gap + std::norm(rho(0, 1)));
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver failed");
  return solver.eigenvalues();
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.entries().squaredNorm();
}

double fidelity(const DensityMatrix& rho, const PureState& target) {
  if (rho.dim() != target.dim()) throw InvalidArgument("fidelity: dimension mismatch");
  const CVector& v = target.amplitudes();
  return (v.adjoint() * rho.entries() * v)(0, 0).real();
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("trace_distance: shape mismatch");
  }
  return 0.5 * hermitian_eigenvalues(hermitize(a - b)).cwiseAbs().sum();
}

PureState haar_random_pure(int num_qubits, std::uint64_t seed) {
  check_qubit_count(num_qubits);
  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(dim_of(num_qubits));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v[i] = cplx(re, im);
  }
  return PureState::normalized(num_qubits, std::move(v));
}

DensityMatrix mix_white_noise(const PureState& psi, double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw InvalidArgument("visibility must lie in [0, 1]");
  }
  const Eigen::Index d = psi.dim();
  CMatrix m = visibility * (psi.amplitudes() * psi.amplitudes().adjoint()) +
              (1.0 - visibility) / static_cast<double>(d) * CMatrix::Identity(d, d);
  return DensityMatrix(psi.num_qubits(), std::move(m));
}

double visibility_for_purity(double purity, int num_qubits) {
  check_qubit_count(num_qubits);
  const double floor = 1.0 / static_cast<double>(Eigen::Index{1} << num_qubits);
  if (!(purity >= floor && purity <= 1.0)) {
    throw InvalidArgument("purity must lie in [1/2^N, 1]");
  }
  // Tr(rho^2) = v^2 + (1 - v^2) / d
  return std::sqrt((purity - floor) / (1.0 - floor));
}

namespace {

// Applies a 2x2 matrix on qubit q in place.
void apply_single(CVector& v, const Mat2& m, int q, int n) {
  const std::uint64_t bit = qubit_bit(q, n);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto ui = static_cast<std::uint64_t>(i);
    if (ui & bit) continue;
    const auto j = static_cast<Eigen::Index>(ui | bit);
    const cplx a0 = v[i];
    const cplx a1 = v[j];
    v[i] = m(0, 0) * a0 + m(0, 1) * a1;
    v[j] = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

}  // namespace

PureState apply_sloc(const SlocOperator& op, const PureState& psi) {
  if (op.num_qubits() != psi.num_qubits()) {
    throw InvalidArgument("SLOC operator and state qubit counts differ");
  }
  CVector v = psi.amplitudes();
  for (int q = 0; q < op.num_qubits(); ++q) apply_single(v, op.factors()[q], q, psi.num_qubits());
  const double norm = v.norm();
  if (!(norm >= kNormTol)) throw DegenerateOperator("SLOC operator annihilated the state");
  return PureState(psi.num_qubits(), v / norm);
}

PureState apply_local_unitary(const LocalUnitary& u, const PureState& psi) {
  if (u.target_qubit() >= psi.num_qubits()) throw InvalidArgument("target qubit out of range");
  CVector v = psi.amplitudes();
  apply_single(v, u.matrix(), u.target_qubit(), psi.num_qubits());
  return PureState::normalized(psi.num_qubits(), std::move(v));
}

std::vector<double> local_max_eigenvalues(const DensityMatrix& rho) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rho.num_qubits()));
  for (int q = 0; q < rho.num_qubits(); ++q) out.push_back(max_eigenvalue(partial_trace(rho, {q})));
  return out;
}

std::vector<double> local_max_eigenvalues(const PureState& psi) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(psi.num_qubits()));
  for (int q = 0; q < psi.num_qubits(); ++q) {
    const int keep[] = {q};
    out.push_back(max_eigenvalue(reduced_state(psi, keep)));
  }
  return out;
}

int marginal_rank(const PureState& psi, std::span<const int> keep, double tol) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(reduced_state(psi, keep).entries());
  return static_cast<int>((ev.array() > tol).count());
}

std::vector<int> marginal_ranks(const PureState& psi, double tol) {
  std::vector<int> ranks;
  for (int q = 0; q < psi.num_qubits(); ++q) {
    const int keep[] = {q};
    ranks.push_back(marginal_rank(psi, keep, tol));
  }
  return ranks;
}

CMatrix kron_all(std::span<const Mat2> factors) {
  CMatrix out = CMatrix::Ones(1, 1);
  for (const Mat2& f : factors) {
    // Each new factor is the least significant qubit so far: out (x) f.
    CMatrix fixed(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        fixed.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
      }
    }
    out = std::move(fixed);
  }
  return out;
}

}  // namespace entpoly
