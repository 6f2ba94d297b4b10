#pragma once

// Dense complex linear algebra for few-qubit systems.
//
// Qubit 0 is the leftmost ket symbol, i.e. the most significant bit of the
// computational-basis index. For the photonic circuits this is the order
// (A_p, B_p, A_s) for three qubits and (A_p, B_p, A_s, B_s) for four.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace entpoly {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr int kMaxQubits = 6;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

class DensityMatrix;

class PureState {
 public:
  // Requires length 2^num_qubits and unit norm within 1e-12.
  PureState(int num_qubits, CVector amplitudes);

  // Rescales to unit norm; throws InvalidArgument for a (near) zero vector.
  static PureState normalized(int num_qubits, CVector amplitudes);
  static PureState basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }
  cplx operator[](Eigen::Index i) const { return amplitudes_[i]; }

  DensityMatrix projector() const;

 private:
  int num_qubits_;
  CVector amplitudes_;
};

class DensityMatrix {
 public:
  // Validates Hermiticity (1e-10), unit trace (1e-10) and eigenvalues >= -1e-9.
  DensityMatrix(int num_qubits, CMatrix entries);

  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const CMatrix& entries() const { return entries_; }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

 private:
  struct Trusted {};
  DensityMatrix(int num_qubits, CMatrix entries, Trusted);

  friend DensityMatrix partial_trace(const DensityMatrix&, std::span<const int>);
  friend DensityMatrix reduced_state(const PureState&, std::span<const int>);
  friend class PureState;

  int num_qubits_;
  CMatrix entries_;
};

class LocalUnitary {
 public:
  LocalUnitary(int target_qubit, Mat2 matrix);

  int target_qubit() const { return target_; }
  const Mat2& matrix() const { return matrix_; }

 private:
  int target_;
  Mat2 matrix_;
};

// One invertible 2x2 operator per qubit, O_0 (x) O_1 (x) ... (x) O_{N-1}.
class SlocOperator {
 public:
  explicit SlocOperator(std::vector<Mat2> factors);

  static SlocOperator identity(int num_qubits);

  int num_qubits() const { return static_cast<int>(factors_.size()); }
  const std::vector<Mat2>& factors() const { return factors_; }

 private:
  std::vector<Mat2> factors_;
};

// Reduced state on `keep` (ascending qubit order in the result).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep);

// Same contraction taken directly from the amplitudes.
DensityMatrix reduced_state(const PureState& psi, std::span<const int> keep);

// Larger eigenvalue of a single-qubit state, closed form.
double max_eigenvalue(const DensityMatrix& rho);

// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m);

double purity(const DensityMatrix& rho);

// <target| rho |target>
double fidelity(const DensityMatrix& rho, const PureState& target);

double trace_distance(const CMatrix& a, const CMatrix& b);

// Haar-distributed pure state from normalized complex Gaussians.
PureState haar_random_pure(int num_qubits, std::uint64_t seed);

// v |psi><psi| + (1 - v) I / 2^N
DensityMatrix mix_white_noise(const PureState& psi, double visibility);

// Visibility at which mix_white_noise yields the given purity on N qubits.
double visibility_for_purity(double purity, int num_qubits);

// Applies the product operator and renormalizes.
PureState apply_sloc(const SlocOperator& op, const PureState& psi);

PureState apply_local_unitary(const LocalUnitary& u, const PureState& psi);

// Maximal eigenvalue of every single-qubit marginal, in qubit order.
std::vector<double> local_max_eigenvalues(const DensityMatrix& rho);
std::vector<double> local_max_eigenvalues(const PureState& psi);

// Rank of each single-qubit marginal, counting eigenvalues above `tol`.
std::vector<int> marginal_ranks(const PureState& psi, double tol = 1e-8);

// Rank of the reduced state on `keep`.
int marginal_rank(const PureState& psi, std::span<const int> keep, double tol = 1e-8);

// Kronecker product of a list of 2x2 factors in qubit order.
CMatrix kron_all(std::span<const Mat2> factors);

}  // namespace entpoly
