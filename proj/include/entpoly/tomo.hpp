#pragma once

// Density-matrix reconstruction from count records.

#include <span>
#include <vector>

#include "entpoly/linalg.hpp"
#include "entpoly/measure.hpp"
#include "entpoly/spectrum.hpp"

namespace entpoly {

struct ReconstructionResult {
  DensityMatrix rho;
  double log_likelihood = 0.0;  // sum_k n_k log p_k(rho)
  int iterations = 0;
  bool converged = false;
  std::vector<double> likelihood_trace;  // one entry per accepted iterate
};

struct MleOptions {
  int max_iterations = 10000;
  double gradient_tol = 1e-8;   // on the per-count gradient norm
  double relative_tol = 1e-12;  // on the log-likelihood change
  int history = 8;              // L-BFGS memory
};

// Maximum-likelihood estimate over rho = T^dagger T / Tr(T^dagger T) with T
// lower triangular. All records must share one scope of log2(dim) qubits.
ReconstructionResult mle_reconstruct(std::span<const CountRecord> records, Eigen::Index dim,
                                     const MleOptions& options = {});

// Least-squares solution of the Born-rule system over observed frequencies.
// Hermitian with unit trace; not necessarily positive semidefinite.
CMatrix linear_inversion(std::span<const CountRecord> records, Eigen::Index dim);

// Groups single-qubit records by qubit, reconstructs each marginal by MLE and
// returns the maximal eigenvalues in qubit order.
LocalSpectrum local_spectrum_from_counts(std::span<const CountRecord> records);

// Same, also returning each reconstructed marginal.
struct LocalReconstruction {
  LocalSpectrum spectrum;
  std::vector<ReconstructionResult> marginals;
};
LocalReconstruction reconstruct_local(std::span<const CountRecord> records);

}  // namespace entpoly
