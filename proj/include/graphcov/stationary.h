#ifndef GRAPHCOV_STATIONARY_H_
#define GRAPHCOV_STATIONARY_H_

#include <cstdint>
#include <vector>

#include "graphcov/common.h"
#include "graphcov/graph.h"

namespace graphcov {

struct PowerSpectrum {
  Vector values;

  // p_n >= -rel_tol * max(p) for every n.
  bool is_nonnegative(double rel_tol = 1e-6) const;
};

// K x N_s matrix of subsampled realizations; column k is y[k] and row r
// holds node node_indices[r].
struct SnapshotMatrix {
  Matrix data;
  std::vector<int> node_indices;

  int n_nodes() const { return static_cast<int>(data.rows()); }
  int n_snapshots() const { return static_cast<int>(data.cols()); }
};

struct CovarianceMatrix {
  enum class Kind { kTrue, kSample };

  CMatrix matrix;
  Kind kind = Kind::kTrue;
  int n_snapshots = 0;

  int size() const { return static_cast<int>(matrix.rows()); }
};

// R_x = H H^H for unit-variance white input.
CovarianceMatrix true_covariance(const ShiftOperator& shift,
                                 const GraphFilter& filter);

// U diag(p) U^H.
CovarianceMatrix covariance_from_spectrum(const SpectralBasis& basis,
                                          const Vector& p);

// N x n_snapshots matrix whose columns are H n_k, n_k i.i.d. standard normal.
Matrix generate_signals(const ShiftOperator& shift, const GraphFilter& filter,
                        int n_snapshots, uint64_t seed);

// Standard normal N x n_snapshots matrix, drawn column by column.
Matrix white_noise(int n_nodes, int n_snapshots, uint64_t seed);

// Keeps the rows of `signals` listed in `nodes` (in that order).
SnapshotMatrix select_nodes(const Matrix& signals, const std::vector<int>& nodes);

// Subtracts the per-node sample mean.
void demean(SnapshotMatrix& snapshots);

CovarianceMatrix sample_covariance(const SnapshotMatrix& snapshots);

// Phi R Phi^T for the row/column selection `nodes`.
CovarianceMatrix restrict_covariance(const CovarianceMatrix& r,
                                     const std::vector<int>& nodes);

// p_n = u_n^H R u_n on a full N x N covariance.
PowerSpectrum power_spectrum_from_cov(const SpectralBasis& basis,
                                      const CovarianceMatrix& r);

// Fraction of the energy of U^H R U that lies on its main diagonal; 1.0 for
// the zero matrix.
double stationarity_score(const SpectralBasis& basis, const CovarianceMatrix& r);

}  // namespace graphcov

#endif  // GRAPHCOV_STATIONARY_H_
