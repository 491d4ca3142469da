#ifndef GRAPHCOV_SPECTRAL_MODELS_H_
#define GRAPHCOV_SPECTRAL_MODELS_H_

#include <string>
#include <utility>
#include <vector>

#include "graphcov/common.h"
#include "graphcov/graph.h"
#include "graphcov/stationary.h"

namespace graphcov {

// Node selection Phi(w) = diag_r[w]: keeps the sorted node set `selected`
// out of n nodes.
class Subsampler {
 public:
  Subsampler() = default;
  // Sorts and validates: 1 <= K <= n, indices distinct and in range.
  Subsampler(int n_nodes, std::vector<int> selected);

  static Subsampler from_mask(const std::vector<bool>& w);
  static Subsampler all(int n_nodes);

  int n_nodes() const { return n_nodes_; }
  int size() const { return static_cast<int>(selected_.size()); }
  const std::vector<int>& selected() const { return selected_; }
  std::vector<bool> mask() const;

 private:
  int n_nodes_ = 0;
  std::vector<int> selected_;
};

enum class ParamKind { kSpectral, kMovingAverage, kAutoregressive };

std::string to_string(ParamKind kind);

// Linear model r_y = G theta. Rows follow `row_index`: for spectral and MA
// models row a + b*K holds the covariance entry (selected[a], selected[b]),
// i.e. the column-major vec of R_y.
struct ObservationModel {
  CMatrix matrix;
  ParamKind kind = ParamKind::kSpectral;
  std::vector<std::pair<int, int>> row_index;
  // Side length K of the square covariance the rows vectorize; 0 when the
  // rows do not form one square block (autoregressive models).
  int block_size = 0;

  int rank = 0;
  bool full_column_rank = false;
  double sigma_max = 0.0;
  double sigma_min = 0.0;

  int n_params() const { return static_cast<int>(matrix.cols()); }
  double condition_number() const;
};

// Fills the rank fields from the singular values of `model.matrix`.
void update_rank_info(ObservationModel& model);

struct MAParams {
  Vector b;
};

// Psi_s = conj(U) (Khatri-Rao) U, N^2 x N. Column n is vec(u_n u_n^H).
CMatrix build_psi_spectral(const SpectralBasis& basis);

// Psi_MA = [vec(S^0), ..., vec(S^{Q-1})], N^2 x Q. Requires 1 <= Q <= N.
CMatrix build_psi_ma(const ShiftOperator& shift, int q);

// N x Q matrix with entries lambda_i^(j-1).
Matrix vandermonde(const Vector& eigvals, int q);

// Q = min(2L - 1, N).
int default_ma_order(int filter_length, int n_nodes);

// (2L-1) x L^2 matrix whose row l is vec(Theta_l), Theta_l having ones on
// its l-th anti-diagonal.
Matrix ma_structure_matrix(int filter_length);

// b(h) = M vec(h h^H): coefficients of the squared filter polynomial.
MAParams ma_b_from_h(const GraphFilter& filter);

// (Phi x Phi) psi by row selection.
ObservationModel compress_model(const CMatrix& psi, const Subsampler& sampler,
                                ParamKind kind);

// Column-major vec.
CVector vectorize_compressed_cov(const CovarianceMatrix& r);
CMatrix unvectorize(const CVector& r, int k);

}  // namespace graphcov

#endif  // GRAPHCOV_SPECTRAL_MODELS_H_
