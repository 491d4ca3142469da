#ifndef GRAPHCOV_AR_MODEL_H_
#define GRAPHCOV_AR_MODEL_H_

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "graphcov/common.h"
#include "graphcov/graph.h"
#include "graphcov/spectral_models.h"
#include "graphcov/stationary.h"

namespace graphcov {

// Core nodes plus their p-hop neighborhoods for p = 1..P. levels[0] is the
// core; levels[p] is the union over core nodes of the p-hop neighborhoods.
// Overlap between levels is kept as-is.
struct ARSamplingScheme {
  std::vector<int> core;
  int order = 0;
  std::vector<std::vector<int>> levels;

  std::vector<int> level_sizes() const;
  // Sum of level sizes, counting repeated nodes once per level.
  int total_observations() const;
  // Sorted union of all levels.
  std::vector<int> observed_nodes() const;
};

struct ARParams {
  Vector a;
};

// Covariance blocks R_{p,q} = Phi_p R Phi_q^T keyed by (p, q).
using CovarianceBlocks = std::map<std::pair<int, int>, CMatrix>;

// Linear AR system: target r_y = [vec(R_{0,0}); ...; vec(R_{0,P})] and
// G = [G_0; ...; G_P].
struct ARSystem {
  ObservationModel model;
  CVector target;
};

struct ARFit {
  ARParams params;
  double residual_norm = 0.0;
};

// {l : [S^p]_{node,l} != 0}, from the Boolean power of the sparsity pattern.
std::vector<int> neighborhood(const ShiftOperator& shift, int node, int p);

ARSamplingScheme build_ar_scheme(const ShiftOperator& shift,
                                 std::vector<int> core, int order);

// Node with the most neighbors; ties go to the lowest index.
int max_degree_node(const ShiftOperator& shift);

// Extracts every R_{p,q} needed by build_ar_model from a covariance whose
// rows/columns correspond to graph nodes `nodes` (all of them when empty).
CovarianceBlocks ar_covariance_blocks(const ARSamplingScheme& scheme,
                                      const CovarianceMatrix& r,
                                      const std::vector<int>& nodes = {});

ARSystem build_ar_model(const ShiftOperator& shift,
                        const ARSamplingScheme& scheme,
                        const CovarianceBlocks& covariances);

// Least-squares a = G^+ r_y.
ARFit estimate_ar(const ObservationModel& model, const CVector& target);

// Least-squares fit of vec(R_x) on vec(S^k R_x), k = 1..P.
ARFit estimate_ar_uncompressed(const ShiftOperator& shift,
                               const CovarianceMatrix& r_x, int order);

// p_n = 1 / |1 - sum_k a_k lambda_n^k|^2.
PowerSpectrum ar_power_spectrum(const Vector& eigvals, const ARParams& params);

// H^{-1}(a) = I - sum_k a_k S^k, the inverse of the AR filter.
Matrix ar_filter_inverse(const ShiftOperator& shift, const ARParams& params);

CovarianceMatrix ar_true_covariance(const ShiftOperator& shift,
                                    const ARParams& params);

// Columns solve (I - sum_k a_k S^k) x = n with n = white_noise(N, Ns, seed).
// The noise realization is written to `noise` when non-null.
Matrix generate_ar_signals(const ShiftOperator& shift, const ARParams& params,
                           int n_snapshots, uint64_t seed,
                           Matrix* noise = nullptr);

}  // namespace graphcov

#endif  // GRAPHCOV_AR_MODEL_H_
