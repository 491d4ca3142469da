#ifndef GRAPHCOV_GRAPH_H_
#define GRAPHCOV_GRAPH_H_

#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "graphcov/common.h"

namespace graphcov {

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

// Undirected weighted graph on nodes 0..n-1. Each unordered pair is stored
// once; self-loops are rejected.
class Graph {
 public:
  Graph() = default;
  // Throws InvalidInputError on out-of-range indices, self-loops, duplicate
  // pairs or non-positive weights.
  Graph(int n_nodes, std::vector<Edge> edges);

  int n_nodes() const { return n_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Unweighted degree (number of incident edges) of every node.
  std::vector<int> degrees() const;

 private:
  int n_nodes_ = 0;
  std::vector<Edge> edges_;
};

enum class ShiftKind { kLaplacian, kAdjacency, kCustom, kCirculantDft };

std::string to_string(ShiftKind kind);
ShiftKind shift_kind_from_string(const std::string& name);

// Orthonormal eigenbasis of a shift operator. Columns of `eigvecs` are the
// graph Fourier atoms u_n; `eigvals` are the graph frequencies, ascending for
// numerically decomposed operators and in DFT order for circulant ones.
struct SpectralBasis {
  CMatrix eigvecs;
  Vector eigvals;
  bool distinct = false;

  int size() const { return static_cast<int>(eigvals.size()); }
  // True when every eigenvector entry has zero imaginary part.
  bool is_real() const;
};

// Real symmetric graph shift operator with lazily computed (and cached)
// spectral basis and matrix powers. Copies share the cache; the operator
// itself is immutable, so sharing across threads is safe.
class ShiftOperator {
 public:
  // Validates symmetry to 1e-12 relative tolerance.
  explicit ShiftOperator(Matrix matrix, ShiftKind kind = ShiftKind::kCustom);

  const Matrix& matrix() const { return matrix_; }
  ShiftKind kind() const { return kind_; }
  int size() const { return static_cast<int>(matrix_.rows()); }

  const Eigen::SparseMatrix<double>& sparse() const;

  // Eigendecomposition for laplacian/adjacency/custom kinds; the unitary DFT
  // basis for the circulant-dft kind.
  const SpectralBasis& basis() const;

  // S^k, computed by repeated multiplication and cached.
  const Matrix& power(int k) const;

 private:
  struct Cache;

  Matrix matrix_;
  ShiftKind kind_;
  std::shared_ptr<Cache> cache_;
};

// Polynomial graph filter H = sum_l h_l S^l.
struct GraphFilter {
  Vector coeffs;

  GraphFilter() = default;
  explicit GraphFilter(Vector h);
  GraphFilter(std::initializer_list<double> h);

  int length() const { return static_cast<int>(coeffs.size()); }
};

// Laplacian D - W or adjacency W.
ShiftOperator build_shift(const Graph& graph, ShiftKind kind);

// Reinterprets a circulant operator so that its basis is the unitary DFT.
// Throws InvalidInputError if the matrix is not exactly circulant.
ShiftOperator as_circulant(const ShiftOperator& shift);

bool is_circulant(const Matrix& matrix);

// Threshold on the minimum consecutive eigenvalue gap below which the
// spectrum is flagged as repeated.
double eigen_gap_tolerance(const Matrix& matrix);

SpectralBasis eigendecompose(const ShiftOperator& shift);
SpectralBasis circulant_dft_basis(const ShiftOperator& shift);

CVector gft(const SpectralBasis& basis, const CVector& x);
CVector inverse_gft(const SpectralBasis& basis, const CVector& x_f);

// sum_l h_l S^l x by Horner's rule on the sparse operator.
Vector apply_filter(const ShiftOperator& shift, const GraphFilter& filter,
                    const Vector& x);
Matrix apply_filter(const ShiftOperator& shift, const GraphFilter& filter,
                    const Matrix& x);

// V_L h, with V_L the N x L Vandermonde matrix of the eigenvalues.
Vector frequency_response(const Vector& eigvals, const GraphFilter& filter);

}  // namespace graphcov

#endif  // GRAPHCOV_GRAPH_H_
