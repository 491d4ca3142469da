#include "graphcov/graph.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <set>
#include <utility>

namespace graphcov {

Graph::Graph(int n_nodes, std::vector<Edge> edges)
    : n_nodes_(n_nodes), edges_(std::move(edges)) {
  if (n_nodes_ < 0) throw InvalidInputError("graph: negative node count");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    if (e.i < 0 || e.j < 0 || e.i >= n_nodes_ || e.j >= n_nodes_) {
      throw InvalidInputError("graph: edge (" + std::to_string(e.i) + ", " +
                              std::to_string(e.j) + ") out of range");
    }
    if (e.i == e.j) {
      throw InvalidInputError("graph: self-loop at node " +
                              std::to_string(e.i));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw InvalidInputError("graph: edge weights must be positive");
    }
    const auto key = std::minmax(e.i, e.j);
    if (!seen.insert(key).second) {
      throw InvalidInputError("graph: duplicate edge (" +
                              std::to_string(key.first) + ", " +
                              std::to_string(key.second) + ")");
    }
  }
}

std::vector<int> Graph::degrees() const {
  std::vector<int> degree(n_nodes_, 0);
  for (const Edge& e : edges_) {
    ++degree[e.i];
    ++degree[e.j];
  }
  return degree;
}

std::string to_string(ShiftKind kind) {
  switch (kind) {
    case ShiftKind::kLaplacian:
      return "laplacian";
    case ShiftKind::kAdjacency:
      return "adjacency";
    case ShiftKind::kCustom:
      return "custom";
    case ShiftKind::kCirculantDft:
      return "circulant-dft";
  }
  return "unknown";
}

ShiftKind shift_kind_from_string(const std::string& name) {
  if (name == "laplacian") return ShiftKind::kLaplacian;
  if (name == "adjacency") return ShiftKind::kAdjacency;
  if (name == "custom") return ShiftKind::kCustom;
  if (name == "circulant-dft") return ShiftKind::kCirculantDft;
  throw InvalidInputError("unknown shift kind '" + name + "'");
}

bool SpectralBasis::is_real() const {
  return eigvecs.imag().cwiseAbs().maxCoeff() == 0.0;
}

struct ShiftOperator::Cache {
  std::once_flag basis_once;
  SpectralBasis basis;

  std::once_flag sparse_once;
  Eigen::SparseMatrix<double> sparse;

  std::mutex powers_mutex;
  std::deque<Matrix> powers;
};

ShiftOperator::ShiftOperator(Matrix matrix, ShiftKind kind)
    : matrix_(std::move(matrix)), kind_(kind), cache_(std::make_shared<Cache>()) {
  if (matrix_.rows() != matrix_.cols()) {
    throw InvalidInputError("shift operator must be square");
  }
  if (!matrix_.allFinite()) {
    throw InvalidInputError("shift operator has non-finite entries");
  }
  if (matrix_.size() > 0) {
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    const double asym = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
      throw InvalidInputError("shift operator must be symmetric");
    }
  }
  if (kind_ == ShiftKind::kCirculantDft && !is_circulant(matrix_)) {
    throw InvalidInputError("circulant-dft shift requires a circulant matrix");
  }
}

const Eigen::SparseMatrix<double>& ShiftOperator::sparse() const {
  std::call_once(cache_->sparse_once,
                 [this] { cache_->sparse = matrix_.sparseView(0.0, 0.0); });
  return cache_->sparse;
}

const SpectralBasis& ShiftOperator::basis() const {
  std::call_once(cache_->basis_once, [this] {
    cache_->basis = kind_ == ShiftKind::kCirculantDft
                        ? circulant_dft_basis(*this)
                        : eigendecompose(*this);
  });
  return cache_->basis;
}

const Matrix& ShiftOperator::power(int k) const {
  if (k < 0) throw InvalidInputError("negative matrix power");
  std::lock_guard<std::mutex> lock(cache_->powers_mutex);
  auto& powers = cache_->powers;
  if (powers.empty()) powers.push_back(Matrix::Identity(size(), size()));
  while (static_cast<int>(powers.size()) <= k) {
    powers.push_back(matrix_ * powers.back());
  }
  return powers[k];
}

GraphFilter::GraphFilter(Vector h) : coeffs(std::move(h)) {
  if (coeffs.size() < 1) throw InvalidInputError("filter needs >= 1 coefficient");
}

GraphFilter::GraphFilter(std::initializer_list<double> h)
    : GraphFilter(Vector(Eigen::Map<const Vector>(h.begin(), h.size()))) {}

ShiftOperator build_shift(const Graph& graph, ShiftKind kind) {
  const int n = graph.n_nodes();
  if (n == 0) throw InvalidInputError("build_shift: empty graph");
  Matrix w = Matrix::Zero(n, n);
  for (const Edge& e : graph.edges()) {
    w(e.i, e.j) = e.weight;
    w(e.j, e.i) = e.weight;
  }
  switch (kind) {
    case ShiftKind::kAdjacency:
      return ShiftOperator(std::move(w), kind);
    case ShiftKind::kLaplacian: {
      Matrix lap = -w;
      lap.diagonal() = w.rowwise().sum();
      return ShiftOperator(std::move(lap), kind);
    }
    default:
      throw InvalidInputError("build_shift: kind must be laplacian or adjacency");
  }
}

bool is_circulant(const Matrix& matrix) {
  const Eigen::Index n = matrix.rows();
  if (n != matrix.cols()) return false;
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (matrix(i, j) != matrix(0, (j - i + n) % n)) return false;
    }
  }
  return true;
}

ShiftOperator as_circulant(const ShiftOperator& shift) {
  return ShiftOperator(shift.matrix(), ShiftKind::kCirculantDft);
}

double eigen_gap_tolerance(const Matrix& matrix) {
  const double norm = matrix.size() ? matrix.cwiseAbs().maxCoeff() : 0.0;
  return 1e-8 * std::max(1.0, norm);
}

namespace {

bool all_gaps_exceed(Vector sorted, double tol) {
  std::sort(sorted.begin(), sorted.end());
  for (Eigen::Index i = 1; i < sorted.size(); ++i) {
    if (sorted(i) - sorted(i - 1) <= tol) return false;
  }
  return true;
}

}  // namespace

SpectralBasis eigendecompose(const ShiftOperator& shift) {
  const Matrix& s = shift.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() != Eigen::Success) {
    throw SingularError("eigendecomposition failed to converge");
  }
  Matrix vecs = solver.eigenvectors();
  // Largest-magnitude entry positive; near-ties resolve to the lowest index.
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    const double peak = vecs.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
      if (std::abs(vecs(r, c)) >= peak * (1.0 - 1e-9)) {
        if (vecs(r, c) < 0.0) vecs.col(c) *= -1.0;
        break;
      }
    }
  }
  SpectralBasis basis;
  basis.eigvecs = vecs.cast<Complex>();
  basis.eigvals = solver.eigenvalues();
  basis.distinct = all_gaps_exceed(basis.eigvals, eigen_gap_tolerance(s));
  return basis;
}

SpectralBasis circulant_dft_basis(const ShiftOperator& shift) {
  const Matrix& s = shift.matrix();
  if (!is_circulant(s)) {
    throw InvalidInputError("circulant_dft_basis: matrix is not circulant");
  }
  const int n = shift.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  auto phase = [n](long long idx) {
    const double angle = -2.0 * std::numbers::pi *
                         static_cast<double>(idx % n) / static_cast<double>(n);
    return Complex(std::cos(angle), std::sin(angle));
  };
  SpectralBasis basis;
  basis.eigvecs.resize(n, n);
  basis.eigvals.resize(n);
  for (int col = 0; col < n; ++col) {
    Complex lambda = 0.0;
    for (int k = 0; k < n; ++k) {
      const Complex w = phase(static_cast<long long>(col) * k);
      basis.eigvecs(k, col) = scale * w;
      lambda += s(0, k) * w;
    }
    // Symmetric circulant matrices have real DFT spectra.
    basis.eigvals(col) = lambda.real();
  }
  basis.distinct = all_gaps_exceed(basis.eigvals, eigen_gap_tolerance(s));
  return basis;
}

CVector gft(const SpectralBasis& basis, const CVector& x) {
  if (x.size() != basis.size()) throw InvalidInputError("gft: dimension mismatch");
  return basis.eigvecs.adjoint() * x;
}

CVector inverse_gft(const SpectralBasis& basis, const CVector& x_f) {
  if (x_f.size() != basis.size()) {
    throw InvalidInputError("inverse_gft: dimension mismatch");
  }
  return basis.eigvecs * x_f;
}

Matrix apply_filter(const ShiftOperator& shift, const GraphFilter& filter,
                    const Matrix& x) {
  const int taps = filter.length();
  if (taps < 1) throw InvalidInputError("apply_filter: empty filter");
  if (x.rows() != shift.size()) {
    throw InvalidInputError("apply_filter: dimension mismatch");
  }
  if (taps > shift.size()) {
    throw InvalidInputError("apply_filter: filter longer than graph size");
  }
  const auto& s = shift.sparse();
  Matrix y = filter.coeffs(taps - 1) * x;
  for (int l = taps - 2; l >= 0; --l) {
    Matrix shifted = s * y;
    y = shifted + filter.coeffs(l) * x;
  }
  return y;
}

Vector apply_filter(const ShiftOperator& shift, const GraphFilter& filter,
                    const Vector& x) {
  return apply_filter(shift, filter, Matrix(x)).col(0);
}

Vector frequency_response(const Vector& eigvals, const GraphFilter& filter) {
  Vector response = Vector::Zero(eigvals.size());
  for (int l = filter.length() - 1; l >= 0; --l) {
    response = response.cwiseProduct(eigvals).array() + filter.coeffs(l);
  }
  return response;
}

}  // namespace graphcov
