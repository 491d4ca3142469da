#include "graphcov/stationary.h"

#include <algorithm>

#include "graphcov/rng.h"

namespace graphcov {

bool PowerSpectrum::is_nonnegative(double rel_tol) const {
  if (values.size() == 0) return true;
  const double tol = rel_tol * std::max(0.0, values.maxCoeff());
  return values.minCoeff() >= -tol;
}

CovarianceMatrix true_covariance(const ShiftOperator& shift,
                                 const GraphFilter& filter) {
  const int n = shift.size();
  const Matrix h = apply_filter(shift, filter, Matrix(Matrix::Identity(n, n)));
  CovarianceMatrix r;
  r.matrix = (h * h.transpose()).cast<Complex>();
  r.kind = CovarianceMatrix::Kind::kTrue;
  return r;
}

CovarianceMatrix covariance_from_spectrum(const SpectralBasis& basis,
                                          const Vector& p) {
  if (p.size() != basis.size()) {
    throw InvalidInputError("covariance_from_spectrum: dimension mismatch");
  }
  const CMatrix& u = basis.eigvecs;
  CovarianceMatrix r;
  r.matrix = u * p.cast<Complex>().asDiagonal() * u.adjoint();
  // Hermitian up to rounding; make it exact.
  r.matrix = 0.5 * (r.matrix + r.matrix.adjoint()).eval();
  return r;
}

Matrix white_noise(int n_nodes, int n_snapshots, uint64_t seed) {
  Rng rng(seed);
  Matrix noise(n_nodes, n_snapshots);
  for (int k = 0; k < n_snapshots; ++k) {
    for (int i = 0; i < n_nodes; ++i) noise(i, k) = rng.normal();
  }
  return noise;
}

Matrix generate_signals(const ShiftOperator& shift, const GraphFilter& filter,
                        int n_snapshots, uint64_t seed) {
  if (n_snapshots < 1) {
    throw InvalidInputError("generate_signals: need at least one snapshot");
  }
  return apply_filter(shift, filter, white_noise(shift.size(), n_snapshots, seed));
}

SnapshotMatrix select_nodes(const Matrix& signals, const std::vector<int>& nodes) {
  SnapshotMatrix out;
  out.data.resize(static_cast<Eigen::Index>(nodes.size()), signals.cols());
  for (size_t r = 0; r < nodes.size(); ++r) {
    if (nodes[r] < 0 || nodes[r] >= signals.rows()) {
      throw InvalidInputError("select_nodes: node index out of range");
    }
    out.data.row(static_cast<Eigen::Index>(r)) = signals.row(nodes[r]);
  }
  out.node_indices = nodes;
  return out;
}

void demean(SnapshotMatrix& snapshots) {
  if (snapshots.n_snapshots() == 0) return;
  const Vector mean = snapshots.data.rowwise().mean();
  snapshots.data.colwise() -= mean;
}

CovarianceMatrix sample_covariance(const SnapshotMatrix& snapshots) {
  const int ns = snapshots.n_snapshots();
  if (ns < 1) throw InvalidInputError("sample_covariance: no snapshots");
  const Matrix& y = snapshots.data;
  CovarianceMatrix r;
  Matrix real = (y * y.transpose()) / static_cast<double>(ns);
  real = 0.5 * (real + real.transpose()).eval();
  r.matrix = real.cast<Complex>();
  r.kind = CovarianceMatrix::Kind::kSample;
  r.n_snapshots = ns;
  return r;
}

CovarianceMatrix restrict_covariance(const CovarianceMatrix& r,
                                     const std::vector<int>& nodes) {
  const Eigen::Index k = static_cast<Eigen::Index>(nodes.size());
  CovarianceMatrix out;
  out.kind = r.kind;
  out.n_snapshots = r.n_snapshots;
  out.matrix.resize(k, k);
  for (Eigen::Index b = 0; b < k; ++b) {
    for (Eigen::Index a = 0; a < k; ++a) {
      if (nodes[a] < 0 || nodes[a] >= r.size()) {
        throw InvalidInputError("restrict_covariance: node index out of range");
      }
      out.matrix(a, b) = r.matrix(nodes[a], nodes[b]);
    }
  }
  return out;
}

PowerSpectrum power_spectrum_from_cov(const SpectralBasis& basis,
                                      const CovarianceMatrix& r) {
  if (r.size() != basis.size()) {
    throw InvalidInputError("power_spectrum_from_cov: dimension mismatch");
  }
  const CMatrix& u = basis.eigvecs;
  PowerSpectrum p;
  p.values = (u.adjoint() * r.matrix).cwiseProduct(u.transpose()).rowwise().sum().real();
  return p;
}

double stationarity_score(const SpectralBasis& basis, const CovarianceMatrix& r) {
  if (r.size() != basis.size()) {
    throw InvalidInputError("stationarity_score: dimension mismatch");
  }
  const CMatrix spectral = basis.eigvecs.adjoint() * r.matrix * basis.eigvecs;
  const double total = spectral.squaredNorm();
  if (total == 0.0) return 1.0;
  return spectral.diagonal().squaredNorm() / total;
}

}  // namespace graphcov
