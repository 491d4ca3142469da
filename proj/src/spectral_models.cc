#include "graphcov/spectral_models.h"

#include <algorithm>
#include <limits>

#include "graphcov/linalg.h"

namespace graphcov {

Subsampler::Subsampler(int n_nodes, std::vector<int> selected)
    : n_nodes_(n_nodes), selected_(std::move(selected)) {
  std::sort(selected_.begin(), selected_.end());
  if (selected_.empty() || static_cast<int>(selected_.size()) > n_nodes_) {
    throw InvalidInputError("subsampler: need 1 <= K <= N");
  }
  if (std::adjacent_find(selected_.begin(), selected_.end()) != selected_.end()) {
    throw InvalidInputError("subsampler: duplicate node index");
  }
  if (selected_.front() < 0 || selected_.back() >= n_nodes_) {
    throw InvalidInputError("subsampler: node index out of range");
  }
}

Subsampler Subsampler::from_mask(const std::vector<bool>& w) {
  std::vector<int> selected;
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i]) selected.push_back(static_cast<int>(i));
  }
  return Subsampler(static_cast<int>(w.size()), std::move(selected));
}

Subsampler Subsampler::all(int n_nodes) {
  std::vector<int> selected(n_nodes);
  for (int i = 0; i < n_nodes; ++i) selected[i] = i;
  return Subsampler(n_nodes, std::move(selected));
}

std::vector<bool> Subsampler::mask() const {
  std::vector<bool> w(n_nodes_, false);
  for (int i : selected_) w[i] = true;
  return w;
}

std::string to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::kSpectral:
      return "spectral";
    case ParamKind::kMovingAverage:
      return "moving_average";
    case ParamKind::kAutoregressive:
      return "autoregressive";
  }
  return "unknown";
}

double ObservationModel::condition_number() const {
  if (sigma_min <= 0.0) return std::numeric_limits<double>::infinity();
  return sigma_max / sigma_min;
}

void update_rank_info(ObservationModel& model) {
  const Vector sigma = singular_values(model.matrix);
  model.rank = numerical_rank(sigma, model.matrix.rows(), model.matrix.cols());
  model.full_column_rank = model.rank == model.matrix.cols();
  model.sigma_max = sigma.size() ? sigma(0) : 0.0;
  // Wide models have fewer singular values than columns.
  model.sigma_min = sigma.size() == model.matrix.cols() && sigma.size()
                        ? sigma(sigma.size() - 1)
                        : 0.0;
}

CMatrix build_psi_spectral(const SpectralBasis& basis) {
  const int n = basis.size();
  const CMatrix& u = basis.eigvecs;
  CMatrix psi(static_cast<Eigen::Index>(n) * n, n);
  for (int c = 0; c < n; ++c) {
    for (int j = 0; j < n; ++j) {
      const Complex conj_uj = std::conj(u(j, c));
      for (int i = 0; i < n; ++i) psi(i + j * n, c) = u(i, c) * conj_uj;
    }
  }
  // Psi_s^H Psi_s = |U^H U|^2 elementwise = I for a unitary basis, which
  // is full column rank.
  const Matrix gram = (u.adjoint() * u).cwiseAbs2();
  if ((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8) {
    throw RankDeficientError("build_psi_spectral: basis is not unitary",
                             numerical_rank(singular_values(psi), psi.rows(), n), n);
  }
  return psi;
}

CMatrix build_psi_ma(const ShiftOperator& shift, int q) {
  const int n = shift.size();
  if (q < 1 || q > n) {
    throw InvalidInputError("build_psi_ma: need 1 <= Q <= N (powers beyond N-1 "
                            "are linearly dependent)");
  }
  CMatrix psi(static_cast<Eigen::Index>(n) * n, q);
  for (int k = 0; k < q; ++k) {
    const Matrix& power = shift.power(k);
    psi.col(k) = Eigen::Map<const Vector>(power.data(), power.size()).cast<Complex>();
  }
  return psi;
}

Matrix vandermonde(const Vector& eigvals, int q) {
  if (q < 1) throw InvalidInputError("vandermonde: need Q >= 1");
  Matrix v(eigvals.size(), q);
  v.col(0).setOnes();
  for (int j = 1; j < q; ++j) v.col(j) = v.col(j - 1).cwiseProduct(eigvals);
  return v;
}

int default_ma_order(int filter_length, int n_nodes) {
  return std::min(2 * filter_length - 1, n_nodes);
}

Matrix ma_structure_matrix(int filter_length) {
  const int l = filter_length;
  Matrix m = Matrix::Zero(2 * l - 1, static_cast<Eigen::Index>(l) * l);
  for (int diag = 0; diag <= 2 * l - 2; ++diag) {
    for (int j = 0; j < l; ++j) {
      const int i = diag - j;
      if (i >= 0 && i < l) m(diag, i + j * l) = 1.0;
    }
  }
  return m;
}

MAParams ma_b_from_h(const GraphFilter& filter) {
  const Vector& h = filter.coeffs;
  const Matrix hh = h * h.transpose();
  MAParams params;
  params.b = ma_structure_matrix(filter.length()) *
             Eigen::Map<const Vector>(hh.data(), hh.size());
  return params;
}

ObservationModel compress_model(const CMatrix& psi, const Subsampler& sampler,
                                ParamKind kind) {
  const int n = sampler.n_nodes();
  if (psi.rows() != static_cast<Eigen::Index>(n) * n) {
    throw InvalidInputError("compress_model: model rows do not match N^2");
  }
  const std::vector<int>& sel = sampler.selected();
  const int k = sampler.size();
  ObservationModel model;
  model.kind = kind;
  model.block_size = k;
  model.matrix.resize(static_cast<Eigen::Index>(k) * k, psi.cols());
  model.row_index.reserve(static_cast<size_t>(k) * k);
  for (int b = 0; b < k; ++b) {
    for (int a = 0; a < k; ++a) {
      model.matrix.row(a + b * k) = psi.row(sel[a] + static_cast<Eigen::Index>(sel[b]) * n);
      model.row_index.emplace_back(sel[a], sel[b]);
    }
  }
  update_rank_info(model);
  return model;
}

CVector vectorize_compressed_cov(const CovarianceMatrix& r) {
  return Eigen::Map<const CVector>(r.matrix.data(), r.matrix.size());
}

CMatrix unvectorize(const CVector& r, int k) {
  if (r.size() != static_cast<Eigen::Index>(k) * k) {
    throw InvalidInputError("unvectorize: length is not K^2");
  }
  return Eigen::Map<const CMatrix>(r.data(), k, k);
}

}  // namespace graphcov
