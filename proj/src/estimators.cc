#include "graphcov/estimators.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphcov/linalg.h"

namespace graphcov {

std::string to_string(EstimatorMethod method) {
  switch (method) {
    case EstimatorMethod::kLs:
      return "ls";
    case EstimatorMethod::kNnls:
      return "nnls";
    case EstimatorMethod::kWls:
      return "wls";
  }
  return "unknown";
}

EstimatorMethod estimator_method_from_string(const std::string& name) {
  if (name == "ls") return EstimatorMethod::kLs;
  if (name == "nnls") return EstimatorMethod::kNnls;
  if (name == "wls") return EstimatorMethod::kWls;
  throw InvalidInputError("unknown estimator '" + name + "'");
}

namespace {

void check_inputs(const ObservationModel& model, const CVector& r, const char* who) {
  if (model.matrix.rows() != r.size()) {
    throw InvalidInputError(std::string(who) + ": target length does not match model rows");
  }
  if (has_non_finite(model.matrix) || has_non_finite(r)) {
    throw InvalidInputError(std::string(who) + ": non-finite input");
  }
  if (!model.full_column_rank) {
    throw RankDeficientError(std::string(who) + ": observation model is rank deficient",
                             model.rank, model.n_params());
  }
}

// Lawson-Hanson NNLS on a real system.
Vector lawson_hanson(const Matrix& a, const Vector& b, int max_iter) {
  const Eigen::Index m = a.cols();
  Vector x = Vector::Zero(m);
  std::vector<char> passive(m, 0);
  const double scale = std::max(1.0, (a.transpose() * b).cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  int iter = 0;

  auto solve_passive = [&](Vector& z) {
    std::vector<int> idx;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (passive[j]) idx.push_back(static_cast<int>(j));
    }
    Matrix ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t c = 0; c < idx.size(); ++c) ap.col(c) = a.col(idx[c]);
    const Vector zp = ap.colPivHouseholderQr().solve(b);
    z.setZero(m);
    for (size_t c = 0; c < idx.size(); ++c) z(idx[c]) = zp(c);
  };

  while (true) {
    const Vector w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!passive[j] && w(j) > best_w) {
        best = j;
        best_w = w(j);
      }
    }
    if (best < 0) break;
    passive[best] = 1;
    Vector z;
    while (true) {
      if (++iter > max_iter) {
        throw ConvergenceError("nnls_estimate: no convergence within " +
                               std::to_string(max_iter) + " iterations");
      }
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[j] && z(j) <= 0.0) feasible = false;
      }
      if (feasible) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[j] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[j] && std::abs(x(j)) <= 1e-15 * scale) {
          passive[j] = 0;
          x(j) = 0.0;
        }
      }
    }
    x = z;
  }
  return x.cwiseMax(0.0);
}

// Inverse of a Hermitian covariance, regularized by delta I when its
// smallest eigenvalue is below delta = 1e-8 trace / K.
CMatrix weight_inverse(const CovarianceMatrix& r, bool regularize) {
  const Eigen::Index k = r.matrix.rows();
  if (k == 0 || r.matrix.cols() != k) {
    throw InvalidInputError("covariance must be square and non-empty");
  }
  if (has_non_finite(r.matrix)) throw InvalidInputError("non-finite covariance");
  const CMatrix herm = 0.5 * (r.matrix + r.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  const Vector& lambda = eig.eigenvalues();
  const double delta = 1e-8 * herm.trace().real() / static_cast<double>(k);
  Vector shifted = lambda;
  if (lambda(0) < delta) {
    if (!regularize || !(delta > 0.0)) {
      throw SingularError("covariance is singular or not positive definite");
    }
    shifted.array() += delta;
  }
  const CMatrix& v = eig.eigenvectors();
  CMatrix inv = v * shifted.cwiseInverse().cast<Complex>().asDiagonal() * v.adjoint();
  return 0.5 * (inv + inv.adjoint());
}

CMatrix column_block(const ObservationModel& model, Eigen::Index i) {
  const int k = model.block_size;
  return Eigen::Map<const CMatrix>(model.matrix.col(i).data(), k, k);
}

void require_block_model(const ObservationModel& model, const char* who) {
  const Eigen::Index k = model.block_size;
  if (k <= 0 || model.matrix.rows() != k * k) {
    throw InvalidInputError(std::string(who) +
                            ": needs a square-block (spectral or MA) model");
  }
}

// Re g_i^H vec(W X W) for every column i.
Vector weighted_projection(const ObservationModel& model, const CMatrix& w,
                           const CMatrix& x) {
  const CMatrix wxw = w * x * w;
  const Eigen::Map<const CVector> v(wxw.data(), wxw.size());
  return (model.matrix.adjoint() * v).real();
}

Matrix weighted_gram(const ObservationModel& model, const CMatrix& w) {
  const Eigen::Index m = model.matrix.cols();
  Matrix out(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    out.col(j) = weighted_projection(model, w, column_block(model, j));
  }
  return 0.5 * (out + out.transpose());
}

}  // namespace

EstimationResult ls_estimate(const ObservationModel& model, const CVector& r_y) {
  check_inputs(model, r_y, "ls_estimate");
  const RealSystem sys = stack_real(model.matrix, r_y);
  const LeastSquaresSolution sol = solve_least_squares(sys.a, sys.b);
  EstimationResult result;
  result.theta = sol.x;
  result.residual_norm = sol.residual_norm;
  result.method = EstimatorMethod::kLs;
  result.condition_number = model.condition_number();
  return result;
}

EstimationResult nnls_estimate(const ObservationModel& model, const CVector& r_y) {
  check_inputs(model, r_y, "nnls_estimate");
  const RealSystem sys = stack_real(model.matrix, r_y);
  const int m = model.n_params();
  EstimationResult result;
  result.theta = lawson_hanson(sys.a, sys.b, std::max(10 * m * m, 10));
  result.residual_norm = (sys.b - sys.a * result.theta).norm();
  result.method = EstimatorMethod::kNnls;
  result.condition_number = model.condition_number();
  return result;
}

EstimationResult wls_estimate(const ObservationModel& model, const CVector& r_hat,
                              const CovarianceMatrix& r_hat_cov, double nu,
                              const WlsOptions& options) {
  check_inputs(model, r_hat, "wls_estimate");
  require_block_model(model, "wls_estimate");
  if (r_hat_cov.size() != model.block_size) {
    throw InvalidInputError("wls_estimate: covariance size does not match the model");
  }
  if (!(nu > 0.0)) throw InvalidInputError("wls_estimate: nu must be > 0");
  const CMatrix w = weight_inverse(r_hat_cov, options.regularize);
  // The factor nu Ns scales both sides and cancels.
  const Matrix lhs = weighted_gram(model, w);
  const Vector rhs =
      weighted_projection(model, w, unvectorize(r_hat, model.block_size));
  Eigen::ColPivHouseholderQR<Matrix> qr(lhs);
  qr.setThreshold(rank_threshold(lhs.rows(), lhs.cols()));
  if (qr.rank() < lhs.cols()) {
    throw RankDeficientError("wls_estimate: weighted normal matrix is rank deficient",
                             static_cast<int>(qr.rank()), static_cast<int>(lhs.cols()));
  }
  EstimationResult result;
  result.theta = qr.solve(rhs);
  result.residual_norm = (r_hat - model.matrix * result.theta.cast<Complex>()).norm();
  result.method = EstimatorMethod::kWls;
  result.condition_number = model.condition_number();
  return result;
}

double wls_stationarity_residual(const ObservationModel& model, const Vector& theta,
                                 const CVector& r_hat,
                                 const CovarianceMatrix& r_hat_cov) {
  require_block_model(model, "wls_stationarity_residual");
  const CMatrix w = weight_inverse(r_hat_cov, true);
  const int k = model.block_size;
  const CVector resid = model.matrix * theta.cast<Complex>() - r_hat;
  const double top = weighted_projection(model, w, unvectorize(resid, k)).cwiseAbs().maxCoeff();
  const double bottom =
      weighted_projection(model, w, unvectorize(r_hat, k)).cwiseAbs().maxCoeff();
  return bottom > 0.0 ? top / bottom : top;
}

FisherInfo fisher_info(const ObservationModel& model, const CovarianceMatrix& r_y,
                       int n_snapshots, double nu) {
  require_block_model(model, "fisher_info");
  if (r_y.size() != model.block_size) {
    throw InvalidInputError("fisher_info: covariance size does not match the model");
  }
  if (n_snapshots < 1) throw InvalidInputError("fisher_info: need N_s >= 1");
  if (!(nu > 0.0)) throw InvalidInputError("fisher_info: nu must be > 0");
  const CMatrix w = weight_inverse(r_y, false);
  FisherInfo info;
  info.nu = nu;
  info.n_snapshots = n_snapshots;
  info.matrix = nu * static_cast<double>(n_snapshots) * weighted_gram(model, w);

  const Eigen::Index m = info.matrix.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(info.matrix);
  const Vector& lambda = eig.eigenvalues();
  const double lmax = lambda.cwiseAbs().maxCoeff();
  const double tol = static_cast<double>(m) * std::numeric_limits<double>::epsilon() * lmax;
  Vector inv = Vector::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (lambda(i) > tol) {
      inv(i) = 1.0 / lambda(i);
    } else {
      info.crb_is_pseudo_inverse = true;
    }
  }
  info.crb = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  return info;
}

double nmse_from_sse(const Vector& true_p, double sse, int count, NmseNorm norm) {
  if (count < 1) throw InvalidInputError("nmse: need at least one estimate");
  const double p_norm = norm == NmseNorm::kSquared ? true_p.squaredNorm() : true_p.norm();
  if (!(p_norm > 0.0)) throw InvalidInputError("nmse: true vector is zero");
  const double ratio = sse / (static_cast<double>(count) * p_norm);
  if (!(ratio > 0.0)) return kNmseFloorDb;
  return std::max(kNmseFloorDb, 10.0 * std::log10(ratio));
}

double nmse(const Vector& true_p, const std::vector<Vector>& estimates, NmseNorm norm) {
  if (estimates.empty()) throw InvalidInputError("nmse: need at least one estimate");
  double sse = 0.0;
  for (const Vector& p_hat : estimates) {
    if (p_hat.size() != true_p.size()) throw InvalidInputError("nmse: length mismatch");
    sse += (true_p - p_hat).squaredNorm();
  }
  return nmse_from_sse(true_p, sse, static_cast<int>(estimates.size()), norm);
}

}  // namespace graphcov
