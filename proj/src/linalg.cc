#include "graphcov/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace graphcov {

Vector singular_values(const CMatrix& a) {
  if (a.size() == 0) return Vector();
  if (a.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::BDCSVD<Matrix> svd(a.real());
    return svd.singularValues();
  }
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues();
}

double rank_threshold(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max(rows, cols)) *
         std::numeric_limits<double>::epsilon();
}

int numerical_rank(const Vector& sigma, Eigen::Index rows, Eigen::Index cols) {
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  const double tol = rank_threshold(rows, cols) * sigma(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tol) ++rank;
  }
  return rank;
}

RealSystem stack_real(const CMatrix& a, const CVector& b) {
  const bool complex = a.imag().cwiseAbs().maxCoeff() > 0.0 ||
                       (b.size() > 0 && b.imag().cwiseAbs().maxCoeff() > 0.0);
  RealSystem sys;
  if (!complex) {
    sys.a = a.real();
    sys.b = b.real();
    return sys;
  }
  const Eigen::Index m = a.rows();
  sys.a.resize(2 * m, a.cols());
  sys.a.topRows(m) = a.real();
  sys.a.bottomRows(m) = a.imag();
  sys.b.resize(2 * m);
  sys.b.head(m) = b.real();
  sys.b.tail(m) = b.imag();
  return sys;
}

LeastSquaresSolution solve_least_squares(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) {
    throw InvalidInputError("least squares: dimension mismatch");
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(rank_threshold(a.rows(), a.cols()));
  LeastSquaresSolution sol;
  sol.rank = static_cast<int>(qr.rank());
  if (sol.rank < a.cols()) {
    throw RankDeficientError("least squares system is rank deficient", sol.rank,
                             static_cast<int>(a.cols()));
  }
  sol.x = qr.solve(b);
  sol.residual_norm = (b - a * sol.x).norm();
  return sol;
}

double log_det_hpd(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw SingularError("matrix is not positive definite");
  }
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < a.rows(); ++i) acc += std::log(l(i, i).real());
  return 2.0 * acc;
}

bool has_non_finite(const CMatrix& a) {
  return !a.real().allFinite() || !a.imag().allFinite();
}

}  // namespace graphcov
