#include "graphcov/estimators.h"

#include <cmath>
#include <limits>

#include "graphcov/generators.h"
#include "graphcov/sampler_design.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace graphcov {
namespace {

ObservationModel dense_model(const Matrix& g, int block_size = 0) {
  ObservationModel m;
  m.kind = ParamKind::kSpectral;
  m.matrix = g.cast<Complex>();
  m.block_size = block_size;
  for (Eigen::Index r = 0; r < g.rows(); ++r) m.row_index.emplace_back(0, 0);
  update_rank_info(m);
  return m;
}

struct RulerSetup {
  ShiftOperator shift = as_circulant(build_shift(cycle_graph(10), ShiftKind::kAdjacency));
  Subsampler sampler{10, {0, 1, 4, 7, 9}};
  ObservationModel model =
      compress_model(build_psi_spectral(shift.basis()), sampler, ParamKind::kSpectral);
};

Vector ruler_spectrum() {
  Vector p(10);
  p << 2.0, 1.5, 1.2, 0.9, 0.7, 0.5, 0.7, 0.9, 1.2, 1.5;
  return p;
}

TEST(MethodNames, RoundTrip) {
  for (auto m : {EstimatorMethod::kLs, EstimatorMethod::kNnls, EstimatorMethod::kWls}) {
    EXPECT_EQ(estimator_method_from_string(to_string(m)), m);
  }
  EXPECT_THROW(estimator_method_from_string("ml"), InvalidInputError);
}

TEST(LsEstimateTest, IdentityModel) {
  const ObservationModel m = dense_model(Matrix::Identity(3, 3));
  Vector p(3);
  p << 1.0, -2.0, 0.5;
  const EstimationResult r = ls_estimate(m, p.cast<Complex>());
  EXPECT_LT((r.theta - p).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(r.condition_number, 1.0, 1e-12);
  EXPECT_EQ(r.method, EstimatorMethod::kLs);
}

TEST(LsEstimateTest, RulerExactRecovery) {
  const RulerSetup s;
  const Vector p = ruler_spectrum();
  const CovarianceMatrix r = covariance_from_spectrum(s.shift.basis(), p);
  const CVector r_y = vectorize_compressed_cov(restrict_covariance(r, s.sampler.selected()));
  const EstimationResult est = ls_estimate(s.model, r_y);
  EXPECT_LT((est.theta - p).norm(), 1e-8 * p.norm());
  EXPECT_LT(est.residual_norm, 1e-8 * r_y.norm());
}

TEST(LsEstimateTest, Errors) {
  const ObservationModel m = dense_model(Matrix::Identity(2, 2));
  EXPECT_THROW(ls_estimate(m, CVector::Zero(3)), InvalidInputError);
  CVector bad = CVector::Zero(2);
  bad(1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ls_estimate(m, bad), InvalidInputError);
  Matrix deficient(3, 2);
  deficient << 1, 1, 1, 1, 1, 1;
  try {
    ls_estimate(dense_model(deficient), CVector::Ones(3));
    FAIL() << "expected RankDeficientError";
  } catch (const RankDeficientError& e) {
    EXPECT_EQ(e.rank(), 1);
  }
}

TEST(NnlsEstimateTest, SpecExamples) {
  const ObservationModel m = dense_model(Matrix::Identity(2, 2));
  CVector r(2);
  r << 1.0, -0.5;
  const EstimationResult est = nnls_estimate(m, r);
  EXPECT_NEAR(est.theta(0), 1.0, 1e-15);
  EXPECT_EQ(est.theta(1), 0.0);

  const RulerSetup s;
  const Vector p = ruler_spectrum();
  const CVector r_y = vectorize_compressed_cov(
      restrict_covariance(covariance_from_spectrum(s.shift.basis(), p), s.sampler.selected()));
  EXPECT_LT((nnls_estimate(s.model, r_y).theta - ls_estimate(s.model, r_y).theta).norm(), 1e-10);
}

TEST(NnlsEstimateTest, KktAndBeatsClippedLs) {
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    const Matrix g = testing::random_gaussian(12, 5, rng);
    const Vector b = testing::random_gaussian(12, 1, rng).col(0);
    const ObservationModel m = dense_model(g);
    const Vector theta = nnls_estimate(m, b.cast<Complex>()).theta;
    EXPECT_GE(theta.minCoeff(), 0.0);
    const Vector grad = g.transpose() * (g * theta - b);
    for (int i = 0; i < 5; ++i) {
      if (theta(i) > 0.0) {
        EXPECT_NEAR(grad(i), 0.0, 1e-8);
      } else {
        EXPECT_GE(grad(i), -1e-8);
      }
    }
    const Vector clipped = ls_estimate(m, b.cast<Complex>()).theta.cwiseMax(0.0);
    EXPECT_LE((g * theta - b).norm(), (g * clipped - b).norm() + 1e-12);
  }
}

TEST(NnlsEstimateTest, NoWorseThanLsOnAverage) {
  const ShiftOperator s = build_shift(sensor_graph(20, 7), ShiftKind::kLaplacian);
  const CMatrix psi = build_psi_spectral(s.basis());
  const Subsampler sampler = greedy_design(DesignProblem{psi, 8, 0.0, DesignCost::kLogDet}).sampler;
  const ObservationModel model = compress_model(psi, sampler, ParamKind::kSpectral);
  const double lmax = s.basis().eigvals.maxCoeff();
  const GraphFilter h{1.0, -1.2 / lmax, 0.4 / (lmax * lmax)};
  const Vector p = frequency_response(s.basis().eigvals, h).cwiseAbs2();
  std::vector<Vector> ls, nn;
  for (int t = 0; t < 100; ++t) {
    const Matrix x = generate_signals(s, h, 200, mix_seed(2024, t));
    const CVector r = vectorize_compressed_cov(sample_covariance(select_nodes(x, sampler.selected())));
    ls.push_back(ls_estimate(model, r).theta);
    nn.push_back(nnls_estimate(model, r).theta);
  }
  EXPECT_LE(nmse(p, nn), nmse(p, ls));
}

TEST(WlsEstimateTest, IdentityWeightEqualsLs) {
  const RulerSetup s;
  Rng rng(13);
  const CVector r = vectorize_compressed_cov(restrict_covariance(
      covariance_from_spectrum(s.shift.basis(), testing::random_uniform(10, rng)),
      s.sampler.selected()));
  CovarianceMatrix eye;
  eye.matrix = CMatrix::Identity(5, 5);
  const Vector wls = wls_estimate(s.model, r, eye, 0.5).theta;
  EXPECT_LT((wls - ls_estimate(s.model, r).theta).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(WlsEstimateTest, ScalarCase) {
  const ObservationModel m = dense_model(Matrix::Ones(1, 1), 1);
  CovarianceMatrix r;
  r.matrix = CMatrix::Constant(1, 1, 3.0);
  const EstimationResult est = wls_estimate(m, CVector::Constant(1, 3.0), r, 0.5);
  EXPECT_NEAR(est.theta(0), 3.0, 1e-14);
  EXPECT_EQ(est.method, EstimatorMethod::kWls);
}

TEST(WlsEstimateTest, SingularCovariance) {
  const RulerSetup s;
  CovarianceMatrix r;
  r.matrix = CMatrix::Zero(5, 5);
  r.matrix(0, 0) = 1.0;
  const CVector target = vectorize_compressed_cov(r);
  EXPECT_THROW(wls_estimate(s.model, target, r, 0.5, WlsOptions{false}), SingularError);
  EXPECT_NO_THROW(wls_estimate(s.model, target, r, 0.5));
  EXPECT_THROW(wls_estimate(dense_model(Matrix::Identity(4, 4)), CVector::Zero(4), r, 0.5),
               InvalidInputError);
}

TEST(WlsEstimateTest, StationarityAndMseAgainstLs) {
  const RulerSetup s;
  const Vector p = ruler_spectrum();
  const CMatrix& u = s.shift.basis().eigvecs;
  const CMatrix colour = u * p.cwiseSqrt().cast<Complex>().asDiagonal() * u.adjoint();
  double sse_ls = 0.0;
  double sse_wls = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Matrix x = colour.real() * white_noise(10, 1000, mix_seed(77, t));
    const CovarianceMatrix r = sample_covariance(select_nodes(x, s.sampler.selected()));
    const CVector r_hat = vectorize_compressed_cov(r);
    const Vector wls = wls_estimate(s.model, r_hat, r, 0.5).theta;
    EXPECT_LT(wls_stationarity_residual(s.model, wls, r_hat, r), 1e-8);
    sse_wls += (wls - p).squaredNorm();
    sse_ls += (ls_estimate(s.model, r_hat).theta - p).squaredNorm();
  }
  EXPECT_LE(sse_wls, 1.05 * sse_ls);
}

TEST(FisherTest, ScalarGaussian) {
  const ObservationModel m = dense_model(Matrix::Ones(1, 1), 1);
  CovarianceMatrix r;
  r.matrix = CMatrix::Constant(1, 1, 2.0);
  const FisherInfo f = fisher_info(m, r, 100, 0.5);
  EXPECT_NEAR(f.matrix(0, 0), 100.0 / (2.0 * 4.0), 1e-12);
  EXPECT_NEAR(f.crb(0, 0), 2.0 * 4.0 / 100.0, 1e-12);
  EXPECT_FALSE(f.crb_is_pseudo_inverse);
  EXPECT_NEAR(fisher_info(m, r, 200, 0.5).matrix(0, 0), 2.0 * f.matrix(0, 0), 1e-12);
  EXPECT_THROW(fisher_info(m, r, 0, 0.5), InvalidInputError);
}

TEST(FisherTest, PositiveDefiniteForValidModel) {
  const RulerSetup s;
  const CovarianceMatrix r = restrict_covariance(
      covariance_from_spectrum(s.shift.basis(), ruler_spectrum()), s.sampler.selected());
  const FisherInfo f = fisher_info(s.model, r, 1000, 0.5);
  EXPECT_LT((f.matrix - f.matrix.transpose()).cwiseAbs().maxCoeff(),
            1e-10 * f.matrix.cwiseAbs().maxCoeff());
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(f.matrix).eigenvalues().minCoeff(), 0.0);
  EXPECT_GT(f.crb.diagonal().minCoeff(), 0.0);
  EXPECT_LT((f.crb * f.matrix - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-6);
  // Entries against the explicit K^2 x K^2 Kronecker weight.
  const CMatrix ri = r.matrix.inverse();
  const CMatrix rit = ri.transpose();
  CMatrix w(25, 25);
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) w.block(5 * a, 5 * b, 5, 5) = rit(a, b) * ri;
  }
  const Matrix expected = 0.5 * 1000 * (s.model.matrix.adjoint() * w * s.model.matrix).real();
  EXPECT_LT((f.matrix - expected).cwiseAbs().maxCoeff(), 1e-9 * expected.cwiseAbs().maxCoeff());
}

TEST(FisherTest, SingularFisherUsesPseudoInverse) {
  Matrix g = Matrix::Zero(1, 2);
  g(0, 0) = 1.0;
  ObservationModel m = dense_model(g, 1);
  CovarianceMatrix r;
  r.matrix = CMatrix::Constant(1, 1, 1.0);
  const FisherInfo f = fisher_info(m, r, 10, 0.5);
  EXPECT_TRUE(f.crb_is_pseudo_inverse);
  EXPECT_NEAR(f.crb(0, 0), 1.0 / f.matrix(0, 0), 1e-12);
  EXPECT_EQ(f.crb(1, 1), 0.0);
}

TEST(NmseTest, SpecExamples) {
  Vector p(2);
  p << 3.0, 4.0;
  EXPECT_EQ(nmse(p, {p, p}), kNmseFloorDb);
  // ||p - p_hat||^2 = ||p|| = 5.
  Vector off = p;
  off(0) += std::sqrt(5.0);
  EXPECT_NEAR(nmse(p, {off}), 0.0, 1e-12);
  Vector off2 = p;
  off2(0) += 2.0 * std::sqrt(5.0);
  EXPECT_NEAR(nmse(p, {off2}) - nmse(p, {off}), 10.0 * std::log10(4.0), 1e-12);
  EXPECT_NEAR(nmse(p, {off}, NmseNorm::kSquared), 10.0 * std::log10(5.0 / 25.0), 1e-12);
  EXPECT_NEAR(nmse_from_sse(p, 10.0, 2), 0.0, 1e-12);
  EXPECT_THROW(nmse(Vector::Zero(2), {p}), InvalidInputError);
  EXPECT_THROW(nmse(p, {}), InvalidInputError);
}

}  // namespace
}  // namespace graphcov
