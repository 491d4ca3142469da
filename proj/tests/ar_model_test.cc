#include "graphcov/ar_model.h"

#include <cmath>

#include "graphcov/generators.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace graphcov {
namespace {

ShiftOperator path3_adjacency() { return build_shift(path_graph(3), ShiftKind::kAdjacency); }

Graph star_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 1; i < n; ++i) edges.push_back({0, i, 1.0});
  return Graph(n, edges);
}

ARParams params_of(std::initializer_list<double> a) {
  ARParams p;
  p.a = Vector(Eigen::Map<const Vector>(a.begin(), a.size()));
  return p;
}

TEST(NeighborhoodTest, PathExamples) {
  const ShiftOperator s = path3_adjacency();
  EXPECT_EQ(neighborhood(s, 1, 1), (std::vector<int>{0, 2}));
  EXPECT_EQ(neighborhood(s, 1, 2), (std::vector<int>{1}));
  EXPECT_EQ(neighborhood(s, 0, 2), (std::vector<int>{0, 2}));
  EXPECT_THROW(neighborhood(s, 3, 1), InvalidInputError);
  EXPECT_THROW(neighborhood(s, 0, 0), InvalidInputError);
}

TEST(NeighborhoodTest, LaplacianIncludesSelf) {
  const ShiftOperator s = build_shift(sensor_graph(10, 2), ShiftKind::kLaplacian);
  for (int node = 0; node < 10; ++node) {
    const auto hood = neighborhood(s, node, 1);
    EXPECT_TRUE(std::binary_search(hood.begin(), hood.end(), node));
  }
}

TEST(NeighborhoodTest, MatchesPatternOfPower) {
  // Nonnegative weights cannot cancel, so the numeric pattern is the oracle.
  const ShiftOperator s = build_shift(sensor_graph(15, 4), ShiftKind::kAdjacency);
  for (int p = 1; p <= 3; ++p) {
    const Matrix sp = s.power(p);
    for (int node = 0; node < 15; ++node) {
      std::vector<int> expected;
      for (int l = 0; l < 15; ++l) {
        if (sp(node, l) != 0.0) expected.push_back(l);
      }
      EXPECT_EQ(neighborhood(s, node, p), expected);
    }
  }
}

TEST(NeighborhoodTest, IgnoresNumericalCancellation) {
  // Weights chosen so that [S^2]_{0,2} = 1 - 1 = 0 numerically.
  Matrix w = Matrix::Zero(4, 4);
  w(0, 1) = w(1, 0) = 1.0;
  w(1, 2) = w(2, 1) = 1.0;
  w(0, 3) = w(3, 0) = 1.0;
  w(3, 2) = w(2, 3) = -1.0;
  const ShiftOperator s(w);
  EXPECT_EQ(s.power(2)(0, 2), 0.0);
  EXPECT_EQ(neighborhood(s, 0, 2), (std::vector<int>{0, 2}));
}

TEST(ArSchemeTest, CycleExample) {
  const ShiftOperator s = build_shift(cycle_graph(10), ShiftKind::kAdjacency);
  const ARSamplingScheme scheme = build_ar_scheme(s, {0}, 2);
  ASSERT_EQ(scheme.levels.size(), 3u);
  EXPECT_EQ(scheme.levels[0], (std::vector<int>{0}));
  EXPECT_EQ(scheme.levels[1], (std::vector<int>{1, 9}));
  EXPECT_EQ(scheme.levels[2], (std::vector<int>{0, 2, 8}));
  EXPECT_EQ(scheme.level_sizes(), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(scheme.total_observations(), 6);
  EXPECT_EQ(scheme.observed_nodes(), (std::vector<int>{0, 1, 2, 8, 9}));
}

TEST(ArSchemeTest, AllNodesAndStar) {
  const ShiftOperator c = build_shift(cycle_graph(6), ShiftKind::kAdjacency);
  EXPECT_EQ(build_ar_scheme(c, {0, 1, 2, 3, 4, 5}, 1).observed_nodes().size(), 6u);
  const ShiftOperator star = build_shift(star_graph(7), ShiftKind::kAdjacency);
  EXPECT_EQ(max_degree_node(star), 0);
  EXPECT_EQ(build_ar_scheme(star, {0}, 1).level_sizes()[1], 6);
  EXPECT_EQ(max_degree_node(c), 0);
  EXPECT_THROW(build_ar_scheme(c, {}, 1), InvalidInputError);
  EXPECT_THROW(build_ar_scheme(c, {0}, 0), InvalidInputError);
  EXPECT_THROW(build_ar_scheme(c, {0, 0}, 1), InvalidInputError);
  EXPECT_THROW(build_ar_scheme(c, {6}, 1), InvalidInputError);
}

TEST(ArSchemeTest, LevelsArePatternExact) {
  const ShiftOperator s = build_shift(sensor_graph(18, 6), ShiftKind::kAdjacency);
  const ARSamplingScheme scheme = build_ar_scheme(s, {2, 11}, 3);
  for (int p = 1; p <= 3; ++p) {
    const Matrix sp = s.power(p);
    std::vector<int> expected;
    for (int l = 0; l < 18; ++l) {
      if (sp(2, l) != 0.0 || sp(11, l) != 0.0) expected.push_back(l);
    }
    EXPECT_EQ(scheme.levels[p], expected);
  }
}

TEST(ArSignalsTest, LinearConsistencyWithRecordedNoise) {
  const ShiftOperator s = build_shift(sensor_graph(16, 3), ShiftKind::kAdjacency);
  const double lmax = s.matrix().cwiseAbs().rowwise().sum().maxCoeff();
  const ARParams a = params_of({0.3 / lmax, -0.1 / (lmax * lmax)});
  Matrix noise;
  const Matrix x = generate_ar_signals(s, a, 20, 77, &noise);
  EXPECT_EQ(noise, white_noise(16, 20, 77));
  const ARSamplingScheme scheme = build_ar_scheme(s, {max_degree_node(s)}, 2);
  const auto& core = scheme.levels[0];
  for (int t = 0; t < 20; ++t) {
    for (int c : core) {
      double lhs = x(c, t);
      for (int k = 1; k <= 2; ++k) {
        const Matrix sk = s.power(k);
        for (int l : scheme.levels[k]) lhs -= a.a(k - 1) * sk(c, l) * x(l, t);
      }
      EXPECT_NEAR(lhs, noise(c, t), 1e-12);
    }
  }
}

TEST(ArCovarianceTest, TrueCovarianceMatchesDefinition) {
  const ShiftOperator s = build_shift(cycle_graph(8), ShiftKind::kAdjacency);
  const ARParams a = params_of({0.2});
  const Matrix h_inv = Matrix::Identity(8, 8) - 0.2 * s.matrix();
  EXPECT_EQ(ar_filter_inverse(s, a), h_inv);
  const Matrix h = h_inv.inverse();
  EXPECT_LT((ar_true_covariance(s, a).matrix.real() - h * h.transpose()).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_THROW(ar_true_covariance(s, params_of({0.5})), SingularError);
}

TEST(EstimateArTest, SpecExamples) {
  ObservationModel m;
  m.kind = ParamKind::kAutoregressive;
  m.matrix = CMatrix::Zero(3, 1);
  m.matrix(1, 0) = 1.0;
  update_rank_info(m);
  const ARFit fit = estimate_ar(m, 2.0 * m.matrix.col(0));
  ASSERT_EQ(fit.params.a.size(), 1);
  EXPECT_NEAR(fit.params.a(0), 2.0, 1e-15);
  EXPECT_NEAR(fit.residual_norm, 0.0, 1e-15);
  EXPECT_THROW(estimate_ar(m, CVector::Zero(2)), InvalidInputError);

  m.matrix.setZero();
  update_rank_info(m);
  EXPECT_THROW(estimate_ar(m, CVector::Zero(3)), RankDeficientError);
}

TEST(EstimateArTest, UncompressedHollowShiftWithIdentity) {
  const ShiftOperator s = build_shift(cycle_graph(9), ShiftKind::kAdjacency);
  CovarianceMatrix eye;
  eye.matrix = CMatrix::Identity(9, 9);
  EXPECT_NEAR(estimate_ar_uncompressed(s, eye, 1).params.a(0), 0.0, 1e-15);
}

TEST(EstimateArTest, AllNodesCoreEqualsUncompressed) {
  const ShiftOperator s = build_shift(sensor_graph(12, 9), ShiftKind::kAdjacency);
  const double lmax = s.matrix().cwiseAbs().rowwise().sum().maxCoeff();
  const ARParams a = params_of({0.4 / lmax, 0.1 / (lmax * lmax)});
  const CovarianceMatrix r = ar_true_covariance(s, a);
  std::vector<int> all(12);
  for (int i = 0; i < 12; ++i) all[i] = i;
  const ARSamplingScheme scheme = build_ar_scheme(s, all, 2);
  const ARSystem sys = build_ar_model(s, scheme, ar_covariance_blocks(scheme, r));
  const ARFit compressed = estimate_ar(sys.model, sys.target);
  const ARFit full = estimate_ar_uncompressed(s, r, 2);
  EXPECT_LT((compressed.params.a - full.params.a).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EstimateArTest, SingleColumnStructureForOrderOne) {
  const ShiftOperator s = build_shift(cycle_graph(10), ShiftKind::kAdjacency);
  const CovarianceMatrix r = ar_true_covariance(s, params_of({0.2}));
  const ARSamplingScheme scheme = build_ar_scheme(s, {0}, 1);
  const CovarianceBlocks blocks = ar_covariance_blocks(scheme, r);
  const ARSystem sys = build_ar_model(s, scheme, blocks);
  ASSERT_EQ(sys.model.matrix.cols(), 1);
  ASSERT_EQ(sys.model.matrix.rows(), 1 + 2);
  // Row for (core 0, level-q node l): sum_m S_{0,m} R_{m,l} over m in {1, 9}.
  const Matrix& rx = r.matrix.real();
  EXPECT_NEAR(sys.model.matrix(0, 0).real(), rx(1, 0) + rx(9, 0), 1e-14);
  EXPECT_NEAR(sys.model.matrix(1, 0).real(), rx(1, 1) + rx(9, 1), 1e-14);
  EXPECT_NEAR(sys.target(2).real(), rx(0, 9), 1e-14);

  CovarianceBlocks zero = blocks;
  for (auto& [key, block] : zero) block.setZero();
  EXPECT_EQ(build_ar_model(s, scheme, zero).model.matrix, CMatrix::Zero(3, 1));

  CovarianceBlocks missing = blocks;
  missing.erase({1, 1});
  EXPECT_THROW(build_ar_model(s, scheme, missing), InvalidInputError);
}

TEST(EstimateArTest, WhiteNoiseEstimateShrinks) {
  const ShiftOperator s = build_shift(cycle_graph(20), ShiftKind::kAdjacency);
  const ARSamplingScheme scheme = build_ar_scheme(s, {0, 5}, 1);
  const auto nodes = scheme.observed_nodes();
  double err_small = 0.0;
  double err_large = 0.0;
  for (int t = 0; t < 30; ++t) {
    for (int ns : {200, 20000}) {
      const Matrix x = white_noise(20, ns, mix_seed(99, t));
      const CovarianceMatrix r = sample_covariance(select_nodes(x, nodes));
      const ARSystem sys = build_ar_model(s, scheme, ar_covariance_blocks(scheme, r, nodes));
      const double a = estimate_ar(sys.model, sys.target).params.a(0);
      (ns == 200 ? err_small : err_large) += a * a;
    }
  }
  // Root-mean-square error scales as 1/sqrt(Ns); expected ratio 10.
  const double ratio = std::sqrt(err_small / err_large);
  EXPECT_GT(ratio, 5.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(ArSpectrumTest, SpecExamples) {
  Vector lambda(3);
  lambda << 1.0, -1.0, 0.5;
  EXPECT_EQ(ar_power_spectrum(lambda, params_of({0.0})).values, Vector::Ones(3));
  EXPECT_NEAR(ar_power_spectrum(lambda, params_of({0.5})).values(0), 4.0, 1e-15);
  try {
    ar_power_spectrum(lambda, params_of({2.0}));
    FAIL() << "expected SingularError";
  } catch (const SingularError& e) {
    EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos);
  }
}

TEST(ArSpectrumTest, MatchesCovarianceSpectrum) {
  const ShiftOperator s = build_shift(sensor_graph(14, 5), ShiftKind::kAdjacency);
  const double lmax = s.basis().eigvals.cwiseAbs().maxCoeff();
  const ARParams a = params_of({0.5 / lmax});
  const PowerSpectrum p = ar_power_spectrum(s.basis().eigvals, a);
  const PowerSpectrum q = power_spectrum_from_cov(s.basis(), ar_true_covariance(s, a));
  EXPECT_LT((p.values - q.values).cwiseAbs().maxCoeff(), 1e-10);
}

}  // namespace
}  // namespace graphcov
