#include "graphcov/ar_model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "graphcov/linalg.h"

namespace graphcov {

std::vector<int> ARSamplingScheme::level_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(levels.size());
  for (const auto& level : levels) sizes.push_back(static_cast<int>(level.size()));
  return sizes;
}

int ARSamplingScheme::total_observations() const {
  int total = 0;
  for (const auto& level : levels) total += static_cast<int>(level.size());
  return total;
}

std::vector<int> ARSamplingScheme::observed_nodes() const {
  std::set<int> nodes;
  for (const auto& level : levels) nodes.insert(level.begin(), level.end());
  return {nodes.begin(), nodes.end()};
}

std::vector<int> neighborhood(const ShiftOperator& shift, int node, int p) {
  const int n = shift.size();
  if (node < 0 || node >= n) {
    throw InvalidInputError("neighborhood: node " + std::to_string(node) +
                            " out of range");
  }
  if (p < 1) throw InvalidInputError("neighborhood: hop count must be >= 1");
  const Matrix& s = shift.matrix();
  std::vector<char> frontier(n, 0);
  frontier[node] = 1;
  for (int step = 0; step < p; ++step) {
    std::vector<char> next(n, 0);
    for (int i = 0; i < n; ++i) {
      if (!frontier[i]) continue;
      for (int l = 0; l < n; ++l) {
        if (s(i, l) != 0.0) next[l] = 1;
      }
    }
    frontier.swap(next);
  }
  std::vector<int> out;
  for (int l = 0; l < n; ++l) {
    if (frontier[l]) out.push_back(l);
  }
  return out;
}

ARSamplingScheme build_ar_scheme(const ShiftOperator& shift,
                                 std::vector<int> core, int order) {
  if (core.empty()) throw InvalidInputError("build_ar_scheme: empty core set");
  if (order < 1) throw InvalidInputError("build_ar_scheme: order must be >= 1");
  std::sort(core.begin(), core.end());
  if (std::adjacent_find(core.begin(), core.end()) != core.end()) {
    throw InvalidInputError("build_ar_scheme: duplicate core node");
  }
  if (core.front() < 0 || core.back() >= shift.size()) {
    throw InvalidInputError("build_ar_scheme: core node out of range");
  }
  ARSamplingScheme scheme;
  scheme.core = core;
  scheme.order = order;
  scheme.levels.push_back(core);
  for (int p = 1; p <= order; ++p) {
    std::set<int> level;
    for (int k : core) {
      const auto hood = neighborhood(shift, k, p);
      level.insert(hood.begin(), hood.end());
    }
    scheme.levels.emplace_back(level.begin(), level.end());
  }
  return scheme;
}

int max_degree_node(const ShiftOperator& shift) {
  const Matrix& s = shift.matrix();
  int best = 0;
  int best_degree = -1;
  for (int i = 0; i < shift.size(); ++i) {
    int degree = 0;
    for (int j = 0; j < shift.size(); ++j) {
      if (j != i && s(i, j) != 0.0) ++degree;
    }
    if (degree > best_degree) {
      best = i;
      best_degree = degree;
    }
  }
  return best;
}

CovarianceBlocks ar_covariance_blocks(const ARSamplingScheme& scheme,
                                      const CovarianceMatrix& r,
                                      const std::vector<int>& nodes) {
  std::unordered_map<int, int> position;
  if (nodes.empty()) {
    for (int i = 0; i < r.size(); ++i) position[i] = i;
  } else {
    if (static_cast<int>(nodes.size()) != r.size()) {
      throw InvalidInputError("ar_covariance_blocks: node list does not match covariance size");
    }
    for (size_t i = 0; i < nodes.size(); ++i) position[nodes[i]] = static_cast<int>(i);
  }
  auto locate = [&](int node) {
    auto it = position.find(node);
    if (it == position.end()) {
      throw InvalidInputError("ar_covariance_blocks: node " + std::to_string(node) +
                              " not covered by the covariance");
    }
    return it->second;
  };
  CovarianceBlocks blocks;
  const int levels = static_cast<int>(scheme.levels.size());
  for (int p = 0; p < levels; ++p) {
    const auto& rows = scheme.levels[p];
    for (int q = 0; q < levels; ++q) {
      const auto& cols = scheme.levels[q];
      CMatrix block(rows.size(), cols.size());
      for (size_t b = 0; b < cols.size(); ++b) {
        const int cb = locate(cols[b]);
        for (size_t a = 0; a < rows.size(); ++a) {
          block(a, b) = r.matrix(locate(rows[a]), cb);
        }
      }
      blocks.emplace(std::make_pair(p, q), std::move(block));
    }
  }
  return blocks;
}

namespace {

const CMatrix& require_block(const CovarianceBlocks& blocks, int p, int q) {
  auto it = blocks.find({p, q});
  if (it == blocks.end()) {
    std::ostringstream msg;
    msg << "build_ar_model: missing covariance block R_{" << p << "," << q << "}";
    throw InvalidInputError(msg.str());
  }
  return it->second;
}

Matrix select(const Matrix& m, const std::vector<int>& rows,
              const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (size_t b = 0; b < cols.size(); ++b) {
    for (size_t a = 0; a < rows.size(); ++a) out(a, b) = m(rows[a], cols[b]);
  }
  return out;
}

}  // namespace

ARSystem build_ar_model(const ShiftOperator& shift,
                        const ARSamplingScheme& scheme,
                        const CovarianceBlocks& covariances) {
  const int order = scheme.order;
  if (static_cast<int>(scheme.levels.size()) != order + 1) {
    throw InvalidInputError("build_ar_model: scheme needs P + 1 levels");
  }
  const auto& core = scheme.levels[0];
  const Eigen::Index k0 = static_cast<Eigen::Index>(core.size());

  // Phi_0 S^k Phi_k^T for k = 1..P.
  std::vector<CMatrix> local_shift(order + 1);
  for (int k = 1; k <= order; ++k) {
    local_shift[k] = select(shift.power(k), core, scheme.levels[k]).cast<Complex>();
  }

  Eigen::Index total_rows = 0;
  for (int q = 0; q <= order; ++q) {
    total_rows += k0 * static_cast<Eigen::Index>(scheme.levels[q].size());
  }

  ARSystem system;
  ObservationModel& model = system.model;
  model.kind = ParamKind::kAutoregressive;
  model.block_size = 0;
  model.matrix.resize(total_rows, order);
  system.target.resize(total_rows);
  model.row_index.reserve(total_rows);

  Eigen::Index offset = 0;
  for (int q = 0; q <= order; ++q) {
    const auto& cols = scheme.levels[q];
    const Eigen::Index kq = static_cast<Eigen::Index>(cols.size());
    const CMatrix& r0q = require_block(covariances, 0, q);
    if (r0q.rows() != k0 || r0q.cols() != kq) {
      throw InvalidInputError("build_ar_model: covariance block has wrong shape");
    }
    system.target.segment(offset, k0 * kq) =
        Eigen::Map<const CVector>(r0q.data(), r0q.size());
    for (int k = 1; k <= order; ++k) {
      const CMatrix& rkq = require_block(covariances, k, q);
      if (rkq.rows() != local_shift[k].cols() || rkq.cols() != kq) {
        throw InvalidInputError("build_ar_model: covariance block has wrong shape");
      }
      const CMatrix column = local_shift[k] * rkq;
      model.matrix.col(k - 1).segment(offset, k0 * kq) =
          Eigen::Map<const CVector>(column.data(), column.size());
    }
    for (Eigen::Index b = 0; b < kq; ++b) {
      for (Eigen::Index a = 0; a < k0; ++a) model.row_index.emplace_back(core[a], cols[b]);
    }
    offset += k0 * kq;
  }
  update_rank_info(model);
  return system;
}

ARFit estimate_ar(const ObservationModel& model, const CVector& target) {
  if (model.matrix.rows() != target.size()) {
    throw InvalidInputError("estimate_ar: target length does not match model rows");
  }
  if (has_non_finite(model.matrix) || has_non_finite(target)) {
    throw InvalidInputError("estimate_ar: non-finite input");
  }
  if (!model.full_column_rank) {
    throw RankDeficientError("estimate_ar: observation matrix is rank deficient",
                             model.rank, model.n_params());
  }
  const RealSystem sys = stack_real(model.matrix, target);
  const LeastSquaresSolution sol = solve_least_squares(sys.a, sys.b);
  ARFit fit;
  fit.params.a = sol.x;
  fit.residual_norm = sol.residual_norm;
  return fit;
}

ARFit estimate_ar_uncompressed(const ShiftOperator& shift,
                               const CovarianceMatrix& r_x, int order) {
  const int n = shift.size();
  if (r_x.size() != n) {
    throw InvalidInputError("estimate_ar_uncompressed: covariance must be N x N");
  }
  if (order < 1) throw InvalidInputError("estimate_ar_uncompressed: order must be >= 1");
  ObservationModel model;
  model.kind = ParamKind::kAutoregressive;
  model.block_size = n;
  model.matrix.resize(static_cast<Eigen::Index>(n) * n, order);
  for (int k = 1; k <= order; ++k) {
    const CMatrix column = shift.power(k).cast<Complex>() * r_x.matrix;
    model.matrix.col(k - 1) = Eigen::Map<const CVector>(column.data(), column.size());
  }
  update_rank_info(model);
  return estimate_ar(model, Eigen::Map<const CVector>(r_x.matrix.data(), r_x.matrix.size()));
}

PowerSpectrum ar_power_spectrum(const Vector& eigvals, const ARParams& params) {
  PowerSpectrum p;
  p.values.resize(eigvals.size());
  for (Eigen::Index n = 0; n < eigvals.size(); ++n) {
    double denom = 1.0;
    double power = 1.0;
    for (Eigen::Index k = 0; k < params.a.size(); ++k) {
      power *= eigvals(n);
      denom -= params.a(k) * power;
    }
    if (std::abs(denom) < 1e-12) {
      std::ostringstream msg;
      msg << "ar_power_spectrum: pole at eigenvalue " << eigvals(n) << " (index "
          << n << ")";
      throw SingularError(msg.str());
    }
    p.values(n) = 1.0 / (denom * denom);
  }
  return p;
}

Matrix ar_filter_inverse(const ShiftOperator& shift, const ARParams& params) {
  const int n = shift.size();
  Matrix h_inv = Matrix::Identity(n, n);
  for (Eigen::Index k = 0; k < params.a.size(); ++k) {
    h_inv -= params.a(k) * shift.power(static_cast<int>(k) + 1);
  }
  return h_inv;
}

namespace {

Eigen::FullPivLU<Matrix> factor_ar(const ShiftOperator& shift, const ARParams& params) {
  Eigen::FullPivLU<Matrix> lu(ar_filter_inverse(shift, params));
  if (!lu.isInvertible()) {
    throw SingularError("AR filter I - sum a_k S^k is singular");
  }
  return lu;
}

}  // namespace

CovarianceMatrix ar_true_covariance(const ShiftOperator& shift,
                                    const ARParams& params) {
  const auto lu = factor_ar(shift, params);
  const Matrix h = lu.inverse();
  CovarianceMatrix r;
  Matrix real = h * h.transpose();
  real = 0.5 * (real + real.transpose()).eval();
  r.matrix = real.cast<Complex>();
  return r;
}

Matrix generate_ar_signals(const ShiftOperator& shift, const ARParams& params,
                           int n_snapshots, uint64_t seed, Matrix* noise) {
  if (n_snapshots < 1) {
    throw InvalidInputError("generate_ar_signals: need at least one snapshot");
  }
  const auto lu = factor_ar(shift, params);
  Matrix n = white_noise(shift.size(), n_snapshots, seed);
  Matrix x = lu.solve(n);
  if (noise) *noise = std::move(n);
  return x;
}

}  // namespace graphcov
