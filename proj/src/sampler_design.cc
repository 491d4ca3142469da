#include "graphcov/sampler_design.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "graphcov/linalg.h"

namespace graphcov {

std::string to_string(DesignCost cost) {
  return cost == DesignCost::kLogDet ? "logdet" : "frame_potential";
}

DesignCost design_cost_from_string(const std::string& name) {
  if (name == "logdet") return DesignCost::kLogDet;
  if (name == "frame_potential") return DesignCost::kFramePotential;
  throw InvalidInputError("unknown design cost '" + name + "'");
}

int nodes_of_model(const CMatrix& psi) {
  const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(psi.rows()))));
  if (static_cast<Eigen::Index>(n) * n != psi.rows()) {
    throw InvalidInputError("model matrix row count is not a perfect square");
  }
  return n;
}

double default_epsilon(const CMatrix& psi) {
  const double mean_diag = psi.cols() ? psi.squaredNorm() / psi.cols() : 0.0;
  return 1e-6 * (1.0 + mean_diag);
}

namespace {

// Columns psi_{s,j}, psi_{j,s} for j in `chosen`, then psi_{s,s}: the
// rank-one terms that node s adds to T(X).
CMatrix pair_terms(const CMatrix& psi, int n, int s, const std::vector<int>& chosen) {
  CMatrix b(psi.cols(), 2 * chosen.size() + 1);
  Eigen::Index c = 0;
  for (int j : chosen) {
    b.col(c++) = psi.row(s + static_cast<Eigen::Index>(j) * n).adjoint();
    b.col(c++) = psi.row(j + static_cast<Eigen::Index>(s) * n).adjoint();
  }
  b.col(c) = psi.row(s + static_cast<Eigen::Index>(s) * n).adjoint();
  return b;
}

bool improves(double candidate, double best, bool maximize) {
  const double tol = 1e-10 * std::max(1.0, std::abs(best));
  return maximize ? candidate > best + tol : candidate < best - tol;
}

DesignResult greedy_logdet(const CMatrix& psi, int n, int k, double eps) {
  const Eigen::Index m = psi.cols();
  CMatrix loaded = eps * CMatrix::Identity(m, m);
  Eigen::LLT<CMatrix> chol(loaded);
  std::vector<int> chosen;
  std::vector<char> taken(n, 0);
  DesignResult result;
  double value = 0.0;
  for (int iter = 0; iter < k; ++iter) {
    int best = -1;
    double best_gain = 0.0;
    CMatrix best_terms;
    for (int s = 0; s < n; ++s) {
      if (taken[s]) continue;
      CMatrix terms = pair_terms(psi, n, s, chosen);
      // Matrix determinant lemma: log det(A + B B^H) - log det(A)
      //   = log det(I + (L^{-1} B)^H (L^{-1} B)).
      const CMatrix whitened = chol.matrixL().solve(terms);
      CMatrix small = whitened.adjoint() * whitened;
      small.diagonal().array() += 1.0;
      const double gain = log_det_hpd(small);
      if (best < 0 || improves(gain, best_gain, true)) {
        best = s;
        best_gain = gain;
        best_terms = std::move(terms);
      }
    }
    taken[best] = 1;
    chosen.push_back(best);
    loaded += best_terms * best_terms.adjoint();
    chol.compute(loaded);
    if (chol.info() != Eigen::Success) {
      throw SingularError("greedy_design: loaded Gram lost positive definiteness");
    }
    value += best_gain;
    result.objective_trace.push_back(value);
  }
  result.sampler = Subsampler(n, chosen);
  return result;
}

DesignResult greedy_frame_potential(const CMatrix& psi, int n, int k) {
  std::vector<int> current(n);
  for (int i = 0; i < n; ++i) current[i] = i;
  CMatrix t = gram(psi, current);
  DesignResult result;
  while (static_cast<int>(current.size()) > k) {
    const double base = t.squaredNorm();
    int best_pos = -1;
    double best_value = 0.0;
    CMatrix best_delta;
    for (size_t pos = 0; pos < current.size(); ++pos) {
      const int s = current[pos];
      std::vector<int> others;
      others.reserve(current.size() - 1);
      for (int j : current) {
        if (j != s) others.push_back(j);
      }
      const CMatrix terms = pair_terms(psi, n, s, others);
      // ||T - B B^H||_F^2 = ||T||^2 - 2 tr(B^H T B) + ||B^H B||^2.
      const double cross = (terms.adjoint() * t * terms).trace().real();
      const double self = (terms.adjoint() * terms).squaredNorm();
      const double value = base - 2.0 * cross + self;
      if (best_pos < 0 || improves(value, best_value, false)) {
        best_pos = static_cast<int>(pos);
        best_value = value;
        best_delta = terms * terms.adjoint();
      }
    }
    t -= best_delta;
    current.erase(current.begin() + best_pos);
    result.objective_trace.push_back(best_value);
  }
  result.sampler = Subsampler(n, current);
  return result;
}

}  // namespace

CMatrix gram(const CMatrix& psi, const std::vector<int>& selected) {
  const int n = nodes_of_model(psi);
  const Eigen::Index k = static_cast<Eigen::Index>(selected.size());
  if (k == 0) return CMatrix::Zero(psi.cols(), psi.cols());
  CMatrix rows(k * k, psi.cols());
  for (Eigen::Index b = 0; b < k; ++b) {
    for (Eigen::Index a = 0; a < k; ++a) {
      if (selected[a] < 0 || selected[a] >= n) {
        throw InvalidInputError("gram: node index out of range");
      }
      rows.row(a + b * k) = psi.row(selected[a] + static_cast<Eigen::Index>(selected[b]) * n);
    }
  }
  CMatrix t = rows.adjoint() * rows;
  return 0.5 * (t + t.adjoint());
}

CMatrix gram(const CMatrix& psi, const std::vector<bool>& w) {
  if (static_cast<int>(w.size()) != nodes_of_model(psi)) {
    throw InvalidInputError("gram: selection vector length does not match N");
  }
  std::vector<int> selected;
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i]) selected.push_back(static_cast<int>(i));
  }
  return gram(psi, selected);
}

double set_objective(const CMatrix& psi, const std::vector<int>& selected,
                     double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInputError("set_objective: epsilon must be > 0");
  if (selected.empty()) return 0.0;
  CMatrix t = gram(psi, selected);
  t.diagonal().array() += epsilon;
  return log_det_hpd(t) - static_cast<double>(psi.cols()) * std::log(epsilon);
}

double frame_potential(const CMatrix& psi, const std::vector<bool>& w) {
  return gram(psi, w).squaredNorm();
}

DesignResult greedy_design(const DesignProblem& problem) {
  const int n = nodes_of_model(problem.psi);
  if (problem.k < 1 || problem.k > n) {
    throw InvalidInputError("greedy_design: need 1 <= K <= N");
  }
  if (problem.cost == DesignCost::kFramePotential) {
    return greedy_frame_potential(problem.psi, n, problem.k);
  }
  const double eps = problem.epsilon > 0.0 ? problem.epsilon : default_epsilon(problem.psi);
  return greedy_logdet(problem.psi, n, problem.k, eps);
}

ValidityReport check_valid(const CMatrix& psi, const Subsampler& sampler) {
  const Eigen::Index m = psi.cols();
  const Eigen::Index k2 = static_cast<Eigen::Index>(sampler.size()) * sampler.size();
  const ObservationModel model = compress_model(psi, sampler, ParamKind::kSpectral);
  ValidityReport report;
  report.feasible = k2 >= m;
  report.rank = model.rank;
  report.valid = report.feasible && model.full_column_rank;
  report.min_singular = model.sigma_min;
  return report;
}

bool is_sparse_ruler(const RulerSet& ruler, int n) {
  if (n < 1) throw InvalidInputError("is_sparse_ruler: N must be >= 1");
  std::vector<char> covered(n, 0);
  for (int a : ruler.marks) {
    if (a < 0 || a >= n) throw InvalidInputError("is_sparse_ruler: mark outside [0, N-1]");
    for (int b : ruler.marks) {
      if (a >= b) covered[a - b] = 1;
    }
  }
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

namespace {

// Depth-first search for a ruler with exactly `target` marks; interior marks
// are placed in increasing order so the first hit is lexicographically
// smallest.
class RulerSearch {
 public:
  RulerSearch(int n, int target) : n_(n), target_(target), cover_(n, 0) {}

  bool run(std::vector<int>& out) {
    add(0);
    add(n_ - 1);
    const bool found = extend(1);
    if (found) {
      out = marks_;
      std::sort(out.begin(), out.end());
    }
    return found;
  }

 private:
  void add(int x) {
    for (int y : marks_) {
      if (cover_[std::abs(x - y)]++ == 0) --uncovered_;
    }
    marks_.push_back(x);
  }

  void remove() {
    const int x = marks_.back();
    marks_.pop_back();
    for (int y : marks_) {
      if (--cover_[std::abs(x - y)] == 0) ++uncovered_;
    }
  }

  bool extend(int next) {
    if (uncovered_ == 0) return true;
    const int placed = static_cast<int>(marks_.size());
    const int remaining = target_ - placed;
    if (remaining <= 0) return false;
    // Each new mark creates at most one new difference per mark present.
    const long long reachable = static_cast<long long>(remaining) * placed +
                                static_cast<long long>(remaining) * (remaining - 1) / 2;
    if (uncovered_ > reachable) return false;
    for (int x = next; x <= n_ - 2 - (remaining - 1); ++x) {
      add(x);
      if (extend(x + 1)) return true;
      remove();
    }
    return false;
  }

  int n_;
  int target_;
  std::vector<int> cover_;
  std::vector<int> marks_;
  // Difference 0 is always realized by a mark with itself.
  int uncovered_ = n_ - 1;
};

}  // namespace

RulerSet minimal_sparse_ruler(int n, int search_limit) {
  if (n < 2) throw InvalidInputError("minimal_sparse_ruler: N must be >= 2");
  if (n > search_limit) {
    throw CapabilityError("minimal_sparse_ruler: N = " + std::to_string(n) +
                          " exceeds the search limit " + std::to_string(search_limit) +
                          "; check a known ruler with is_sparse_ruler instead");
  }
  for (int target = 2; target <= n; ++target) {
    RulerSearch search(n, target);
    RulerSet ruler;
    if (search.run(ruler.marks)) return ruler;
  }
  throw CapabilityError("minimal_sparse_ruler: search exhausted");
}

}  // namespace graphcov
