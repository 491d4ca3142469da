#ifndef GRAPHCOV_SAMPLER_DESIGN_H_
#define GRAPHCOV_SAMPLER_DESIGN_H_

#include <string>
#include <vector>

#include "graphcov/common.h"
#include "graphcov/spectral_models.h"

namespace graphcov {

enum class DesignCost { kLogDet, kFramePotential };

std::string to_string(DesignCost cost);
DesignCost design_cost_from_string(const std::string& name);

// Node-selection problem over the rows of an N^2 x M model matrix psi
// (Psi_s or Psi_MA).
struct DesignProblem {
  CMatrix psi;
  int k = 1;
  double epsilon = 0.0;  // <= 0 selects default_epsilon(psi)
  DesignCost cost = DesignCost::kLogDet;
};

struct DesignResult {
  Subsampler sampler;
  // Log-det: f(X) after each greedy addition. Frame potential: ||T||_F^2
  // after each greedy removal.
  std::vector<double> objective_trace;
};

struct ValidityReport {
  bool valid = false;
  int rank = 0;
  double min_singular = 0.0;
  // K^2 >= M, necessary for validity.
  bool feasible = false;
};

struct RulerSet {
  std::vector<int> marks;
};

// Number of graph nodes N implied by an N^2-row model matrix.
int nodes_of_model(const CMatrix& psi);

// 1e-6 * (1 + mean diagonal of psi^H psi).
double default_epsilon(const CMatrix& psi);

// T = sum over (i, j) in X x X of psi_{i,j} psi_{i,j}^H, i.e.
// psi^H (diag[w] (x) diag[w]) psi without forming the N^2 x N^2 diagonal.
CMatrix gram(const CMatrix& psi, const std::vector<int>& selected);
CMatrix gram(const CMatrix& psi, const std::vector<bool>& w);

// log det(T(X) + eps I) - M log eps; exactly 0 for the empty set.
double set_objective(const CMatrix& psi, const std::vector<int>& selected,
                     double epsilon);

// ||T(w)||_F^2.
double frame_potential(const CMatrix& psi, const std::vector<bool>& w);

// Greedy log-det maximization (additions) or frame-potential minimization
// (removals from the full set). Ties go to the lowest node index.
DesignResult greedy_design(const DesignProblem& problem);

ValidityReport check_valid(const CMatrix& psi, const Subsampler& sampler);

// True iff the pairwise differences of `marks` cover 0..N-1.
bool is_sparse_ruler(const RulerSet& marks, int n);

// Lexicographically smallest ruler of minimum cardinality containing 0 and
// N-1. Throws CapabilityError when N > search_limit.
RulerSet minimal_sparse_ruler(int n, int search_limit = 64);

}  // namespace graphcov

#endif  // GRAPHCOV_SAMPLER_DESIGN_H_
