#ifndef GRAPHCOV_EXPERIMENT_H_
#define GRAPHCOV_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphcov/estimators.h"
#include "graphcov/io.h"

namespace graphcov {

struct GraphSpec {
  std::string kind = "sensor";  // sensor, cycle, mobius, path or file
  int n = 0;
  uint64_t seed = 1;
  std::string file;
  ShiftKind shift = ShiftKind::kLaplacian;
  // Use the unitary DFT basis; the shift must be circulant.
  bool dft_basis = false;
};

struct ModelSpec {
  ParamKind kind = ParamKind::kSpectral;
  int q = 0;  // MA order; 0 selects default_ma_order
};

struct SignalSpec {
  // Generating filter for spectral/MA experiments.
  Vector filter;
  // Divide h_l by lambda_max^l before use.
  bool normalize_filter = false;
  // AR coefficients a_1..a_P for AR experiments.
  Vector ar;
};

struct SamplerSpec {
  // all, greedy, ruler, explicit or ar_core
  std::string kind = "all";
  int k = 0;
  std::vector<int> selected;
  // ar_core with an empty list uses the max-degree node.
  std::vector<int> core;
  DesignCost cost = DesignCost::kLogDet;
};

struct ExperimentConfig {
  GraphSpec graph;
  ModelSpec model;
  SignalSpec signal;
  std::vector<SamplerSpec> samplers;
  std::vector<EstimatorMethod> methods{EstimatorMethod::kLs};
  std::vector<int> snapshots;
  int n_trials = 100;
  uint64_t seed = 1;
  bool exact_covariance = false;
  NmseNorm nmse_norm = NmseNorm::kAsPrinted;
  std::string csv_path;
  std::string summary_path;
};

// Fields missing from the JSON keep their defaults; graph.kind/n (or file),
// samplers and snapshots are required.
ExperimentConfig experiment_config_from_json(const Json& value);

struct ExperimentRow {
  int n_snapshots = 0;
  EstimatorMethod method = EstimatorMethod::kLs;
  std::string sampler;
  double compression = 1.0;
  int trials = 0;
  int failures = 0;
  double nmse_db = 0.0;
  // Mean ||p - p_hat||^2 / M over successful trials.
  double mse = 0.0;
  std::optional<double> crb_db;
  // trace(CRB on p) / M.
  std::optional<double> crb_mse;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  Vector true_p;
};

// Worker count from GRAPHCOV_THREADS capped by hardware concurrency; at
// least 1.
int resolve_thread_count();

ExperimentResult run_experiment(const ExperimentConfig& config, int threads);

// Columns n_snapshots,method,compression,nmse_db,crb_db. Rows without any
// successful trial are omitted.
std::string experiment_csv(const ExperimentResult& result);
Json experiment_summary(const ExperimentResult& result);

}  // namespace graphcov

#endif  // GRAPHCOV_EXPERIMENT_H_
