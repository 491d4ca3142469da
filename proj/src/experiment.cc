#include "graphcov/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "graphcov/ar_model.h"
#include "graphcov/generators.h"
#include "graphcov/rng.h"

namespace graphcov {

namespace {

template <typename T>
T get_or(const Json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return it->get<T>();
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SamplerSpec sampler_spec_from_json(const Json& s) {
  SamplerSpec spec;
  spec.kind = s.at("kind").get<std::string>();
  if (spec.kind == "greedy") {
    spec.k = s.at("k").get<int>();
    spec.cost = design_cost_from_string(get_or<std::string>(s, "cost", "logdet"));
  } else if (spec.kind == "explicit") {
    spec.selected = s.at("selected").get<std::vector<int>>();
  } else if (spec.kind == "ar_core") {
    spec.core = get_or<std::vector<int>>(s, "core", {});
  } else if (spec.kind != "all" && spec.kind != "ruler") {
    throw InvalidInputError("unknown sampler kind '" + spec.kind + "'");
  }
  return spec;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const Json& value) {
  try {
    ExperimentConfig c;
    const Json& g = value.at("graph");
    c.graph.kind = g.at("kind").get<std::string>();
    if (c.graph.kind == "file") {
      c.graph.file = g.at("file").get<std::string>();
    } else {
      c.graph.n = g.at("n").get<int>();
    }
    c.graph.seed = get_or<uint64_t>(g, "seed", 1);
    c.graph.shift = shift_kind_from_string(get_or<std::string>(g, "shift", "laplacian"));
    c.graph.dft_basis = get_or<bool>(g, "dft_basis", false);

    const Json model = get_or<Json>(value, "model", Json::object());
    const std::string kind = get_or<std::string>(model, "kind", "spectral");
    if (kind == "spectral") {
      c.model.kind = ParamKind::kSpectral;
    } else if (kind == "ma") {
      c.model.kind = ParamKind::kMovingAverage;
      c.model.q = get_or<int>(model, "q", 0);
    } else if (kind == "ar") {
      c.model.kind = ParamKind::kAutoregressive;
    } else {
      throw InvalidInputError("unknown model kind '" + kind + "'");
    }

    const Json signal = get_or<Json>(value, "signal", Json::object());
    c.signal.filter = to_vector(get_or<std::vector<double>>(signal, "filter", {}));
    c.signal.normalize_filter = get_or<bool>(signal, "normalize_filter", false);
    c.signal.ar = to_vector(get_or<std::vector<double>>(signal, "ar", {}));

    for (const Json& s : value.at("samplers")) c.samplers.push_back(sampler_spec_from_json(s));
    if (value.contains("methods")) {
      c.methods.clear();
      for (const Json& m : value.at("methods")) {
        c.methods.push_back(estimator_method_from_string(m.get<std::string>()));
      }
    }
    c.snapshots = value.at("snapshots").get<std::vector<int>>();
    c.n_trials = get_or<int>(value, "n_trials", c.n_trials);
    c.seed = get_or<uint64_t>(value, "seed", c.seed);
    c.exact_covariance = get_or<bool>(value, "exact_covariance", false);
    const std::string norm = get_or<std::string>(value, "nmse_norm", "printed");
    if (norm == "printed") {
      c.nmse_norm = NmseNorm::kAsPrinted;
    } else if (norm == "squared") {
      c.nmse_norm = NmseNorm::kSquared;
    } else {
      throw InvalidInputError("nmse_norm must be 'printed' or 'squared'");
    }
    const Json output = get_or<Json>(value, "output", Json::object());
    c.csv_path = get_or<std::string>(output, "csv", "");
    c.summary_path = get_or<std::string>(output, "summary", "");

    if (c.samplers.empty()) throw InvalidInputError("config: no samplers");
    if (c.snapshots.empty()) throw InvalidInputError("config: empty snapshot grid");
    if (c.methods.empty()) throw InvalidInputError("config: no methods");
    for (int ns : c.snapshots) {
      if (ns < 1) throw InvalidInputError("config: snapshot counts must be >= 1");
    }
    if (c.n_trials < 1) throw InvalidInputError("config: n_trials must be >= 1");
    return c;
  } catch (const Json::exception& e) {
    throw InvalidInputError(std::string("experiment config: ") + e.what());
  }
}

int resolve_thread_count() {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* env = std::getenv("GRAPHCOV_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) {
      threads = std::min(threads, static_cast<int>(cap));
    }
  }
  return threads;
}

namespace {

// Everything a trial needs for one sampler; read-only once built.
struct Cell {
  std::string label;
  double compression = 1.0;
  std::vector<int> nodes;  // observed nodes, sorted
  ObservationModel model;  // spectral / MA
  ARSamplingScheme scheme;  // AR
  bool ar_uncompressed = false;
  CovarianceMatrix true_cov;  // on `nodes`
};

struct Setup {
  ShiftOperator shift{Matrix::Zero(1, 1)};
  Vector eigvals;
  Vector true_p;
  GraphFilter filter;
  ARParams ar;
  int q = 0;
  std::vector<Cell> cells;
};

Setup build_setup(const ExperimentConfig& config) {
  Graph graph = config.graph.kind == "file"
                    ? graph_from_json(read_json_file(config.graph.file))
                    : generate_graph(config.graph.kind, config.graph.n, config.graph.seed);
  Setup s;
  s.shift = build_shift(graph, config.graph.shift);
  if (config.graph.dft_basis) s.shift = as_circulant(s.shift);
  const SpectralBasis& basis = s.shift.basis();
  s.eigvals = basis.eigvals;
  const int n = s.shift.size();

  const bool ar = config.model.kind == ParamKind::kAutoregressive;
  CovarianceMatrix full_cov;
  if (ar) {
    if (config.signal.ar.size() < 1) throw InvalidInputError("config: AR model needs signal.ar");
    for (EstimatorMethod m : config.methods) {
      if (m != EstimatorMethod::kLs) {
        throw InvalidInputError("config: AR experiments support only the ls method");
      }
    }
    s.ar.a = config.signal.ar;
    s.true_p = ar_power_spectrum(s.eigvals, s.ar).values;
    full_cov = ar_true_covariance(s.shift, s.ar);
  } else {
    if (config.signal.filter.size() < 1) {
      throw InvalidInputError("config: spectral/MA models need signal.filter");
    }
    Vector h = config.signal.filter;
    if (config.signal.normalize_filter) {
      const double lmax = s.eigvals.cwiseAbs().maxCoeff();
      if (!(lmax > 0.0)) throw InvalidInputError("config: zero shift cannot normalize filter");
      for (Eigen::Index l = 1; l < h.size(); ++l) h(l) /= std::pow(lmax, static_cast<double>(l));
    }
    s.filter = GraphFilter(h);
    s.true_p = frequency_response(s.eigvals, s.filter).array().square();
    full_cov = true_covariance(s.shift, s.filter);
  }

  CMatrix psi;
  if (config.model.kind == ParamKind::kSpectral) {
    psi = build_psi_spectral(basis);
  } else if (config.model.kind == ParamKind::kMovingAverage) {
    s.q = config.model.q > 0 ? config.model.q : default_ma_order(s.filter.length(), n);
    psi = build_psi_ma(s.shift, s.q);
  }

  for (const SamplerSpec& spec : config.samplers) {
    Cell cell;
    if (ar) {
      if (spec.kind == "all") {
        cell.ar_uncompressed = true;
        cell.label = "all";
        cell.nodes = Subsampler::all(n).selected();
      } else if (spec.kind == "ar_core") {
        std::vector<int> core = spec.core;
        if (core.empty()) core.push_back(max_degree_node(s.shift));
        cell.scheme = build_ar_scheme(s.shift, core, static_cast<int>(s.ar.a.size()));
        cell.nodes = cell.scheme.observed_nodes();
        cell.label = "ar_core";
      } else {
        throw InvalidInputError("config: AR experiments take 'all' or 'ar_core' samplers");
      }
    } else {
      Subsampler sampler;
      if (spec.kind == "all") {
        sampler = Subsampler::all(n);
      } else if (spec.kind == "greedy") {
        DesignProblem problem;
        problem.psi = psi;
        problem.k = spec.k;
        problem.cost = spec.cost;
        sampler = greedy_design(problem).sampler;
      } else if (spec.kind == "ruler") {
        sampler = Subsampler(n, minimal_sparse_ruler(n).marks);
      } else if (spec.kind == "explicit") {
        sampler = Subsampler(n, spec.selected);
      } else {
        throw InvalidInputError("config: sampler '" + spec.kind +
                                "' is only valid for AR experiments");
      }
      cell.label = spec.kind;
      cell.nodes = sampler.selected();
      cell.model = compress_model(psi, sampler, config.model.kind);
    }
    cell.compression = static_cast<double>(cell.nodes.size()) / n;
    cell.true_cov = restrict_covariance(full_cov, cell.nodes);
    s.cells.push_back(std::move(cell));
  }
  return s;
}

// Power spectrum implied by an estimated parameter vector.
Vector to_spectrum(const Setup& s, ParamKind kind, const Vector& theta) {
  switch (kind) {
    case ParamKind::kSpectral:
      return theta;
    case ParamKind::kMovingAverage:
      return vandermonde(s.eigvals, s.q) * theta;
    case ParamKind::kAutoregressive:
      return ar_power_spectrum(s.eigvals, ARParams{theta}).values;
  }
  return theta;
}

Vector estimate_once(const Setup& s, const Cell& cell, ParamKind kind,
                     EstimatorMethod method, const CovarianceMatrix& r_hat) {
  if (kind == ParamKind::kAutoregressive) {
    const int order = static_cast<int>(s.ar.a.size());
    if (cell.ar_uncompressed) {
      return estimate_ar_uncompressed(s.shift, r_hat, order).params.a;
    }
    const ARSystem sys = build_ar_model(s.shift, cell.scheme,
                                        ar_covariance_blocks(cell.scheme, r_hat, cell.nodes));
    return estimate_ar(sys.model, sys.target).params.a;
  }
  const CVector r = vectorize_compressed_cov(r_hat);
  switch (method) {
    case EstimatorMethod::kLs:
      return ls_estimate(cell.model, r).theta;
    case EstimatorMethod::kNnls:
      return nnls_estimate(cell.model, r).theta;
    case EstimatorMethod::kWls:
      return wls_estimate(cell.model, r, r_hat, 0.5).theta;
  }
  return {};
}

struct TrialOutcome {
  std::vector<double> sse;  // per method; NaN on failure
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
  const Setup setup = build_setup(config);
  const ParamKind kind = config.model.kind;
  const size_t n_cells = setup.cells.size();
  const size_t n_grid = config.snapshots.size();
  const size_t n_methods = config.methods.size();
  const size_t n_trials = static_cast<size_t>(config.n_trials);
  const size_t n_tasks = n_grid * n_trials;

  // One task = one signal realization, shared by every sampler and method.
  std::vector<std::vector<TrialOutcome>> outcomes(n_tasks, std::vector<TrialOutcome>(n_cells));
  std::atomic<size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  auto worker = [&] {
    while (true) {
      const size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      try {
        const size_t g = task / n_trials;
        const size_t t = task % n_trials;
        const int ns = config.snapshots[g];
        const uint64_t seed = mix_seed(mix_seed(config.seed, g), t);
        Matrix signals;
        if (!config.exact_covariance) {
          signals = kind == ParamKind::kAutoregressive
                        ? generate_ar_signals(setup.shift, setup.ar, ns, seed)
                        : generate_signals(setup.shift, setup.filter, ns, seed);
        }
        for (size_t c = 0; c < n_cells; ++c) {
          const Cell& cell = setup.cells[c];
          CovarianceMatrix r_hat = cell.true_cov;
          if (!config.exact_covariance) {
            r_hat = sample_covariance(select_nodes(signals, cell.nodes));
          }
          TrialOutcome& out = outcomes[task][c];
          out.sse.assign(n_methods, std::nan(""));
          for (size_t m = 0; m < n_methods; ++m) {
            try {
              const Vector theta = estimate_once(setup, cell, kind, config.methods[m], r_hat);
              const Vector p_hat = to_spectrum(setup, kind, theta);
              const double sse = (setup.true_p - p_hat).squaredNorm();
              if (std::isfinite(sse)) out.sse[m] = sse;
            } catch (const Error&) {
              // Counted as a failure.
            }
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(n_tasks);
        return;
      }
    }
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n_tasks)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  ExperimentResult result;
  result.true_p = setup.true_p;
  const double m_params = static_cast<double>(setup.true_p.size());
  for (size_t c = 0; c < n_cells; ++c) {
    const Cell& cell = setup.cells[c];
    for (size_t g = 0; g < n_grid; ++g) {
      std::optional<Matrix> crb_p;
      if (kind != ParamKind::kAutoregressive) {
        try {
          const FisherInfo info = fisher_info(cell.model, cell.true_cov, config.snapshots[g], 0.5);
          if (kind == ParamKind::kMovingAverage) {
            const Matrix v = vandermonde(setup.eigvals, setup.q);
            crb_p = v * info.crb * v.transpose();
          } else {
            crb_p = info.crb;
          }
        } catch (const Error&) {
        }
      }
      for (size_t m = 0; m < n_methods; ++m) {
        ExperimentRow row;
        row.n_snapshots = config.snapshots[g];
        row.method = config.methods[m];
        row.sampler = cell.label;
        row.compression = cell.compression;
        double sse = 0.0;
        for (size_t t = 0; t < n_trials; ++t) {
          const double v = outcomes[g * n_trials + t][c].sse[m];
          if (std::isnan(v)) {
            ++row.failures;
          } else {
            sse += v;
            ++row.trials;
          }
        }
        if (row.trials > 0) {
          row.nmse_db = nmse_from_sse(setup.true_p, sse, row.trials, config.nmse_norm);
          row.mse = sse / row.trials / m_params;
        }
        if (crb_p) {
          const double tr = crb_p->trace();
          row.crb_mse = tr / m_params;
          row.crb_db = nmse_from_sse(setup.true_p, tr, 1, config.nmse_norm);
        }
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

std::string experiment_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "n_snapshots,method,compression,nmse_db,crb_db\n";
  out << std::fixed;
  for (const ExperimentRow& row : result.rows) {
    if (row.trials == 0) continue;
    out << row.n_snapshots << ',' << to_string(row.method) << ',' << std::setprecision(4)
        << row.compression << ',' << std::setprecision(6) << row.nmse_db << ',';
    if (row.crb_db) out << *row.crb_db;
    out << '\n';
  }
  return out.str();
}

Json experiment_summary(const ExperimentResult& result) {
  Json rows = Json::array();
  for (const ExperimentRow& row : result.rows) {
    Json r = {{"n_snapshots", row.n_snapshots},
              {"method", to_string(row.method)},
              {"sampler", row.sampler},
              {"compression", row.compression},
              {"trials", row.trials},
              {"failures", row.failures}};
    r["nmse_db"] = row.trials > 0 ? Json(row.nmse_db) : Json(nullptr);
    r["crb_db"] = row.crb_db ? Json(*row.crb_db) : Json(nullptr);
    rows.push_back(r);
  }
  return {{"rows", rows}};
}

}  // namespace graphcov
