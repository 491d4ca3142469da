#include "cli.h"

#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "graphcov/ar_model.h"
#include "graphcov/estimators.h"
#include "graphcov/experiment.h"
#include "graphcov/generators.h"
#include "graphcov/io.h"
#include "graphcov/sampler_design.h"

namespace graphcov {

namespace {

struct GraphArgs {
  std::string path;
  std::string shift = "laplacian";
  bool dft = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--graph", path, "Graph JSON file")->required();
    cmd->add_option("--shift", shift, "laplacian or adjacency");
    cmd->add_flag("--dft", dft, "Use the DFT basis (circulant shift only)");
  }

  ShiftOperator load() const {
    ShiftOperator s = build_shift(graph_from_json(read_json_file(path)),
                                  shift_kind_from_string(shift));
    return dft ? as_circulant(s) : s;
  }
};

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void emit(const Json& value, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << value.dump(2) << "\n";
  } else {
    write_json_file(path, value);
  }
}

GraphFilter scaled_filter(const ShiftOperator& shift, std::vector<double> h, bool normalize) {
  if (normalize) {
    const double lmax = shift.basis().eigvals.cwiseAbs().maxCoeff();
    if (!(lmax > 0.0)) throw InvalidInputError("cannot normalize a filter on a zero shift");
    double scale = 1.0;
    for (size_t l = 1; l < h.size(); ++l) {
      scale *= lmax;
      h[l] /= scale;
    }
  }
  return GraphFilter(Eigen::Map<const Vector>(h.data(), static_cast<Eigen::Index>(h.size())));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph covariance subsampling and power spectrum estimation"};
  app.require_subcommand(1);

  // graph gen
  auto* graph_cmd = app.add_subcommand("graph", "Graph generation")->require_subcommand(1);
  auto* graph_gen = graph_cmd->add_subcommand("gen", "Generate a graph JSON file");
  std::string gen_kind;
  int gen_n = 0;
  uint64_t gen_seed = 1;
  std::string gen_out;
  graph_gen->add_option("--kind", gen_kind, "sensor, cycle, mobius or path")->required();
  graph_gen->add_option("--n", gen_n, "Number of nodes")->required();
  graph_gen->add_option("--seed", gen_seed, "Seed (sensor graphs)");
  graph_gen->add_option("--out", gen_out, "Output path (stdout when omitted)");

  // sampler design / ruler
  auto* sampler_cmd = app.add_subcommand("sampler", "Sampler design")->require_subcommand(1);
  auto* design_cmd = sampler_cmd->add_subcommand("design", "Design a node subsampler");
  GraphArgs design_graph;
  design_graph.add_to(design_cmd);
  std::string design_model = "spectral";
  int design_k = 0;
  int design_q = 0;
  int design_p = 1;
  std::string design_cost = "logdet";
  double design_eps = 0.0;
  bool design_ruler = false;
  std::vector<int> design_selected;
  std::vector<int> design_core;
  std::string design_out;
  std::string design_report;
  design_cmd->add_option("--model", design_model, "spectral, ma or ar");
  design_cmd->add_option("--k", design_k, "Node budget for greedy design");
  design_cmd->add_option("--q", design_q, "MA order");
  design_cmd->add_option("--p", design_p, "AR order");
  design_cmd->add_option("--cost", design_cost, "logdet or frame_potential");
  design_cmd->add_option("--epsilon", design_eps, "Diagonal loading (default scale-relative)");
  design_cmd->add_flag("--ruler", design_ruler, "Use the minimal sparse ruler");
  design_cmd->add_option("--selected", design_selected, "Explicit node list to check")
      ->delimiter(',');
  design_cmd->add_option("--core", design_core, "AR core nodes (default max degree)")
      ->delimiter(',');
  design_cmd->add_option("--out", design_out, "Sampler (or AR scheme) JSON output");
  design_cmd->add_option("--report", design_report, "Design report JSON output");

  auto* ruler_cmd = sampler_cmd->add_subcommand("ruler", "Minimal sparse ruler");
  int ruler_n = 0;
  int ruler_limit = 64;
  std::vector<int> ruler_check;
  ruler_cmd->add_option("--n", ruler_n, "Ruler length N")->required();
  ruler_cmd->add_option("--limit", ruler_limit, "Largest N searched exhaustively");
  ruler_cmd->add_option("--check", ruler_check, "Only test whether these marks form a ruler")
      ->delimiter(',');

  // signal gen
  auto* signal_cmd = app.add_subcommand("signal", "Signal generation")->require_subcommand(1);
  auto* signal_gen = signal_cmd->add_subcommand("gen", "Write a snapshot CSV");
  GraphArgs signal_graph;
  signal_graph.add_to(signal_gen);
  std::vector<double> signal_filter;
  std::vector<double> signal_ar;
  bool signal_normalize = false;
  int signal_ns = 0;
  uint64_t signal_seed = 1;
  std::string signal_sampler;
  std::vector<int> signal_nodes;
  std::string signal_out;
  auto* filter_opt =
      signal_gen->add_option("--filter", signal_filter, "MA filter taps h_0,...")->delimiter(',');
  auto* ar_opt = signal_gen->add_option("--ar", signal_ar, "AR coefficients a_1,...")
                     ->delimiter(',');
  filter_opt->excludes(ar_opt);
  signal_gen->add_flag("--normalize-filter", signal_normalize, "Divide h_l by lambda_max^l");
  signal_gen->add_option("--snapshots", signal_ns, "Number of snapshots")->required();
  signal_gen->add_option("--seed", signal_seed, "Seed");
  signal_gen->add_option("--sampler", signal_sampler, "Keep only this sampler's nodes");
  signal_gen->add_option("--nodes", signal_nodes, "Keep only these nodes")->delimiter(',');
  signal_gen->add_option("--out", signal_out, "Snapshot CSV")->required();

  // estimate
  auto* est_cmd = app.add_subcommand("estimate", "Estimate the power spectrum");
  GraphArgs est_graph;
  est_graph.add_to(est_cmd);
  std::string est_snapshots;
  std::string est_model = "spectral";
  int est_q = 0;
  int est_p = 1;
  std::string est_sampler;
  std::string est_scheme;
  std::string est_method = "ls";
  bool est_demean = false;
  std::string est_out;
  est_cmd->add_option("--snapshots", est_snapshots, "Snapshot CSV")->required();
  est_cmd->add_option("--model", est_model, "spectral, ma or ar");
  est_cmd->add_option("--q", est_q, "MA order");
  est_cmd->add_option("--p", est_p, "AR order (when no scheme file is given)");
  est_cmd->add_option("--sampler", est_sampler, "Sampler JSON");
  est_cmd->add_option("--ar-scheme", est_scheme, "AR scheme JSON");
  est_cmd->add_option("--method", est_method, "ls, nnls or wls");
  est_cmd->add_flag("--demean", est_demean, "Subtract the sample mean first");
  est_cmd->add_option("--out", est_out, "Report JSON (stdout when omitted)");

  // experiment nmse
  auto* exp_cmd = app.add_subcommand("experiment", "Experiments")->require_subcommand(1);
  auto* nmse_cmd = exp_cmd->add_subcommand("nmse", "Monte-Carlo NMSE experiment");
  std::string exp_config;
  std::string exp_csv;
  std::string exp_summary;
  int exp_threads = 0;
  nmse_cmd->add_option("--config", exp_config, "Experiment config JSON")->required();
  nmse_cmd->add_option("--csv", exp_csv, "Results CSV (overrides config)");
  nmse_cmd->add_option("--summary", exp_summary, "Summary JSON (overrides config)");
  nmse_cmd->add_option("--threads", exp_threads, "Worker count (capped by GRAPHCOV_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Prints help/version to `out` and parse errors to `err`.
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (graph_gen->parsed()) {
      emit(graph_to_json(generate_graph(gen_kind, gen_n, gen_seed)), gen_out, out);
      return kExitOk;
    }

    if (ruler_cmd->parsed()) {
      if (!ruler_check.empty()) {
        const RulerSet marks{sorted_unique(ruler_check)};
        const bool ok = is_sparse_ruler(marks, ruler_n);
        out << Json{{"n", ruler_n}, {"marks", marks.marks}, {"is_sparse_ruler", ok}}.dump(2)
            << "\n";
        return kExitOk;
      }
      const RulerSet ruler = minimal_sparse_ruler(ruler_n, ruler_limit);
      out << Json{{"n", ruler_n},
                  {"marks", ruler.marks},
                  {"size", ruler.marks.size()},
                  {"compression", static_cast<double>(ruler.marks.size()) / ruler_n}}
                 .dump(2)
          << "\n";
      return kExitOk;
    }

    if (design_cmd->parsed()) {
      const ShiftOperator shift = design_graph.load();
      const int n = shift.size();
      if (design_model == "ar") {
        std::vector<int> core = design_core;
        if (core.empty()) core.push_back(max_degree_node(shift));
        emit(ar_scheme_to_json(build_ar_scheme(shift, core, design_p)), design_out, out);
        return kExitOk;
      }
      CMatrix psi;
      if (design_model == "spectral") {
        psi = build_psi_spectral(shift.basis());
      } else if (design_model == "ma") {
        if (design_q < 1) throw InvalidInputError("--q is required for the ma model");
        psi = build_psi_ma(shift, design_q);
      } else {
        throw InvalidInputError("unknown model '" + design_model + "'");
      }
      DesignResult design;
      if (!design_selected.empty()) {
        design.sampler = Subsampler(n, design_selected);
      } else if (design_ruler) {
        design.sampler = Subsampler(n, minimal_sparse_ruler(n).marks);
      } else {
        if (design_k < 1) throw InvalidInputError("--k is required for greedy design");
        DesignProblem problem;
        problem.psi = psi;
        problem.k = design_k;
        problem.epsilon = design_eps;
        problem.cost = design_cost_from_string(design_cost);
        design = greedy_design(problem);
      }
      const ValidityReport validity = check_valid(psi, design.sampler);
      if (!design_out.empty()) write_json_file(design_out, sampler_to_json(design.sampler));
      Json report = design_report_to_json(design, validity);
      report["rank"] = validity.rank;
      report["feasible"] = validity.feasible;
      emit(report, design_report, out);
      if (!validity.valid) {
        err << "error: sampler is not valid (rank " << validity.rank << " of "
            << psi.cols() << (validity.feasible ? "" : "; K^2 < M") << ")\n";
        return kExitNumerical;
      }
      return kExitOk;
    }

    if (signal_gen->parsed()) {
      const ShiftOperator shift = signal_graph.load();
      Matrix x;
      if (!signal_ar.empty()) {
        x = generate_ar_signals(shift, ARParams{Eigen::Map<const Vector>(
                                           signal_ar.data(),
                                           static_cast<Eigen::Index>(signal_ar.size()))},
                                signal_ns, signal_seed);
      } else {
        if (signal_filter.empty()) throw InvalidInputError("--filter or --ar is required");
        x = generate_signals(shift, scaled_filter(shift, signal_filter, signal_normalize),
                             signal_ns, signal_seed);
      }
      std::vector<int> nodes = Subsampler::all(shift.size()).selected();
      if (!signal_sampler.empty()) {
        nodes = sampler_from_json(read_json_file(signal_sampler)).selected();
      } else if (!signal_nodes.empty()) {
        nodes = sorted_unique(signal_nodes);
      }
      const SnapshotMatrix kept = select_nodes(x, nodes);
      write_snapshot_csv(signal_out, kept.data, kept.node_indices);
      return kExitOk;
    }

    if (est_cmd->parsed()) {
      const ShiftOperator shift = est_graph.load();
      const int n = shift.size();
      SnapshotMatrix snaps = read_snapshot_csv(est_snapshots);
      if (est_demean) demean(snaps);
      const CovarianceMatrix r_hat = sample_covariance(snaps);
      const EstimatorMethod method = estimator_method_from_string(est_method);
      const Vector& eigvals = shift.basis().eigvals;

      if (est_model == "ar") {
        if (method != EstimatorMethod::kLs) {
          throw InvalidInputError("the ar model supports only --method ls");
        }
        ARSamplingScheme scheme;
        if (!est_scheme.empty()) {
          scheme = ar_scheme_from_json(read_json_file(est_scheme));
        } else {
          scheme = build_ar_scheme(shift, {max_degree_node(shift)}, est_p);
        }
        for (int node : scheme.observed_nodes()) {
          if (std::find(snaps.node_indices.begin(), snaps.node_indices.end(), node) ==
              snaps.node_indices.end()) {
            throw InvalidInputError("snapshots do not cover AR scheme node " +
                                    std::to_string(node));
          }
        }
        const ARSystem sys =
            build_ar_model(shift, scheme, ar_covariance_blocks(scheme, r_hat, snaps.node_indices));
        const ARFit fit = estimate_ar(sys.model, sys.target);
        EstimationResult result;
        result.theta = fit.params.a;
        result.residual_norm = fit.residual_norm;
        result.condition_number = sys.model.condition_number();
        Json report = estimation_to_json(result);
        const Vector p = ar_power_spectrum(eigvals, fit.params).values;
        report["p"] = std::vector<double>(p.data(), p.data() + p.size());
        emit(report, est_out, out);
        return kExitOk;
      }

      Subsampler sampler(n, snaps.node_indices);
      if (!est_sampler.empty()) {
        const Subsampler given = sampler_from_json(read_json_file(est_sampler));
        if (given.n_nodes() != n || given.selected() != snaps.node_indices) {
          throw InvalidInputError("sampler nodes do not match the snapshot CSV header");
        }
      } else if (!std::is_sorted(snaps.node_indices.begin(), snaps.node_indices.end())) {
        throw InvalidInputError("snapshot CSV nodes must be in ascending order");
      }
      if (sampler.selected() != snaps.node_indices) {
        throw InvalidInputError("snapshot CSV nodes must be distinct and ascending");
      }
      CMatrix psi;
      ParamKind kind;
      int q = 0;
      if (est_model == "spectral") {
        psi = build_psi_spectral(shift.basis());
        kind = ParamKind::kSpectral;
      } else if (est_model == "ma") {
        if (est_q < 1) throw InvalidInputError("--q is required for the ma model");
        q = est_q;
        psi = build_psi_ma(shift, q);
        kind = ParamKind::kMovingAverage;
      } else {
        throw InvalidInputError("unknown model '" + est_model + "'");
      }
      const ObservationModel model = compress_model(psi, sampler, kind);
      const CVector r = vectorize_compressed_cov(r_hat);
      EstimationResult result;
      switch (method) {
        case EstimatorMethod::kLs:
          result = ls_estimate(model, r);
          break;
        case EstimatorMethod::kNnls:
          result = nnls_estimate(model, r);
          break;
        case EstimatorMethod::kWls:
          result = wls_estimate(model, r, r_hat, 0.5);
          break;
      }
      Json report = estimation_to_json(result);
      const Vector p = kind == ParamKind::kMovingAverage
                           ? Vector(vandermonde(eigvals, q) * result.theta)
                           : result.theta;
      report["p"] = std::vector<double>(p.data(), p.data() + p.size());
      emit(report, est_out, out);
      return kExitOk;
    }

    if (nmse_cmd->parsed()) {
      ExperimentConfig config = experiment_config_from_json(read_json_file(exp_config));
      if (!exp_csv.empty()) config.csv_path = exp_csv;
      if (!exp_summary.empty()) config.summary_path = exp_summary;
      int threads = resolve_thread_count();
      if (exp_threads > 0) threads = std::min(threads, exp_threads);
      const ExperimentResult result = run_experiment(config, threads);
      const std::string csv = experiment_csv(result);
      if (config.csv_path.empty()) {
        out << csv;
      } else {
        std::ofstream file(config.csv_path);
        if (!file) throw InvalidInputError("cannot write '" + config.csv_path + "'");
        file << csv;
      }
      if (!config.summary_path.empty()) {
        write_json_file(config.summary_path, experiment_summary(result));
      }
      for (const ExperimentRow& row : result.rows) {
        if (row.failures > 0) {
          err << "warning: " << row.failures << " of " << row.failures + row.trials
              << " trials failed (sampler " << row.sampler << ", method "
              << to_string(row.method) << ", N_s " << row.n_snapshots << ")\n";
        }
      }
      return kExitOk;
    }
  } catch (const InvalidInputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCapability;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  err << "error: no command given\n";
  return kExitInvalidInput;
}

}  // namespace graphcov
