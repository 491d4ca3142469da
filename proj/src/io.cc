#include "graphcov/io.h"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace graphcov {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidInputError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path + "'");
  out << value.dump(2) << "\n";
}

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InvalidInputError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json graph_to_json(const Graph& graph) {
  Json edges = Json::array();
  for (const Edge& e : graph.edges()) edges.push_back({e.i, e.j, e.weight});
  return {{"n", graph.n_nodes()}, {"edges", edges}};
}

Graph graph_from_json(const Json& value) {
  return guarded("graph JSON", [&] {
    const int n = value.at("n").get<int>();
    std::vector<Edge> edges;
    for (const Json& e : value.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) {
        throw InvalidInputError("graph JSON: each edge must be [i, j] or [i, j, w]");
      }
      Edge edge{e[0].get<int>(), e[1].get<int>(), 1.0};
      if (e.size() == 3) edge.weight = e[2].get<double>();
      edges.push_back(edge);
    }
    return Graph(n, std::move(edges));
  });
}

Json sampler_to_json(const Subsampler& sampler) {
  return {{"n", sampler.n_nodes()}, {"selected", sampler.selected()}};
}

Subsampler sampler_from_json(const Json& value) {
  return guarded("sampler JSON", [&] {
    return Subsampler(value.at("n").get<int>(),
                      value.at("selected").get<std::vector<int>>());
  });
}

Json ar_scheme_to_json(const ARSamplingScheme& scheme) {
  return {{"core", scheme.core}, {"P", scheme.order}, {"levels", scheme.levels}};
}

ARSamplingScheme ar_scheme_from_json(const Json& value) {
  return guarded("AR scheme JSON", [&] {
    ARSamplingScheme scheme;
    scheme.core = value.at("core").get<std::vector<int>>();
    scheme.order = value.at("P").get<int>();
    scheme.levels = value.at("levels").get<std::vector<std::vector<int>>>();
    if (scheme.order < 1 || static_cast<int>(scheme.levels.size()) != scheme.order + 1) {
      throw InvalidInputError("AR scheme JSON: need P >= 1 and P + 1 levels");
    }
    if (scheme.levels[0] != scheme.core) {
      throw InvalidInputError("AR scheme JSON: levels[0] must equal core");
    }
    return scheme;
  });
}

Json design_report_to_json(const DesignResult& design, const ValidityReport& validity) {
  return {{"selected", design.sampler.selected()},
          {"objective_trace", design.objective_trace},
          {"valid", validity.valid},
          {"min_singular", validity.min_singular}};
}

Json estimation_to_json(const EstimationResult& result) {
  return {{"method", to_string(result.method)},
          {"theta", std::vector<double>(result.theta.data(),
                                        result.theta.data() + result.theta.size())},
          {"residual", result.residual_norm},
          {"cond", std::isfinite(result.condition_number) ? Json(result.condition_number)
                                                          : Json(nullptr)}};
}

void write_snapshot_csv(const std::string& path, const Matrix& signals,
                        const std::vector<int>& nodes) {
  if (static_cast<Eigen::Index>(nodes.size()) != signals.rows()) {
    throw InvalidInputError("write_snapshot_csv: node list does not match rows");
  }
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path + "'");
  for (size_t r = 0; r < nodes.size(); ++r) {
    out << (r ? "," : "") << "node_" << nodes[r];
  }
  out << "\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index k = 0; k < signals.cols(); ++k) {
    for (Eigen::Index r = 0; r < signals.rows(); ++r) {
      out << (r ? "," : "") << signals(r, k);
    }
    out << "\n";
  }
}

SnapshotMatrix read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("snapshot CSV is empty");
  SnapshotMatrix out;
  {
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) {
      if (cell.rfind("node_", 0) != 0) {
        throw InvalidInputError("snapshot CSV: bad header cell '" + cell + "'");
      }
      try {
        out.node_indices.push_back(std::stoi(cell.substr(5)));
      } catch (const std::exception&) {
        throw InvalidInputError("snapshot CSV: bad header cell '" + cell + "'");
      }
    }
  }
  const size_t k = out.node_indices.size();
  if (k == 0) throw InvalidInputError("snapshot CSV: empty header");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw InvalidInputError("snapshot CSV: bad value '" + cell + "'");
      }
    }
    if (row.size() != k) {
      throw InvalidInputError("snapshot CSV: row " + std::to_string(rows.size() + 1) +
                              " has " + std::to_string(row.size()) + " values, expected " +
                              std::to_string(k));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInputError("snapshot CSV: no snapshots");
  out.data.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(rows.size()));
  for (size_t c = 0; c < rows.size(); ++c) {
    for (size_t r = 0; r < k; ++r) out.data(r, c) = rows[c][r];
  }
  return out;
}

}  // namespace graphcov
