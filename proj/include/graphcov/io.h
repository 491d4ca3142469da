#ifndef GRAPHCOV_IO_H_
#define GRAPHCOV_IO_H_

#include <string>
#include <vector>

#include "json.hpp"

#include "graphcov/ar_model.h"
#include "graphcov/estimators.h"
#include "graphcov/graph.h"
#include "graphcov/sampler_design.h"
#include "graphcov/spectral_models.h"

namespace graphcov {

using Json = nlohmann::json;

// All readers throw InvalidInputError on malformed content or missing files.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& value);

// {"n": N, "edges": [[i, j, w], ...]}, w optional (1.0).
Json graph_to_json(const Graph& graph);
Graph graph_from_json(const Json& value);

// {"n": N, "selected": [...]}.
Json sampler_to_json(const Subsampler& sampler);
Subsampler sampler_from_json(const Json& value);

// {"core": [...], "P": p, "levels": [[...], ...]}.
Json ar_scheme_to_json(const ARSamplingScheme& scheme);
ARSamplingScheme ar_scheme_from_json(const Json& value);

// {"selected", "objective_trace", "valid", "min_singular"}.
Json design_report_to_json(const DesignResult& design, const ValidityReport& validity);

// {"method", "theta", "residual", "cond"}.
Json estimation_to_json(const EstimationResult& result);

// Header node_0,...,node_{N-1}; one row per snapshot. `signals` is N x N_s.
void write_snapshot_csv(const std::string& path, const Matrix& signals,
                        const std::vector<int>& nodes);
// Returns the K x N_s matrix and the node ids parsed from the header.
SnapshotMatrix read_snapshot_csv(const std::string& path);

}  // namespace graphcov

#endif  // GRAPHCOV_IO_H_
