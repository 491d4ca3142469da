#ifndef GRAPHCOV_GENERATORS_H_
#define GRAPHCOV_GENERATORS_H_

#include <cstdint>
#include <string>

#include "graphcov/graph.h"

namespace graphcov {

// Edges (i, i+1 mod N).
Graph cycle_graph(int n);

// Edges (i, i+1) for i < N-1.
Graph path_graph(int n);

// Cycle plus rungs (i, i + N/2); N must be even.
Graph mobius_ladder(int n);

// N uniform points in the unit square, symmetrized k-nearest-neighbor edges
// with weights exp(-d^2 / (2 sigma^2)), sigma the mean k-NN distance.
Graph sensor_graph(int n, uint64_t seed, int k_neighbors = 6);

// Dispatch on "cycle", "path", "mobius" or "sensor".
Graph generate_graph(const std::string& kind, int n, uint64_t seed);

}  // namespace graphcov

#endif  // GRAPHCOV_GENERATORS_H_
