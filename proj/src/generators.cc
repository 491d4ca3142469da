#include "graphcov/generators.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "graphcov/rng.h"

namespace graphcov {

namespace {

void require_nodes(int n, const char* who) {
  if (n < 2) throw InvalidInputError(std::string(who) + ": need N >= 2");
}

}  // namespace

Graph cycle_graph(int n) {
  require_nodes(n, "cycle_graph");
  std::vector<Edge> edges;
  if (n == 2) {
    edges.push_back({0, 1, 1.0});
    return Graph(n, edges);
  }
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
  return Graph(n, std::move(edges));
}

Graph path_graph(int n) {
  require_nodes(n, "path_graph");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return Graph(n, std::move(edges));
}

Graph mobius_ladder(int n) {
  require_nodes(n, "mobius_ladder");
  if (n % 2 != 0) throw InvalidInputError("mobius_ladder: N must be even");
  if (n < 6) throw InvalidInputError("mobius_ladder: need N >= 6 for a simple graph");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
  for (int i = 0; i < n / 2; ++i) edges.push_back({i, i + n / 2, 1.0});
  return Graph(n, std::move(edges));
}

Graph sensor_graph(int n, uint64_t seed, int k_neighbors) {
  require_nodes(n, "sensor_graph");
  if (k_neighbors < 1) throw InvalidInputError("sensor_graph: need k >= 1");
  const int k = std::min(k_neighbors, n - 1);
  Rng rng(seed);
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.uniform();
    y[i] = rng.uniform();
  }
  auto dist = [&](int a, int b) { return std::hypot(x[a] - x[b], y[a] - y[b]); };

  std::set<std::pair<int, int>> pairs;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    order.erase(order.begin() + i);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
      const double da = dist(i, a);
      const double db = dist(i, b);
      return da < db || (da == db && a < b);
    });
    for (int r = 0; r < k; ++r) {
      total += dist(i, order[r]);
      pairs.emplace(std::min(i, order[r]), std::max(i, order[r]));
    }
  }
  const double sigma = total / (static_cast<double>(n) * k);
  std::vector<Edge> edges;
  for (const auto& [a, b] : pairs) {
    const double d = dist(a, b);
    // Coincident points would give weight 1; the kernel never reaches 0.
    edges.push_back({a, b, std::exp(-d * d / (2.0 * sigma * sigma))});
  }
  return Graph(n, std::move(edges));
}

Graph generate_graph(const std::string& kind, int n, uint64_t seed) {
  if (kind == "cycle") return cycle_graph(n);
  if (kind == "path") return path_graph(n);
  if (kind == "mobius") return mobius_ladder(n);
  if (kind == "sensor") return sensor_graph(n, seed);
  throw InvalidInputError("unknown graph kind '" + kind + "'");
}

}  // namespace graphcov
