#pragma once

#include <random>
#include <vector>

#include "tvcut/datasets.hpp"
#include "tvcut/graph.hpp"

namespace tvcut::testing {

// Connected Erdos-Renyi graph with weights in [0.5, 1.5]; retries until the
// sample is connected.
inline Graph random_connected_graph(std::mt19937_64& rng, int n,
                                    double p = 0.5) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unit(rng) < p) edges.push_back({i, j, weight(rng)});
    Graph g(n, std::move(edges));
    if (g.connected()) return g;
  }
  throw std::runtime_error("could not sample a connected graph");
}

inline Graph cycle_graph(int n, double w = 1.0) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    edges.push_back({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n), w});
  return Graph(n, std::move(edges));
}

// Two K5 cliques joined by a single unit edge between vertices 4 and 5.
inline Graph barbell_graph() {
  std::vector<Edge> edges;
  for (int base : {0, 5})
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) edges.push_back({base + i, base + j, 1.0});
  edges.push_back({4, 5, 1.0});
  return Graph(10, std::move(edges));
}

inline VertexFunction random_vector(std::mt19937_64& rng, int n,
                                    double lo = -3.0, double hi = 3.0) {
  std::uniform_real_distribution<double> val(lo, hi);
  VertexFunction f(n);
  for (double& x : f) x = val(rng);
  return f;
}

}  // namespace tvcut::testing
