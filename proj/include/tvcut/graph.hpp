#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvcut/errors.hpp"

namespace tvcut {

using VertexFunction = std::vector<double>;
using EdgeFunction = std::vector<double>;

// One undirected edge with u < v and w > 0.
struct Edge {
  int u;
  int v;
  double w;
};

// Vertex subset S; the complement is implied.
struct Partition {
  std::vector<int> subset;  // sorted, unique
};

// Immutable symmetric weighted graph. Edges are stored once per undirected
// pair, sorted by (u, v). Zero-weight edges and self-loops are rejected.
class Graph {
public:
  Graph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool connected() const { return connected_; }

  struct Incidence {
    int neighbor;
    int edge;  // index into edges()
  };
  const std::vector<Incidence>& neighbors(int v) const { return adj_[v]; }

  double weighted_degree(int v) const { return wdeg_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  int max_degree() const { return max_degree_; }

private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adj_;
  std::vector<double> wdeg_;
  int max_degree_ = 0;
  bool connected_ = false;
};

// Symmetrized k-NN graph with Gaussian weights w = exp(-r^2/sigma^2),
// sigma^2 = 3 * d_k^2 where d_k is the mean k-th-nearest-neighbor distance.
// `points` is row-major n x d.
Graph build_knn_graph(const std::vector<double>& points, int n, int d, int k);

double cut_value(const Graph& g, const Partition& p);
double balanced_cut_value(const Graph& g, const Partition& p);

// (grad f)_e = f_v - f_u for edge e = (u, v); divergence is the negative
// adjoint: <grad f, p> = -<f, div p>.
EdgeFunction gradient(const Graph& g, const VertexFunction& f);
VertexFunction divergence(const Graph& g, const EdgeFunction& p);

std::vector<std::vector<int>> connected_components(const Graph& g);

// Subgraph induced by `vertices` (sorted, unique); indices are renumbered
// to 0..vertices.size()-1 in the given order.
Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices);

Partition complement(const Graph& g, const Partition& p);

// Plain-text edge list: header "n m", then one "u v w" line per edge.
// load_graph also accepts MatrixMarket coordinate symmetric files.
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

void require_connected(const Graph& g, const char* who);

}  // namespace tvcut
