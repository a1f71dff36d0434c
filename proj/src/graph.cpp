#include "tvcut/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

namespace tvcut {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 1) throw_config("graph needs at least one vertex");
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n_) throw_data("edge endpoint out of range");
    if (e.u == e.v) throw_data("self-loops are not allowed");
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw_data("edge weights must be finite and strictly positive");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
      throw_data("duplicate edge");
  }

  adj_.resize(n_);
  wdeg_.assign(n_, 0.0);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    adj_[edges_[e].u].push_back({edges_[e].v, e});
    adj_[edges_[e].v].push_back({edges_[e].u, e});
    wdeg_[edges_[e].u] += edges_[e].w;
    wdeg_[edges_[e].v] += edges_[e].w;
  }
  for (int v = 0; v < n_; ++v)
    max_degree_ = std::max(max_degree_, static_cast<int>(adj_[v].size()));

  // BFS connectivity
  std::vector<char> seen(n_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto& inc : adj_[v]) {
      if (!seen[inc.neighbor]) {
        seen[inc.neighbor] = 1;
        ++count;
        stack.push_back(inc.neighbor);
      }
    }
  }
  connected_ = (count == n_);
}

void require_connected(const Graph& g, const char* who) {
  if (!g.connected())
    throw Error(ErrorKind::Degenerate,
                std::string(who) + " requires a connected graph");
}

Graph build_knn_graph(const std::vector<double>& points, int n, int d, int k) {
  if (n < 2) throw_config("need at least 2 points");
  if (k < 1 || k >= n) throw_config("k must satisfy 1 <= k < n");
  if (static_cast<long long>(n) * d != static_cast<long long>(points.size()))
    throw_config("points size does not match n x d");

  // Exact k-NN by full sort per vertex; ties broken by lower index.
  std::vector<std::vector<int>> nn(n);
  std::vector<double> kth_dist(n);
  std::vector<std::pair<double, int>> cand(n - 1);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double r2 = 0.0;
      for (int t = 0; t < d; ++t) {
        double diff = points[static_cast<size_t>(i) * d + t] -
                      points[static_cast<size_t>(j) * d + t];
        r2 += diff * diff;
      }
      cand[m++] = {r2, j};
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    nn[i].reserve(k);
    for (int t = 0; t < k; ++t) nn[i].push_back(cand[t].second);
    kth_dist[i] = std::sqrt(cand[k - 1].first);
  }

  double d_k = std::accumulate(kth_dist.begin(), kth_dist.end(), 0.0) / n;
  double sigma2 = 3.0 * d_k * d_k;

  // Union symmetrization: keep (i, j) if either direction qualifies.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j : nn[i]) pairs.emplace_back(std::min(i, j), std::max(i, j));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [i, j] : pairs) {
    double r2 = 0.0;
    for (int t = 0; t < d; ++t) {
      double diff = points[static_cast<size_t>(i) * d + t] -
                    points[static_cast<size_t>(j) * d + t];
      r2 += diff * diff;
    }
    double w = (sigma2 > 0.0) ? std::exp(-r2 / sigma2) : 1.0;
    edges.push_back({i, j, w});
  }
  return Graph(n, std::move(edges));
}

static void check_partition(const Graph& g, const Partition& p) {
  if (p.subset.empty() || static_cast<int>(p.subset.size()) >= g.n())
    throw_degenerate("partition subset must be proper and nonempty");
  for (size_t i = 0; i < p.subset.size(); ++i) {
    if (p.subset[i] < 0 || p.subset[i] >= g.n())
      throw_config("partition vertex out of range");
    if (i > 0 && p.subset[i] <= p.subset[i - 1])
      throw_config("partition subset must be sorted and unique");
  }
}

double cut_value(const Graph& g, const Partition& p) {
  check_partition(g, p);
  std::vector<char> in(g.n(), 0);
  for (int v : p.subset) in[v] = 1;
  double cut = 0.0;
  for (const auto& e : g.edges())
    if (in[e.u] != in[e.v]) cut += e.w;
  return cut;
}

double balanced_cut_value(const Graph& g, const Partition& p) {
  double cut = cut_value(g, p);
  int s = static_cast<int>(p.subset.size());
  return cut / std::min(s, g.n() - s);
}

EdgeFunction gradient(const Graph& g, const VertexFunction& f) {
  if (static_cast<int>(f.size()) != g.n())
    throw_config("gradient: dimension mismatch");
  EdgeFunction out(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e)
    out[e] = f[g.edges()[e].v] - f[g.edges()[e].u];
  return out;
}

VertexFunction divergence(const Graph& g, const EdgeFunction& p) {
  if (static_cast<int>(p.size()) != g.edge_count())
    throw_config("divergence: dimension mismatch");
  VertexFunction out(g.n(), 0.0);
  for (int e = 0; e < g.edge_count(); ++e) {
    out[g.edges()[e].u] += p[e];
    out[g.edges()[e].v] -= p[e];
  }
  return out;
}

std::vector<std::vector<int>> connected_components(const Graph& g) {
  std::vector<int> comp(g.n(), -1);
  int nc = 0;
  for (int s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = nc;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const auto& inc : g.neighbors(v)) {
        if (comp[inc.neighbor] < 0) {
          comp[inc.neighbor] = nc;
          stack.push_back(inc.neighbor);
        }
      }
    }
    ++nc;
  }
  std::vector<std::vector<int>> out(nc);
  for (int v = 0; v < g.n(); ++v) out[comp[v]].push_back(v);
  return out;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
  std::vector<int> idx(g.n(), -1);
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] < 0 || vertices[i] >= g.n())
      throw_config("induced_subgraph: vertex out of range");
    idx[vertices[i]] = static_cast<int>(i);
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    if (idx[e.u] >= 0 && idx[e.v] >= 0)
      edges.push_back({idx[e.u], idx[e.v], e.w});
  return Graph(static_cast<int>(vertices.size()), std::move(edges));
}

Partition complement(const Graph& g, const Partition& p) {
  std::vector<char> in(g.n(), 0);
  for (int v : p.subset) in[v] = 1;
  Partition out;
  for (int v = 0; v < g.n(); ++v)
    if (!in[v]) out.subset.push_back(v);
  return out;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_data("cannot open graph file: " + path);
  std::string first;
  do {
    if (!std::getline(in, first)) throw_data("empty graph file: " + path);
  } while (first.empty());

  bool matrix_market = first.rfind("%%MatrixMarket", 0) == 0;
  if (matrix_market) {
    std::istringstream hdr(first);
    std::string tag, object, format, field, symmetry;
    hdr >> tag >> object >> format >> field >> symmetry;
    if (object != "matrix" || format != "coordinate" || symmetry != "symmetric")
      throw_data("unsupported MatrixMarket header: " + first);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream sz(line);
    int rows = 0, cols = 0;
    long long nnz = 0;
    if (!(sz >> rows >> cols >> nnz) || rows != cols)
      throw_data("bad MatrixMarket size line");
    std::vector<Edge> edges;
    for (long long t = 0; t < nnz; ++t) {
      int i, j;
      double w;
      if (!(in >> i >> j >> w)) throw_data("truncated MatrixMarket file");
      if (i == j) continue;  // skip diagonal entries
      edges.push_back({i - 1, j - 1, w});
    }
    return Graph(rows, std::move(edges));
  }

  std::istringstream hdr(first);
  int n = 0;
  long long m = 0;
  if (!(hdr >> n >> m)) throw_data("bad edge-list header (expected 'n m')");
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(m));
  for (long long t = 0; t < m; ++t) {
    int u, v;
    double w;
    if (!(in >> u >> v >> w)) throw_data("truncated edge list");
    edges.push_back({u, v, w});
  }
  return Graph(n, std::move(edges));
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_data("cannot write graph file: " + path);
  out.precision(17);
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

}  // namespace tvcut
