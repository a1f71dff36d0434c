#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "test_helpers.hpp"
#include "tvcut/energy.hpp"

using namespace tvcut;
using testing::cycle_graph;
using testing::random_connected_graph;
using testing::random_vector;

TEST_CASE("graph construction rejects invalid edges") {
  CHECK_THROWS_AS(Graph(3, {{0, 0, 1.0}}), Error);        // self-loop
  CHECK_THROWS_AS(Graph(3, {{0, 1, 0.0}}), Error);        // zero weight
  CHECK_THROWS_AS(Graph(3, {{0, 1, -1.0}}), Error);       // negative weight
  CHECK_THROWS_AS(Graph(2, {{0, 5, 1.0}}), Error);        // out of range
  CHECK_THROWS_AS(Graph(3, {{0, 1, 1.0}, {0, 1, 2.0}}), Error);  // duplicate
}

TEST_CASE("graph stores undirected edges once with u < v") {
  Graph g(3, {{1, 0, 2.0}, {2, 1, 3.0}});
  CHECK(g.n() == 3);
  CHECK(g.edge_count() == 2);
  for (const Edge& e : g.edges()) CHECK(e.u < e.v);
  CHECK(g.weighted_degree(1) == doctest::Approx(5.0));
  CHECK(g.degree(1) == 2);
  CHECK(g.max_degree() == 2);
  CHECK(g.connected());
}

TEST_CASE("connectivity flag and components") {
  Graph disconnected(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK_FALSE(disconnected.connected());
  auto comps = connected_components(disconnected);
  CHECK(comps.size() == 2);
  CHECK_THROWS_AS(require_connected(disconnected, "test"), Error);
}

TEST_CASE("cut values on small graphs") {
  Graph cycle = cycle_graph(4);
  // Adjacent pair on a 4-cycle: exactly two crossing edges.
  CHECK(cut_value(cycle, {{0, 1}}) == doctest::Approx(2.0));
  CHECK(balanced_cut_value(cycle, {{0, 1}}) == doctest::Approx(1.0));

  Graph k3(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
  CHECK(cut_value(k3, {{0}}) == doctest::Approx(2.0));
  CHECK(balanced_cut_value(k3, {{0}}) == doctest::Approx(2.0));

  Graph pair(2, {{0, 1, 0.7}});
  CHECK(balanced_cut_value(pair, {{0}}) == doctest::Approx(0.7));

  CHECK_THROWS_AS(cut_value(cycle, {{}}), Error);
  CHECK_THROWS_AS(cut_value(cycle, {{0, 1, 2, 3}}), Error);
}

TEST_CASE("cut is symmetric under complement") {
  std::mt19937_64 rng(7);
  Graph g = random_connected_graph(rng, 12);
  Partition s{{0, 2, 5, 7}};
  Partition sc = complement(g, s);
  CHECK(cut_value(g, s) == doctest::Approx(cut_value(g, sc)));
  CHECK(balanced_cut_value(g, s) == doctest::Approx(balanced_cut_value(g, sc)));
}

TEST_CASE("disjoint-union cut equals the component cut") {
  // g1 on {0,1,2}, g2 on {3,4}; S = S1 union V(g2) only cuts inside g1.
  Graph g(5, {{0, 1, 1.0}, {1, 2, 2.0}, {3, 4, 1.5}});
  Graph g1(3, {{0, 1, 1.0}, {1, 2, 2.0}});
  CHECK(cut_value(g, {{0, 3, 4}}) == doctest::Approx(cut_value(g1, {{0}})));
}

TEST_CASE("gradient and divergence definitions") {
  Graph pair(2, {{0, 1, 1.0}});
  VertexFunction f{0.0, 2.0};
  EdgeFunction grad = gradient(pair, f);
  CHECK(grad.size() == 1);
  CHECK(grad[0] == doctest::Approx(2.0));

  Graph g = cycle_graph(5);
  EdgeFunction zero_grad = gradient(g, VertexFunction(5, 3.25));
  for (double v : zero_grad) CHECK(v == 0.0);

  CHECK_THROWS_AS(gradient(g, VertexFunction(3, 0.0)), Error);
  CHECK_THROWS_AS(divergence(g, EdgeFunction(2, 0.0)), Error);
}

TEST_CASE("gradient and divergence are negative adjoints") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    Graph g = random_connected_graph(rng, 30, 0.3);
    VertexFunction f = random_vector(rng, g.n());
    EdgeFunction p(g.edge_count());
    for (double& x : p) x = random_vector(rng, 1)[0];
    EdgeFunction gf = gradient(g, f);
    double lhs = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) lhs += gf[e] * p[e];
    double rhs = dot(f, divergence(g, p));
    CHECK(std::abs(lhs + rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("knn graph of two coincident points") {
  std::vector<double> pts{1.0, 2.0, 1.0, 2.0};
  Graph g = build_knn_graph(pts, 2, 2, 1);
  CHECK(g.edge_count() == 1);
  CHECK(g.edges()[0].w == doctest::Approx(1.0));
}

TEST_CASE("knn graph of four collinear points") {
  // Unit spacing, k = 1: every nearest-neighbor distance is 1, so the scale
  // is 3 and each chain edge has weight exp(-1/3).
  std::vector<double> pts{0.0, 1.0, 2.0, 3.0};
  Graph g = build_knn_graph(pts, 4, 1, 1);
  REQUIRE(g.edge_count() == 3);
  double w = std::exp(-1.0 / 3.0);
  for (int e = 0; e < 3; ++e) {
    CHECK(g.edges()[e].u == e);
    CHECK(g.edges()[e].v == e + 1);
    CHECK(g.edges()[e].w == doctest::Approx(w));
  }
}

TEST_CASE("knn graph validation") {
  std::vector<double> pts{0.0, 1.0};
  CHECK_THROWS_AS(build_knn_graph(pts, 2, 1, 0), Error);
  CHECK_THROWS_AS(build_knn_graph(pts, 2, 1, 2), Error);
  CHECK_THROWS_AS(build_knn_graph({0.0}, 1, 1, 1), Error);
}

TEST_CASE("knn graph matches a brute-force neighbor enumeration") {
  std::mt19937_64 rng(23);
  int n = 120, d = 3, k = 6;
  std::vector<double> pts(static_cast<size_t>(n) * d);
  for (double& x : pts) x = random_vector(rng, 1)[0];
  Graph g = build_knn_graph(pts, n, d, k);

  auto dist2 = [&](int i, int j) {
    double s = 0.0;
    for (int c = 0; c < d; ++c) {
      double diff = pts[i * d + c] - pts[j * d + c];
      s += diff * diff;
    }
    return s;
  };
  // Brute force: sort every point's neighbors, ties by lower index.
  std::vector<std::vector<int>> nearest(n);
  double dk_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<int> order;
    for (int j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double da = dist2(i, a), db = dist2(i, b);
      return da != db ? da < db : a < b;
    });
    nearest[i].assign(order.begin(), order.begin() + k);
    dk_sum += std::sqrt(dist2(i, order[k - 1]));
  }
  double sigma2 = 3.0 * (dk_sum / n) * (dk_sum / n);

  std::set<std::pair<int, int>> expected;
  for (int i = 0; i < n; ++i)
    for (int j : nearest[i])
      expected.insert({std::min(i, j), std::max(i, j)});

  REQUIRE(g.edge_count() == static_cast<int>(expected.size()));
  for (const Edge& e : g.edges()) {
    CHECK(expected.count({e.u, e.v}) == 1);
    CHECK(e.w == doctest::Approx(std::exp(-dist2(e.u, e.v) / sigma2)));
  }
}

TEST_CASE("graph save and load round trip") {
  std::mt19937_64 rng(31);
  Graph g = random_connected_graph(rng, 15, 0.4);
  std::string path = "test_graph_roundtrip.txt";
  save_graph(g, path);
  Graph loaded = load_graph(path);
  REQUIRE(loaded.n() == g.n());
  REQUIRE(loaded.edge_count() == g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    CHECK(loaded.edges()[e].u == g.edges()[e].u);
    CHECK(loaded.edges()[e].v == g.edges()[e].v);
    CHECK(loaded.edges()[e].w == doctest::Approx(g.edges()[e].w));
  }
  std::remove(path.c_str());
}

TEST_CASE("load_graph reads MatrixMarket coordinate files") {
  std::string path = "test_graph_mm.mtx";
  {
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real symmetric\n"
        << "3 3 2\n"
        << "2 1 1.5\n"
        << "3 2 2.5\n";
  }
  Graph g = load_graph(path);
  CHECK(g.n() == 3);
  REQUIRE(g.edge_count() == 2);
  CHECK(g.edges()[0].u == 0);
  CHECK(g.edges()[0].v == 1);
  CHECK(g.edges()[0].w == doctest::Approx(1.5));
  std::remove(path.c_str());
}

TEST_CASE("induced subgraph renumbers vertices") {
  Graph g = cycle_graph(5);
  Graph sub = induced_subgraph(g, {1, 2, 3});
  CHECK(sub.n() == 3);
  CHECK(sub.edge_count() == 2);  // edges 1-2 and 2-3 of the cycle
  for (const Edge& e : sub.edges()) CHECK(e.v < 3);
}
