#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "test_helpers.hpp"
#include "tvcut/balanced_cut.hpp"
#include "tvcut/datasets.hpp"
#include "tvcut/oracle.hpp"

using namespace tvcut;
using testing::barbell_graph;
using testing::cycle_graph;
using testing::random_connected_graph;
using testing::random_vector;

TEST_CASE("initialization yields zero-median unit-norm vectors") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 10; ++t) {
    Graph g = random_connected_graph(rng, 10 + static_cast<int>(rng() % 40));
    for (auto method : {InitMethod::RandomZeroMedian,
                        InitMethod::SpectralSecondEigenvector}) {
      VertexFunction f = initialize(g, method, rng());
      CHECK_FALSE(is_constant(f));
      CHECK(median(f) == 0.0);
      CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("initialization is deterministic per seed") {
  std::mt19937_64 rng(73);
  Graph g = random_connected_graph(rng, 25);
  for (auto method : {InitMethod::RandomZeroMedian,
                      InitMethod::SpectralSecondEigenvector}) {
    VertexFunction a = initialize(g, method, 12345);
    VertexFunction b = initialize(g, method, 12345);
    CHECK(a == b);  // bitwise
  }
  Graph disconnected(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK_THROWS_AS(
      initialize(disconnected, InitMethod::RandomZeroMedian, 1), Error);
}

TEST_CASE("spectral initialization separates the ends of a 3-path") {
  // Second Laplacian eigenvector of the path 0-1-2 is antisymmetric: the two
  // endpoints get opposite signs and the middle vertex sits at the median 0.
  Graph path(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  VertexFunction f = initialize(path, InitMethod::SpectralSecondEigenvector, 1);
  CHECK(f[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(f[0] * f[2] < 0.0);
  CHECK(std::abs(f[0]) == doctest::Approx(std::abs(f[2])).epsilon(1e-9));
  CHECK(std::abs(f[0]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("outer steps strictly decrease the energy when the condition fires") {
  std::mt19937_64 rng(79);
  for (int t = 0; t < 25; ++t) {
    Graph g = random_connected_graph(rng, 8 + static_cast<int>(rng() % 43));
    AlgorithmVariant variant;
    variant.kind = (t % 2 == 0) ? AlgorithmVariant::Kind::AdaptiveMedian
                                : AlgorithmVariant::Kind::AdaptiveMedianFree;
    OuterState state = make_outer_state(
        g, initialize(g, InitMethod::RandomZeroMedian, rng()));
    for (int k = 0; k < 20; ++k) {
      double e_before = state.energy;
      if (!outer_step(g, state, variant, RofSolverKind::PrimalDual, 1500,
                      nullptr))
        break;
      CHECK(median(state.f_k) == 0.0);
      CHECK(l2_norm(state.f_k) == doctest::Approx(1.0).epsilon(1e-12));
      if (state.terminated_by == RofTermination::AdaptiveConditionMet)
        CHECK(state.energy < e_before);
      // Iterates stay bounded relative to the unit-norm f^k.
      CHECK(l2_norm(state.h_k) <= 10.0);
    }
  }
}

TEST_CASE("adaptive runs produce strictly decreasing energy traces") {
  std::mt19937_64 rng(83);
  for (int t = 0; t < 20; ++t) {
    Graph g = random_connected_graph(rng, 10 + static_cast<int>(rng() % 60));
    AlgorithmVariant variant;
    variant.kind = (t % 2 == 0) ? AlgorithmVariant::Kind::AdaptiveMedian
                                : AlgorithmVariant::Kind::AdaptiveMedianFree;
    OuterTrace trace =
        run(g, initialize(g, InitMethod::RandomZeroMedian, rng()), variant, {});
    REQUIRE(!trace.records.empty());
    for (const auto& rec : trace.records) CHECK(rec.energy_next < rec.energy);
    CHECK(trace.final_energy <= trace.initial_energy);
  }
}

TEST_CASE("converged adaptive runs end with vanishing increments") {
  std::mt19937_64 rng(89);
  for (int t = 0; t < 5; ++t) {
    Graph g = random_connected_graph(rng, 30 + static_cast<int>(rng() % 70));
    AlgorithmVariant variant;
    variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
    // A tight outer tolerance and a large cap let every instance run to its
    // limit point; the final prox step, its median, and the normalized-step
    // distance must all have shrunk to numerical-noise scale by then.
    RunParams params;
    params.tol = 1e-13;
    params.max_outer = 50000;
    OuterTrace trace = run(
        g, initialize(g, InitMethod::RandomZeroMedian, rng()), variant, params);
    REQUIRE(!trace.records.empty());
    const OuterRecord& last = trace.records.back();
    CHECK(last.step_norm <= 1e-5);
    CHECK(std::abs(last.median_h) <= 1e-5);
    CHECK(last.f_step_norm <= 1e-6);
  }
}

TEST_CASE("the 4-cycle partitions into opposite edges at the optimum") {
  Graph g = cycle_graph(4);
  AlgorithmVariant variant;
  variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
  OuterTrace trace =
      run(g, initialize(g, InitMethod::SpectralSecondEigenvector, 3), variant, {});
  Partition p = threshold_to_partition(g, trace.final_f);
  CHECK(balanced_cut_value(g, p) ==
        doctest::Approx(oracle::brute_force_balanced_cut(g).value));
  CHECK(balanced_cut_value(g, p) == doctest::Approx(1.0));
}

TEST_CASE("the barbell graph splits at the bridge") {
  Graph g = barbell_graph();
  AlgorithmVariant variant;
  variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
  OuterTrace trace =
      run(g, initialize(g, InitMethod::SpectralSecondEigenvector, 5), variant, {});
  Partition p = threshold_to_partition(g, trace.final_f);
  CHECK(balanced_cut_value(g, p) == doctest::Approx(0.2));
  std::set<int> side(p.subset.begin(), p.subset.end());
  bool first_clique = side == std::set<int>{0, 1, 2, 3, 4};
  bool second_clique = side == std::set<int>{5, 6, 7, 8, 9};
  CHECK((first_clique || second_clique));
}

TEST_CASE("restarting from a converged point signals a critical point") {
  Graph g = barbell_graph();
  AlgorithmVariant variant;
  variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
  OuterTrace first =
      run(g, initialize(g, InitMethod::SpectralSecondEigenvector, 5), variant, {});
  // Re-run from the converged function: no further descent is possible.
  OuterTrace second = run(g, first.final_f, variant, {});
  CHECK(second.final_energy <= first.final_energy + 1e-9);
  CHECK(second.records.size() <= 5);
}

TEST_CASE("threshold sweep returns the best level set") {
  Graph g = cycle_graph(4);
  // An indicator rounds to itself (or its complement, same value).
  Partition p = threshold_to_partition(g, {1.0, 1.0, 0.0, 0.0});
  double v = balanced_cut_value(g, p);
  CHECK(v == doctest::Approx(1.0));

  // The sweep dominates the median-threshold rounding on random functions.
  std::mt19937_64 rng(97);
  for (int t = 0; t < 30; ++t) {
    Graph h = random_connected_graph(rng, 6 + static_cast<int>(rng() % 7));
    VertexFunction f = random_vector(rng, h.n());
    if (is_constant(f)) continue;
    Partition best = threshold_to_partition(h, f);
    double med = median(f);
    Partition med_set;
    for (int i = 0; i < h.n(); ++i)
      if (f[i] > med) med_set.subset.push_back(i);
    if (med_set.subset.empty() ||
        static_cast<int>(med_set.subset.size()) == h.n())
      continue;
    CHECK(balanced_cut_value(h, best) <=
          balanced_cut_value(h, med_set) + 1e-12);
  }
  CHECK_THROWS_AS(threshold_to_partition(g, VertexFunction(4, 1.0)), Error);
}

TEST_CASE("terminal partition value is unchanged by complementing") {
  std::mt19937_64 rng(101);
  Graph g = random_connected_graph(rng, 20);
  AlgorithmVariant variant;
  variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
  OuterTrace trace =
      run(g, initialize(g, InitMethod::RandomZeroMedian, rng()), variant, {});
  Partition p = threshold_to_partition(g, trace.final_f);
  CHECK(balanced_cut_value(g, p) ==
        doctest::Approx(balanced_cut_value(g, complement(g, p))));
}

TEST_CASE("two-way recursive bisection matches a direct run") {
  std::mt19937_64 rng(103);
  Graph g = random_connected_graph(rng, 24);
  BisectParams params;
  params.variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
  params.init = InitMethod::SpectralSecondEigenvector;
  params.seed = 9;
  std::vector<int> labels = recursive_bisection(g, 2, params);
  OuterTrace trace = run(g, initialize(g, params.init, 9), params.variant,
                         params.run);
  Partition p = threshold_to_partition(g, trace.final_f);
  std::vector<int> expected(g.n(), 0);
  for (int v : p.subset) expected[v] = 1;
  // Same bipartition up to label swap.
  bool same = labels == expected;
  std::vector<int> flipped = expected;
  for (int& x : flipped) x = 1 - x;
  CHECK((same || labels == flipped));
}

TEST_CASE("recursive bisection recovers well-separated blobs exactly") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    PointCloud pc = gaussian_blobs(300, 3, 3, 20.0, 0.5, seed);
    Graph g = build_knn_graph(pc.data, pc.n, pc.d, 12);
    if (!g.connected()) continue;  // extremely unlikely at this separation
    BisectParams params;
    params.variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
    params.seed = seed;
    std::vector<int> labels = recursive_bisection(g, 3, params);
    // Exact recovery up to label permutation: clusters and true classes
    // partition the points identically.
    std::map<int, std::set<int>> by_cluster;
    for (int i = 0; i < pc.n; ++i) by_cluster[labels[i]].insert(pc.labels[i]);
    REQUIRE(by_cluster.size() == 3);
    for (const auto& [cluster, truths] : by_cluster)
      CHECK(truths.size() == 1);
  }
}

TEST_CASE("recursive bisection degenerate cluster counts") {
  Graph g = cycle_graph(6);
  BisectParams params;
  params.variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
  params.seed = 3;
  std::vector<int> singletons = recursive_bisection(g, 6, params);
  std::set<int> distinct(singletons.begin(), singletons.end());
  CHECK(distinct.size() == 6);
  CHECK_THROWS_AS(recursive_bisection(g, 1, params), Error);
}
