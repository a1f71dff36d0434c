#include "tvcut/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <algorithm>
#include <random>
#include <sstream>
#include <thread>

#include "tvcut/bench.hpp"
#include "tvcut/oracle.hpp"

namespace tvcut {

namespace {

using Clock = std::chrono::steady_clock;

Graph random_er_graph(std::mt19937_64& rng, int n, double p = 0.5) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> weight(0.5, 1.5);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unit(rng) < p) edges.push_back({i, j, weight(rng)});
    Graph g(n, std::move(edges));
    if (g.connected()) return g;
  }
  throw_numerical("failed to sample a connected random graph");
}

// Zero-median unit-norm start derived from a uniformly random bipartition
// indicator. On small graphs these starts explore the bipartition space far
// better than smooth random vectors, whose runs tend to share a basin.
VertexFunction random_indicator_start(std::mt19937_64& rng, int n) {
  VertexFunction f(n, 0.0);
  int ones = 0;
  while (ones == 0 || ones == n) {
    ones = 0;
    for (int i = 0; i < n; ++i) {
      f[i] = (rng() & 1) ? 1.0 : 0.0;
      if (f[i] == 1.0) ++ones;
    }
  }
  double med = median(f);
  double norm = 0.0;
  for (double& x : f) {
    x -= med;
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : f) x /= norm;
  return f;
}

Graph random_knn_graph(std::mt19937_64& rng, int n) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    PointCloud pc = gaussian_blobs(n, 2, 5, 4.0, 1.0, rng());
    int k = 8 + 4 * attempt;
    if (k >= n) k = n - 1;
    Graph g = build_knn_graph(pc.data, pc.n, pc.d, k);
    if (g.connected()) return g;
  }
  throw_numerical("failed to build a connected k-NN graph");
}

struct Checker {
  const VerifyOptions& options;
  std::ostream* progress;
  std::vector<CheckResult> results;

  void run(const std::string& name,
           const std::function<void(std::ostringstream&)>& body) {
    CheckResult r;
    r.name = name;
    auto t0 = Clock::now();
    std::ostringstream detail;
    try {
      body(detail);
      r.passed = true;
    } catch (const std::exception& e) {
      r.passed = false;
      detail << (detail.tellp() > 0 ? "; " : "") << e.what();
    }
    r.detail = detail.str();
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (progress)
      *progress << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  ("
                << r.seconds << " s)"
                << (r.detail.empty() ? "" : "  -- " + r.detail) << std::endl;
    results.push_back(std::move(r));
  }

  void skip(const std::string& name, const std::string& why) {
    CheckResult r;
    r.name = name;
    r.passed = true;
    r.skipped = true;
    r.detail = why;
    if (progress) *progress << "SKIP  " << name << "  -- " << why << std::endl;
    results.push_back(std::move(r));
  }
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw_numerical(msg);
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options,
                                          std::ostream* progress) {
  Checker checker{options, progress, {}};
  const int scale = options.quick ? 5 : 1;

  checker.run("monotonicity: adaptive outer energies strictly decrease",
              [&](std::ostringstream& detail) {
    std::mt19937_64 rng(options.seed);
    int trials = 100 / scale;
    int violations = 0, total_iters = 0;
    for (int t = 0; t < trials; ++t) {
      int n = 50 + static_cast<int>(rng() % 451);
      Graph g = random_knn_graph(rng, n);
      AlgorithmVariant variant;
      variant.kind = (t % 2 == 0) ? AlgorithmVariant::Kind::AdaptiveMedian
                                  : AlgorithmVariant::Kind::AdaptiveMedianFree;
      variant.theta = options.theta;
      InitMethod init = (t % 4 < 2) ? InitMethod::RandomZeroMedian
                                    : InitMethod::SpectralSecondEigenvector;
      VertexFunction f0 = initialize(g, init, rng());
      OuterTrace trace = run(g, std::move(f0), variant, {});
      for (const auto& rec : trace.records) {
        ++total_iters;
        if (!(rec.energy_next < rec.energy)) ++violations;
      }
    }
    detail << trials << " runs, " << total_iters << " outer iterations, "
           << violations << " violations";
    require(violations == 0, "energy increased in an adaptive run");
  });

  checker.run("energy inequality: fired stops and the exact-minimizer bound",
              [&](std::ostringstream& detail) {
    std::mt19937_64 rng(options.seed + 1);
    // (a) recompute the stopping inequality at every fired adaptive stop
    int fired = 0;
    for (int t = 0; t < 20 / scale + 1; ++t) {
      Graph g = random_er_graph(rng, 8 + static_cast<int>(rng() % 20));
      AlgorithmVariant variant;
      variant.kind = (t % 2 == 0) ? AlgorithmVariant::Kind::AdaptiveMedian
                                  : AlgorithmVariant::Kind::AdaptiveMedianFree;
      variant.theta = options.theta;
      OuterState state =
          make_outer_state(g, initialize(g, InitMethod::RandomZeroMedian, rng()));
      EdgeFunction dual;
      for (int k = 0; k < 30; ++k) {
        VertexFunction f_before = state.f_k;
        Subgradient v_before = zero_mean_subgradient(f_before);
        if (!outer_step(g, state, variant, RofSolverKind::PrimalDual, 1500,
                        &dual))
          break;
        if (state.terminated_by == RofTermination::AdaptiveConditionMet) {
          ++fired;
          double gap =
              variant.kind == AlgorithmVariant::Kind::AdaptiveMedian
                  ? energy_inequality_gap(g, f_before, state.h_k, variant.theta)
                  : median_free_gap(g, f_before, v_before, state.h_k,
                                    variant.theta);
          require(gap > 0.0, "recorded adaptive stop violates its inequality");
          // the median-free condition implies the median one
          require(energy_inequality_gap(g, f_before, state.h_k,
                                        variant.theta) > 0.0,
                  "median-free stop does not imply the energy inequality");
        }
      }
    }
    // (b) exact minimizers satisfy the un-relaxed inequality to 1e-9
    int instances = 50 / scale;
    for (int t = 0; t < instances; ++t) {
      Graph g = random_er_graph(rng, 5 + static_cast<int>(rng() % 46));
      VertexFunction f = initialize(g, InitMethod::RandomZeroMedian, rng());
      Subgradient v = zero_mean_subgradient(f);
      VertexFunction shifted = f;
      for (int i = 0; i < g.n(); ++i) shifted[i] += v.values[i];
      double lambda = balance_energy(g, f);
      RofProblem problem{&g, lambda, shifted, f};
      auto ref = oracle::high_accuracy_rof(problem);
      require(ref.converged, "high-accuracy reference did not converge");
      require(!is_constant(ref.h), "exact ROF minimizer is constant");
      double med_h = median(ref.h);
      double denom = 0.0, diff2 = 0.0;
      for (int i = 0; i < g.n(); ++i) {
        denom += std::abs(ref.h[i] - med_h);
        double d = ref.h[i] - f[i];
        diff2 += d * d;
      }
      double rhs = balance_energy(g, ref.h) + lambda * diff2 / denom;
      require(lambda >= rhs - 1e-9, "exact minimizer violates the energy "
                                    "inequality beyond 1e-9");
    }
    detail << fired << " fired stops checked, " << instances
           << " exact-minimizer instances";
  });

  checker.run("rof correctness: closed form, cross-solver, adjointness",
              [&](std::ostringstream& detail) {
    std::mt19937_64 rng(options.seed + 2);
    std::uniform_real_distribution<double> unit(0.1, 2.0);
    std::uniform_real_distribution<double> lam(0.1, 5.0);
    std::uniform_real_distribution<double> val(-3.0, 3.0);

    double worst_closed = 0.0;
    int n_two_node = 1000 / scale;
    for (int t = 0; t < n_two_node; ++t) {
      double w = unit(rng), lambda = lam(rng), g1 = val(rng), g2 = val(rng);
      Graph g(2, {{0, 1, w}});
      auto [h1, h2] = oracle::rof_two_node_closed_form(w, lambda, g1, g2);
      RofProblem problem{&g, lambda, {g1, g2}, {g1, g2}};
      for (auto solver : {RofSolverKind::ForwardBackwardDual,
                          RofSolverKind::PrimalDual}) {
        auto sol = solve_rof(problem, solver,
                             StoppingPolicy::fixed(1e-14, 100000));
        worst_closed = std::max({worst_closed, std::abs(sol.h[0] - h1),
                                 std::abs(sol.h[1] - h2)});
      }
    }
    require(worst_closed <= 1e-10, "two-node closed form mismatch " +
                                       std::to_string(worst_closed));

    double worst_cross = 0.0;
    for (int t = 0; t < 50 / scale; ++t) {
      Graph g = random_er_graph(rng, 20, 0.3);
      VertexFunction gv(20);
      for (double& x : gv) x = val(rng);
      RofProblem problem{&g, lam(rng), gv, gv};
      auto a = solve_rof(problem, RofSolverKind::ForwardBackwardDual,
                         StoppingPolicy::fixed(1e-13, 500000));
      auto b = solve_rof(problem, RofSolverKind::PrimalDual,
                         StoppingPolicy::fixed(1e-13, 500000));
      for (int i = 0; i < 20; ++i)
        worst_cross = std::max(worst_cross, std::abs(a.h[i] - b.h[i]));
    }
    require(worst_cross <= 1e-7,
            "cross-solver disagreement " + std::to_string(worst_cross));

    double worst_adjoint = 0.0;
    for (int t = 0; t < 100 / scale; ++t) {
      Graph g = random_er_graph(rng, 5 + static_cast<int>(rng() % 30), 0.4);
      VertexFunction f(g.n());
      EdgeFunction p(g.edge_count());
      for (double& x : f) x = val(rng);
      for (double& x : p) x = val(rng);
      double lhs = 0.0;
      EdgeFunction gf = gradient(g, f);
      for (int e = 0; e < g.edge_count(); ++e) lhs += gf[e] * p[e];
      double rhs = dot(f, divergence(g, p));
      double scale_ref = std::max(1.0, std::abs(lhs));
      worst_adjoint = std::max(worst_adjoint, std::abs(lhs + rhs) / scale_ref);
    }
    require(worst_adjoint <= 1e-12,
            "adjointness residual " + std::to_string(worst_adjoint));
    detail << "closed-form err " << worst_closed << ", cross-solver err "
           << worst_cross << ", adjointness " << worst_adjoint;
  });

  checker.run("relaxation equivalence: E(indicator) = 2 C(S) and exact optimum",
              [&](std::ostringstream& detail) {
    std::mt19937_64 rng(options.seed + 3);
    double worst = 0.0;
    for (int t = 0; t < 50 / scale; ++t) {
      Graph g = random_er_graph(rng, 4 + static_cast<int>(rng() % 7));
      auto report = oracle::check_relaxation_equivalence(g);
      worst = std::max(worst, report.max_deviation);
      require(report.max_deviation <= 1e-12, "indicator/cut deviation " +
                                                 std::to_string(report.max_deviation));
      require(report.exact_match,
              "best indicator energy != 2 x brute-force optimum");
    }
    detail << "max deviation " << worst;
  });

  checker.run("oracle quality: best-of-10 restarts vs brute force",
              [&](std::ostringstream& detail) {
    std::mt19937_64 rng(options.seed + 4);
    int trials = 50 / scale, hits = 0;
    for (int t = 0; t < trials; ++t) {
      Graph g = random_er_graph(rng, 6 + static_cast<int>(rng() % 7));
      double opt = oracle::brute_force_balanced_cut(g).value;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < 10; ++r) {
        // One spectral start, then random bipartition starts; alternate the
        // two adaptive variants so both contribute to the best-of-10.
        VertexFunction f0 =
            r == 0 ? initialize(g, InitMethod::SpectralSecondEigenvector, rng())
                   : random_indicator_start(rng, g.n());
        AlgorithmVariant variant;
        variant.kind = (r % 2 == 0) ? AlgorithmVariant::Kind::AdaptiveMedianFree
                                    : AlgorithmVariant::Kind::AdaptiveMedian;
        variant.theta = options.theta;
        OuterTrace trace = run(g, std::move(f0), variant, {});
        if (is_constant(trace.final_f)) continue;
        Partition p = threshold_to_partition(g, trace.final_f);
        best = std::min(best, balanced_cut_value(g, p));
      }
      require(best >= opt - 1e-12, "reported value below brute-force optimum");
      if (best <= opt + 1e-12) ++hits;
    }
    detail << hits << "/" << trials << " optima reached";
    require(hits * 5 >= trials * 4, "fewer than 80% of optima reached");
  });

  RunConfig moons;
  moons.gen = "two-moons";
  moons.gen_n = 2000;
  moons.k = 5;
  moons.variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
  moons.variant.theta = options.theta;
  moons.trials = options.quick ? 3 : 10;
  moons.seed = options.seed + 5;
  moons.jobs = std::clamp(static_cast<int>(std::thread::hardware_concurrency()),
                          1, 4);

  checker.run("two-moons benchmark: error band and inner-iteration parity",
              [&](std::ostringstream& detail) {
    BenchReport report = run_bench(moons);
    detail << "adaptive " << report.mean_error_adaptive << "%, baseline "
           << report.mean_error_baseline << "%, matched inner "
           << report.mean_matched_inner_adaptive << " vs "
           << report.mean_matched_inner_baseline;
    require(report.mean_error_adaptive >= 5.0 &&
                report.mean_error_adaptive <= 15.0,
            "adaptive error outside [5, 15]%");
    require(report.mean_error_baseline >= 5.0 &&
                report.mean_error_baseline <= 15.0,
            "baseline error outside [5, 15]%");
    require(report.mean_matched_inner_baseline > 0,
            "no matched-energy iteration counts");
    require(report.mean_matched_inner_adaptive <=
                report.mean_matched_inner_baseline,
            "adaptive used more inner iterations than the matched baseline");
  });

  checker.run("adaptive speed advantage: <= 0.75x baseline inner iterations",
              [&](std::ostringstream& detail) {
    double worst_ratio = 0.0;
    for (int which = 0; which < 2; ++which) {
      RunConfig config = moons;
      if (which == 1) {
        // Three blobs cut into two clusters: the 1-vs-2 split landscape has
        // several competing critical points, so the comparison is not decided
        // by a single near-exact inner solve.
        config.gen = "blobs";
        config.gen_n = 2000;
        config.gen_dim = 10;
        config.gen_classes = 3;
        config.gen_separation = 4.5;
        config.gen_noise = 1.0;
        config.k = 10;
      }
      config.seed = options.seed + 6 + which;
      BenchReport report = run_bench(config);
      double matched_a = 0, matched_b = 0;
      for (const auto& p : report.pairs) {
        matched_a += static_cast<double>(p.matched_inner_adaptive);
        matched_b += static_cast<double>(p.matched_inner_baseline);
      }
      require(matched_b > 0, "no matched-energy iteration counts");
      double ratio = matched_a / matched_b;
      worst_ratio = std::max(worst_ratio, ratio);
      detail << (which == 0 ? "two-moons ratio " : ", blobs ratio ") << ratio;
      require(ratio <= 0.75, "adaptive/baseline inner-iteration ratio " +
                                 std::to_string(ratio) + " exceeds 0.75");
    }
  });

  if (!options.mnist_images.empty() || !options.usps_csv.empty()) {
    checker.run("10-class recursive bisection on user-supplied data",
                [&](std::ostringstream& detail) {
      if (!options.mnist_images.empty()) {
        RunConfig config;
        config.idx_images = options.mnist_images;
        config.idx_labels = options.mnist_labels;
        config.pca = 50;
        config.k = 10;
        config.classes = 10;
        config.variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
        config.variant.theta = options.theta;
        config.seed = options.seed + 8;
        TrialResult r = run_single(config, config.seed);
        detail << "MNIST error " << r.error_pct << "%";
        require(std::abs(r.error_pct - 11.76) <= 3.0,
                "MNIST error outside 11.76 +/- 3");
      }
      if (!options.usps_csv.empty()) {
        RunConfig config;
        config.points_path = options.usps_csv;
        config.csv_first_column_label = true;
        config.pca = 50;
        config.k = 10;
        config.classes = 10;
        config.variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
        config.variant.theta = options.theta;
        config.seed = options.seed + 9;
        TrialResult r = run_single(config, config.seed);
        detail << (detail.tellp() > 0 ? ", " : "") << "USPS error "
               << r.error_pct << "%";
        require(std::abs(r.error_pct - 4.11) <= 3.0,
                "USPS error outside 4.11 +/- 3");
      }
    });
  } else {
    checker.skip("10-class recursive bisection on user-supplied data",
                 "no MNIST/USPS files provided");
  }

  return checker.results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace tvcut
