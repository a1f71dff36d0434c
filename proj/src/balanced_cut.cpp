#include "tvcut/balanced_cut.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

namespace tvcut {

namespace {

void subtract_median_and_normalize(VertexFunction& f) {
  double med = median(f);
  for (double& x : f) x -= med;
  double norm = l2_norm(f);
  if (norm == 0.0) throw_degenerate("cannot normalize a constant function");
  for (double& x : f) x /= norm;
}

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  uint64_t x = seed ^ (a * 0x9E3779B97F4A7C15ULL) ^ (b * 0xBF58476D1CE4E5B9ULL);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

VertexFunction random_zero_median(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    VertexFunction f(n);
    for (double& x : f) x = normal(rng);
    if (is_constant(f)) continue;
    subtract_median_and_normalize(f);
    return f;
  }
  throw_numerical("random initialization kept producing constant vectors");
}

// Second eigenvector of the normalized Laplacian via power iteration on
// 2I - L_sym with the known top eigenvector D^{1/2} 1 deflated out.
VertexFunction spectral_second_eigenvector(const Graph& g, uint64_t seed) {
  int n = g.n();
  VertexFunction sqrt_deg(n);
  for (int i = 0; i < n; ++i) {
    double d = g.weighted_degree(i);
    if (d <= 0.0) throw_degenerate("isolated vertex in spectral init");
    sqrt_deg[i] = std::sqrt(d);
  }
  VertexFunction u1 = sqrt_deg;
  double u1n = l2_norm(u1);
  for (double& x : u1) x /= u1n;

  std::mt19937_64 rng(mix_seed(seed, 0x5eed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  VertexFunction x(n);
  for (double& v : x) v = normal(rng);

  auto deflate = [&](VertexFunction& v) {
    double c = dot(v, u1);
    for (int i = 0; i < n; ++i) v[i] -= c * u1[i];
  };
  auto apply = [&](const VertexFunction& v) {
    // (2I - L_sym) v = v + D^{-1/2} W D^{-1/2} v
    VertexFunction out(n);
    for (int i = 0; i < n; ++i) out[i] = v[i];
    for (const auto& e : g.edges()) {
      out[e.u] += e.w * v[e.v] / (sqrt_deg[e.u] * sqrt_deg[e.v]);
      out[e.v] += e.w * v[e.u] / (sqrt_deg[e.u] * sqrt_deg[e.v]);
    }
    return out;
  };

  deflate(x);
  double norm = l2_norm(x);
  if (norm == 0.0) x = random_zero_median(n, mix_seed(seed, 1, 1));
  for (double& v : x) v /= l2_norm(x);

  double prev_rayleigh = 0.0;
  for (int it = 0; it < 20000; ++it) {
    VertexFunction y = apply(x);
    deflate(y);
    double yn = l2_norm(y);
    if (yn == 0.0) break;
    for (double& v : y) v /= yn;
    double rayleigh = dot(y, apply(y));
    x = std::move(y);
    if (it > 10 && std::abs(rayleigh - prev_rayleigh) < 1e-13) break;
    prev_rayleigh = rayleigh;
  }
  // Undo the degree scaling: eigenvectors of the random-walk relaxation.
  for (int i = 0; i < n; ++i) x[i] /= sqrt_deg[i];
  return x;
}

}  // namespace

VertexFunction initialize(const Graph& g, InitMethod method, uint64_t seed) {
  require_connected(g, "initialize");
  if (g.n() < 2) throw_config("initialize needs n >= 2");
  VertexFunction f;
  if (method == InitMethod::RandomZeroMedian) {
    f = random_zero_median(g.n(), seed);
  } else {
    f = spectral_second_eigenvector(g, seed);
    if (is_constant(f)) f = random_zero_median(g.n(), mix_seed(seed, 2, 2));
    subtract_median_and_normalize(f);
  }
  return f;
}

OuterState make_outer_state(const Graph& g, VertexFunction f0) {
  if (static_cast<int>(f0.size()) != g.n())
    throw_config("initial function dimension mismatch");
  if (is_constant(f0)) throw_degenerate("initial function must be non-constant");
  OuterState s;
  s.f_k = std::move(f0);
  s.energy = balance_energy(g, s.f_k);
  return s;
}

bool outer_step(const Graph& g, OuterState& state,
                const AlgorithmVariant& variant, RofSolverKind solver,
                int m_max, EdgeFunction* dual_state) {
  require_connected(g, "outer_step");
  state.v_k = zero_mean_subgradient(state.f_k);
  state.g_k = state.f_k;
  for (int i = 0; i < g.n(); ++i) state.g_k[i] += state.v_k.values[i];
  state.energy = balance_energy(g, state.f_k);

  RofProblem problem{&g, state.energy, state.g_k, state.f_k};
  StoppingPolicy policy;
  switch (variant.kind) {
    case AlgorithmVariant::Kind::NonAdaptive:
      policy = StoppingPolicy::fixed(variant.eps, m_max);
      break;
    case AlgorithmVariant::Kind::AdaptiveMedian:
      policy = StoppingPolicy::adaptive_median(g, state.f_k, variant.theta, m_max);
      break;
    case AlgorithmVariant::Kind::AdaptiveMedianFree:
      policy = StoppingPolicy::adaptive_median_free(g, state.f_k, state.v_k,
                                                    variant.theta, m_max);
      break;
  }

  RofSolution sol = solve_rof(problem, solver, policy, dual_state);
  state.h_k = std::move(sol.h);
  state.inner_iterations = sol.iterations_used;
  state.terminated_by = sol.terminated_by;

  double move = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    double d = state.h_k[i] - state.f_k[i];
    move += d * d;
  }
  if (sol.terminated_by == RofTermination::CapReached &&
      std::sqrt(move) <= 1e-10) {
    // h^k = f^k at the cap: critical point of the energy.
    state.critical = true;
    return false;
  }
  if (is_constant(state.h_k)) {
    if (sol.terminated_by == RofTermination::AdaptiveConditionMet)
      throw_numerical("invariant violation: constant h after adaptive stop");
    throw_degenerate("inner solve returned a constant function");
  }

  double med_h = median(state.h_k);
  state.h_k0 = state.h_k;
  for (double& x : state.h_k0) x -= med_h;
  VertexFunction f_next = state.h_k0;
  double norm = l2_norm(f_next);
  if (norm == 0.0) throw_degenerate("h^k is constant after median shift");
  for (double& x : f_next) x /= norm;

  state.f_k = std::move(f_next);
  state.energy = balance_energy(g, state.f_k);
  ++state.k;
  return true;
}

OuterTrace run(const Graph& g, VertexFunction f0,
               const AlgorithmVariant& variant, const RunParams& params) {
  auto t0 = std::chrono::steady_clock::now();
  OuterState state = make_outer_state(g, std::move(f0));

  OuterTrace trace;
  trace.initial_energy = state.energy;
  double tol_abs = params.tol * state.energy;

  for (int k = 0; k < params.max_outer; ++k) {
    double e_before = state.energy;
    VertexFunction f_before = state.f_k;

    bool advanced =
        outer_step(g, state, variant, params.solver, params.m_max, nullptr);
    if (!advanced) {
      trace.critical_point = true;
      break;
    }
    if (variant.adaptive() &&
        state.terminated_by == RofTermination::CapReached &&
        state.energy >= e_before) {
      // Cap-reached iterate failed to descend: the solve is effectively at
      // a critical point; reject the iterate and stop.
      state.f_k = std::move(f_before);
      state.energy = e_before;
      trace.critical_point = true;
      break;
    }

    OuterRecord rec;
    rec.k = k;
    rec.energy = e_before;
    rec.energy_next = state.energy;
    rec.inner_iterations = state.inner_iterations;
    double step2 = 0.0, fstep2 = 0.0;
    for (int i = 0; i < g.n(); ++i) {
      double d = state.h_k[i] - f_before[i];
      step2 += d * d;
      double df = state.f_k[i] - f_before[i];
      fstep2 += df * df;
    }
    rec.step_norm = std::sqrt(step2);
    rec.f_step_norm = std::sqrt(fstep2);
    rec.h_norm = l2_norm(state.h_k);
    rec.median_h = median(state.h_k);
    rec.terminated_by = state.terminated_by;
    trace.records.push_back(rec);
    trace.total_inner_iterations += state.inner_iterations;

    if (e_before - state.energy < tol_abs) break;
  }

  trace.final_f = state.f_k;
  trace.final_energy = state.energy;
  trace.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return trace;
}

Partition threshold_to_partition(const Graph& g, const VertexFunction& f) {
  if (static_cast<int>(f.size()) != g.n())
    throw_config("threshold_to_partition: dimension mismatch");
  if (is_constant(f)) throw_degenerate("cannot threshold a constant function");

  int n = g.n();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return f[a] != f[b] ? f[a] > f[b] : a < b;
  });

  std::vector<char> in(n, 0);
  double cut = 0.0;
  int size_s = 0;

  struct Candidate {
    double value = 0, cut = 0;
    int min_side = 0;
    int prefix = 0;  // vertices of `order` inside S
    bool set = false;
  } best;

  auto subset_of_prefix = [&](int prefix) {
    std::vector<int> s(order.begin(), order.begin() + prefix);
    std::sort(s.begin(), s.end());
    return s;
  };

  int pos = 0;
  while (pos < n) {
    // Move the whole group of equal values across the threshold.
    int group_end = pos;
    while (group_end < n && f[order[group_end]] == f[order[pos]]) ++group_end;
    for (int t = pos; t < group_end; ++t) {
      int v = order[t];
      for (const auto& inc : g.neighbors(v)) {
        double w = g.edges()[inc.edge].w;
        cut += in[inc.neighbor] ? -w : w;
      }
      in[v] = 1;
      ++size_s;
    }
    pos = group_end;
    if (size_s == n) break;  // no proper subset past the last value

    double value = cut / std::min(size_s, n - size_s);
    Candidate cand{value, cut, std::min(size_s, n - size_s), size_s, true};
    bool take = false;
    if (!best.set) {
      take = true;
    } else if (cand.value != best.value) {
      take = cand.value < best.value;
    } else if (cand.cut != best.cut) {
      take = cand.cut < best.cut;
    } else if (cand.min_side != best.min_side) {
      take = cand.min_side < best.min_side;
    } else {
      take = subset_of_prefix(cand.prefix) < subset_of_prefix(best.prefix);
    }
    if (take) best = cand;
  }

  Partition p;
  p.subset = subset_of_prefix(best.prefix);
  return p;
}

namespace {

struct Cluster {
  std::vector<int> vertices;  // global ids, sorted
  uint64_t id;                // stable id for seeding
};

struct SplitCandidate {
  bool computed = false;
  bool splittable = false;
  double value = 0.0;
  std::vector<std::vector<int>> parts;  // global ids
};

SplitCandidate compute_split(const Graph& g, const Cluster& c,
                             const BisectParams& params) {
  SplitCandidate out;
  out.computed = true;
  if (c.vertices.size() < 2) return out;

  Graph sub = induced_subgraph(g, c.vertices);
  if (!sub.connected()) {
    // Components become clusters directly.
    auto comps = connected_components(sub);
    out.splittable = true;
    out.value = 0.0;
    for (auto& comp : comps) {
      std::vector<int> part;
      for (int local : comp) part.push_back(c.vertices[local]);
      std::sort(part.begin(), part.end());
      out.parts.push_back(std::move(part));
    }
    return out;
  }
  if (sub.edge_count() == 0) return out;

  double best_value = 0.0;
  Partition best_part;
  bool have = false;
  for (int r = 0; r < std::max(1, params.restarts); ++r) {
    InitMethod method = (r == 0) ? params.init : InitMethod::RandomZeroMedian;
    uint64_t seed = mix_seed(params.seed, c.id, static_cast<uint64_t>(r));
    VertexFunction f0 = initialize(sub, method, seed);
    OuterTrace trace = run(sub, std::move(f0), params.variant, params.run);
    if (params.stats) {
      params.stats->total_inner_iterations += trace.total_inner_iterations;
      params.stats->outer_iterations += static_cast<int>(trace.records.size());
    }
    if (is_constant(trace.final_f)) continue;
    Partition p = threshold_to_partition(sub, trace.final_f);
    double value = balanced_cut_value(sub, p);
    if (!have || value < best_value) {
      best_value = value;
      best_part = p;
      have = true;
    }
  }
  if (!have) return out;

  out.splittable = true;
  out.value = best_value;
  std::vector<char> in(sub.n(), 0);
  for (int v : best_part.subset) in[v] = 1;
  std::vector<int> a, b;
  for (int i = 0; i < sub.n(); ++i)
    (in[i] ? a : b).push_back(c.vertices[i]);
  out.parts = {std::move(a), std::move(b)};
  return out;
}

}  // namespace

std::vector<int> recursive_bisection(const Graph& g, int K,
                                     const BisectParams& params) {
  if (K < 2) throw_config("K must be at least 2");
  if (K > g.n()) throw_config("K exceeds the vertex count");
  require_connected(g, "recursive_bisection");

  std::vector<Cluster> clusters;
  std::vector<SplitCandidate> cands;
  uint64_t next_id = 0;
  {
    Cluster root;
    root.vertices.resize(g.n());
    std::iota(root.vertices.begin(), root.vertices.end(), 0);
    root.id = next_id++;
    clusters.push_back(std::move(root));
    cands.emplace_back();
  }

  while (static_cast<int>(clusters.size()) < K) {
    for (size_t i = 0; i < clusters.size(); ++i)
      if (!cands[i].computed) cands[i] = compute_split(g, clusters[i], params);

    int best = -1;
    for (size_t i = 0; i < clusters.size(); ++i) {
      if (!cands[i].splittable) continue;
      if (best < 0 || cands[i].value < cands[best].value)
        best = static_cast<int>(i);
    }
    if (best < 0)
      throw_degenerate("no cluster can be split further");

    SplitCandidate chosen = std::move(cands[best]);
    clusters.erase(clusters.begin() + best);
    cands.erase(cands.begin() + best);

    // A disconnected cluster may produce more parts than remaining slots;
    // fold the smallest parts together until they fit.
    int slots = K - static_cast<int>(clusters.size());
    while (static_cast<int>(chosen.parts.size()) > slots) {
      std::sort(chosen.parts.begin(), chosen.parts.end(),
                [](const auto& a, const auto& b) { return a.size() < b.size(); });
      chosen.parts[1].insert(chosen.parts[1].end(), chosen.parts[0].begin(),
                             chosen.parts[0].end());
      std::sort(chosen.parts[1].begin(), chosen.parts[1].end());
      chosen.parts.erase(chosen.parts.begin());
    }
    for (auto& part : chosen.parts) {
      Cluster c;
      c.vertices = std::move(part);
      c.id = next_id++;
      clusters.push_back(std::move(c));
      cands.emplace_back();
    }
  }

  std::vector<int> labels(g.n(), -1);
  for (size_t c = 0; c < clusters.size(); ++c)
    for (int v : clusters[c].vertices) labels[v] = static_cast<int>(c);
  return labels;
}

}  // namespace tvcut
