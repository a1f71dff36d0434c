#pragma once

#include <cstdint>

#include "tvcut/rof.hpp"

namespace tvcut {

enum class InitMethod { RandomZeroMedian, SpectralSecondEigenvector };

struct AlgorithmVariant {
  enum class Kind { NonAdaptive, AdaptiveMedian, AdaptiveMedianFree };
  Kind kind = Kind::AdaptiveMedianFree;
  double eps = 1e-6;    // NonAdaptive inner tolerance
  double theta = 0.99;  // adaptive variants

  bool adaptive() const { return kind != Kind::NonAdaptive; }
};

// One outer iterate: f^k with median 0 and unit l2 norm, plus the
// intermediate quantities of the last completed pass.
struct OuterState {
  int k = 0;
  VertexFunction f_k;
  double energy = 0.0;  // E(f^k)
  Subgradient v_k;
  VertexFunction g_k;   // f^k + v^k
  VertexFunction h_k;
  VertexFunction h_k0;  // h^k - med(h^k) 1
  int inner_iterations = 0;
  RofTermination terminated_by = RofTermination::CapReached;
  bool critical = false;  // h^k = f^k at the cap
};

struct OuterRecord {
  int k;
  double energy;        // E(f^k)
  double energy_next;   // E(f^{k+1})
  int inner_iterations;
  double step_norm;     // ||h^k - f^k||_2
  double h_norm;        // ||h^k||_2
  double median_h;
  double f_step_norm;   // ||f^{k+1} - f^k||_2
  RofTermination terminated_by;
};

struct OuterTrace {
  std::vector<OuterRecord> records;
  VertexFunction final_f;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  bool critical_point = false;
  long long total_inner_iterations = 0;
  double solve_seconds = 0.0;
};

// Non-constant f0 with exact zero median and unit l2 norm. Random draws are
// i.i.d. standard normals; spectral uses the second eigenvector of the
// normalized graph Laplacian (deflated power iteration). Deterministic per
// seed.
VertexFunction initialize(const Graph& g, InitMethod method, uint64_t seed);

OuterState make_outer_state(const Graph& g, VertexFunction f0);

// One full pass of Algorithm 1/2/3: subgradient, shifted point, inner ROF
// solve, median subtraction, renormalization. Returns false when a critical
// point was reached (the state is left at f^k).
bool outer_step(const Graph& g, OuterState& state, const AlgorithmVariant& variant,
                RofSolverKind solver, int m_max, EdgeFunction* dual_state);

struct RunParams {
  RofSolverKind solver = RofSolverKind::PrimalDual;
  double tol = 1e-10;   // relative to E(f^0)
  int max_outer = 300;
  int m_max = 1500;
};

OuterTrace run(const Graph& g, VertexFunction f0, const AlgorithmVariant& variant,
               const RunParams& params = {});

// Full threshold sweep over the level sets of f; returns the best subset by
// balanced cut value, ties broken by smaller cut, then smaller min side,
// then lexicographically.
Partition threshold_to_partition(const Graph& g, const VertexFunction& f);

struct BisectStats {
  long long total_inner_iterations = 0;  // across all candidate solves
  int outer_iterations = 0;
};

struct BisectParams {
  AlgorithmVariant variant;
  RunParams run;
  InitMethod init = InitMethod::SpectralSecondEigenvector;
  int restarts = 1;
  uint64_t seed = 0;
  BisectStats* stats = nullptr;
};

// Greedy recursive bisection into K clusters: always split the cluster whose
// best candidate split has the smallest balanced cut value.
std::vector<int> recursive_bisection(const Graph& g, int K,
                                     const BisectParams& params);

}  // namespace tvcut
