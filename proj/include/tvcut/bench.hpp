#pragma once

#include <optional>
#include <string>

#include "tvcut/balanced_cut.hpp"
#include "tvcut/datasets.hpp"

namespace tvcut {

struct RunConfig {
  // Dataset source: exactly one of gen / points_path / graph_path / idx pair.
  std::string gen;  // "two-moons" | "blobs" | ""
  std::string points_path;
  bool csv_first_column_label = false;
  std::string graph_path;
  std::string idx_images;
  std::string idx_labels;

  int gen_n = 2000;
  double gen_noise = 0.14142135623730951;  // sd; noise variance 0.02
  int gen_dim = 100;
  int gen_classes = 2;
  double gen_separation = 5.0;

  int k = 10;
  int pca = 0;  // 0 = no PCA

  AlgorithmVariant variant;
  RofSolverKind solver = RofSolverKind::PrimalDual;
  InitMethod init = InitMethod::SpectralSecondEigenvector;
  int m_max = 1500;
  double tol = 1e-10;
  int max_outer = 300;
  int classes = 2;
  int restarts = 1;
  int trials = 1;
  uint64_t seed = 0;
  int jobs = 1;
  std::string out_path;

  // Bench mode: baseline epsilon. Unset means auto-tune to match the
  // adaptive run's final energy within 0.5%.
  std::optional<double> baseline_eps;

  void validate() const;
};

struct TrialResult {
  uint64_t seed = 0;
  double error_pct = -1.0;  // -1 when no ground truth is available
  double graph_seconds = 0.0;
  double solve_seconds = 0.0;
  int outer_iterations = 0;
  long long inner_iterations = 0;
  double final_energy = 0.0;
  double balanced_cut = -1.0;  // 2-class runs only
  bool monotone = true;
  std::vector<double> energy_trace;  // E(f^0), E(f^1), ...
  std::vector<long long> inner_trace;  // inner iterations per outer step
  std::vector<int> labels;
};

// The baseline epsilon is tuned so both runs land on the same final energy;
// when no rung manages 0.5% the closest one is kept. `matched_level` is the
// worse of the two final energies and the matched_inner fields count the
// inner iterations each run needed to first reach it (within 0.5%), which
// makes the totals comparable even when the runs settle in different
// critical points.
struct BenchPair {
  TrialResult adaptive;
  TrialResult baseline;
  double baseline_eps = 0.0;
  double matched_level = 0.0;
  long long matched_inner_adaptive = 0;
  long long matched_inner_baseline = 0;
};

struct BenchReport {
  std::vector<BenchPair> pairs;
  double mean_error_adaptive = -1.0;
  double mean_error_baseline = -1.0;
  double mean_time_adaptive = 0.0;
  double mean_time_baseline = 0.0;
  double mean_inner_adaptive = 0.0;
  double mean_inner_baseline = 0.0;
  double mean_matched_inner_adaptive = 0.0;
  double mean_matched_inner_baseline = 0.0;
};

// Majority-label scoring: each predicted cluster gets its majority true
// label (ties to the smaller label id); returns 100 * misclassified / n.
double score_error(const std::vector<int>& labels_pred,
                   const std::vector<int>& labels_true, int K);

// Single clustering run for one seed (cmd `cluster`).
TrialResult run_single(const RunConfig& config, uint64_t seed);

// Paired benchmark (cmd `bench`): adaptive variant vs the fixed-tolerance
// baseline on identical graphs and initializations per trial.
BenchReport run_bench(const RunConfig& config);

std::string trial_to_json(const RunConfig& config, const TrialResult& t);
std::string bench_to_json(const RunConfig& config, const BenchReport& r);
std::string bench_table(const BenchReport& r);

}  // namespace tvcut
