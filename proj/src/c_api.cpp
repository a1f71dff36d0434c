#include "tvcut.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "json.hpp"
#include "tvcut/balanced_cut.hpp"
#include "tvcut/bench.hpp"
#include "tvcut/datasets.hpp"
#include "tvcut/verify.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

tvc_status status_from(const tvcut::Error& e) {
  g_last_error = e.what();
  switch (e.kind()) {
    case tvcut::ErrorKind::Config:
      return TVC_ERR_CONFIG;
    case tvcut::ErrorKind::Data:
      return TVC_ERR_DATA;
    default:
      return TVC_ERR_NUMERICAL;
  }
}

template <typename Fn>
tvc_status guarded(Fn&& fn) {
  try {
    fn();
    return TVC_OK;
  } catch (const tvcut::Error& e) {
    return status_from(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TVC_ERR_NUMERICAL;
  }
}

}  // namespace

struct tvc_points {
  tvcut::PointCloud pc;
};

struct tvc_graph {
  tvcut::Graph g;
};

struct tvc_result {
  std::vector<int> labels;
  std::string json_text;
  double final_energy = 0.0;
  double balanced_cut = -1.0;
  long long inner_iterations = 0;
  int outer_iterations = 0;
  bool monotone = true;
};

extern "C" {

const char* tvc_last_error(void) { return g_last_error.c_str(); }

tvc_status tvc_points_two_moons(int n, double noise_sd, uint64_t seed,
                                int ambient_dim, tvc_points** out) {
  return guarded([&] {
    *out = new tvc_points{tvcut::two_moons(n, noise_sd, seed, ambient_dim)};
  });
}

tvc_status tvc_points_blobs(int n, int classes, int dim, double separation,
                            double noise_sd, uint64_t seed, tvc_points** out) {
  return guarded([&] {
    *out = new tvc_points{
        tvcut::gaussian_blobs(n, classes, dim, separation, noise_sd, seed)};
  });
}

tvc_status tvc_points_load_csv(const char* path, int first_column_label,
                               tvc_points** out) {
  return guarded([&] {
    *out = new tvc_points{tvcut::load_csv(path, first_column_label != 0)};
  });
}

tvc_status tvc_points_load_idx(const char* images_path,
                               const char* labels_path, tvc_points** out) {
  return guarded(
      [&] { *out = new tvc_points{tvcut::load_idx(images_path, labels_path)}; });
}

tvc_status tvc_points_save_csv(const tvc_points* points, const char* path,
                               int first_column_label) {
  return guarded(
      [&] { tvcut::save_csv(points->pc, path, first_column_label != 0); });
}

tvc_status tvc_points_save_idx(const tvc_points* points, int rows, int cols,
                               const char* images_path,
                               const char* labels_path) {
  return guarded(
      [&] { tvcut::write_idx(points->pc, rows, cols, images_path, labels_path); });
}

tvc_status tvc_points_pca(const tvc_points* points, int components,
                          tvc_points** out) {
  return guarded(
      [&] { *out = new tvc_points{tvcut::pca_project(points->pc, components)}; });
}

int tvc_points_count(const tvc_points* points) { return points->pc.n; }
int tvc_points_dim(const tvc_points* points) { return points->pc.d; }
int tvc_points_has_labels(const tvc_points* points) {
  return points->pc.labels.empty() ? 0 : 1;
}

tvc_status tvc_points_labels(const tvc_points* points, int* out) {
  return guarded([&] {
    if (points->pc.labels.empty())
      tvcut::throw_data("point cloud has no labels");
    std::memcpy(out, points->pc.labels.data(),
                points->pc.labels.size() * sizeof(int));
  });
}

void tvc_points_free(tvc_points* points) { delete points; }

tvc_status tvc_graph_build_knn(const tvc_points* points, int k,
                               tvc_graph** out) {
  return guarded([&] {
    *out = new tvc_graph{
        tvcut::build_knn_graph(points->pc.data, points->pc.n, points->pc.d, k)};
  });
}

tvc_status tvc_graph_load(const char* path, tvc_graph** out) {
  return guarded([&] { *out = new tvc_graph{tvcut::load_graph(path)}; });
}

tvc_status tvc_graph_save(const tvc_graph* graph, const char* path) {
  return guarded([&] { tvcut::save_graph(graph->g, path); });
}

int tvc_graph_vertex_count(const tvc_graph* graph) { return graph->g.n(); }
int tvc_graph_edge_count(const tvc_graph* graph) {
  return graph->g.edge_count();
}
int tvc_graph_is_connected(const tvc_graph* graph) {
  return graph->g.connected() ? 1 : 0;
}
void tvc_graph_free(tvc_graph* graph) { delete graph; }

void tvc_run_config_defaults(tvc_run_config* config) {
  config->algo = TVC_ALGO_ADAPTIVE_MEDIAN_FREE;
  config->solver = TVC_SOLVER_PRIMAL_DUAL;
  config->init = TVC_INIT_SPECTRAL;
  config->theta = 0.99;
  config->eps = 1e-6;
  config->max_inner = 1500;
  config->tol = 1e-10;
  config->max_outer = 300;
  config->classes = 2;
  config->restarts = 1;
  config->seed = 0;
}

tvc_status tvc_cluster(const tvc_graph* graph, const tvc_run_config* config,
                       tvc_result** out) {
  return guarded([&] {
    using namespace tvcut;
    const Graph& g = graph->g;
    require_connected(g, "tvc_cluster");

    AlgorithmVariant variant;
    switch (config->algo) {
      case TVC_ALGO_FIXED:
        variant.kind = AlgorithmVariant::Kind::NonAdaptive;
        break;
      case TVC_ALGO_ADAPTIVE_MEDIAN:
        variant.kind = AlgorithmVariant::Kind::AdaptiveMedian;
        break;
      case TVC_ALGO_ADAPTIVE_MEDIAN_FREE:
        variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
        break;
      default:
        throw_config("unknown algorithm id");
    }
    variant.theta = config->theta;
    variant.eps = config->eps;
    if (config->classes < 2) throw_config("classes must be at least 2");
    if (config->restarts < 1) throw_config("restarts must be positive");

    RunParams params;
    params.solver = config->solver == TVC_SOLVER_PRIMAL_DUAL
                        ? RofSolverKind::PrimalDual
                        : RofSolverKind::ForwardBackwardDual;
    params.tol = config->tol;
    params.max_outer = config->max_outer;
    params.m_max = config->max_inner;
    InitMethod init = config->init == TVC_INIT_SPECTRAL
                          ? InitMethod::SpectralSecondEigenvector
                          : InitMethod::RandomZeroMedian;

    auto result = std::make_unique<tvc_result>();
    json trace_json = json::array();

    if (config->classes == 2) {
      Partition best_part;
      double best_value = 0.0;
      bool have = false;
      for (int r = 0; r < config->restarts; ++r) {
        InitMethod method = (r == 0) ? init : InitMethod::RandomZeroMedian;
        uint64_t rseed = config->seed + 0x1000003ULL * static_cast<uint64_t>(r);
        VertexFunction f0 = initialize(g, method, rseed);
        OuterTrace trace = run(g, std::move(f0), variant, params);
        result->inner_iterations += trace.total_inner_iterations;
        result->outer_iterations += static_cast<int>(trace.records.size());
        if (r == 0) {
          trace_json.push_back(trace.initial_energy);
          for (const auto& rec : trace.records) {
            trace_json.push_back(rec.energy_next);
            if (rec.energy_next >= rec.energy) result->monotone = false;
          }
          result->final_energy = trace.final_energy;
        }
        if (is_constant(trace.final_f)) continue;
        Partition p = threshold_to_partition(g, trace.final_f);
        double value = balanced_cut_value(g, p);
        if (!have || value < best_value) {
          best_value = value;
          best_part = p;
          have = true;
        }
      }
      if (!have) throw_numerical("all restarts produced constant functions");
      result->balanced_cut = best_value;
      result->labels.assign(g.n(), 0);
      for (int v : best_part.subset) result->labels[v] = 1;
    } else {
      BisectStats stats;
      BisectParams bp{variant, params, init, config->restarts, config->seed,
                      &stats};
      result->labels = recursive_bisection(g, config->classes, bp);
      result->inner_iterations = stats.total_inner_iterations;
      result->outer_iterations = stats.outer_iterations;
    }

    json j{{"schema", "tvcut-result-v1"},
           {"n", g.n()},
           {"edges", g.edge_count()},
           {"classes", config->classes},
           {"seed", config->seed},
           {"final_energy", result->final_energy},
           {"balanced_cut", result->balanced_cut},
           {"outer_iterations", result->outer_iterations},
           {"inner_iterations", result->inner_iterations},
           {"monotone", result->monotone},
           {"energy_trace", trace_json}};
    result->json_text = j.dump(2);
    *out = result.release();
  });
}

int tvc_result_label_count(const tvc_result* result) {
  return static_cast<int>(result->labels.size());
}

tvc_status tvc_result_labels(const tvc_result* result, int* out) {
  return guarded([&] {
    std::memcpy(out, result->labels.data(),
                result->labels.size() * sizeof(int));
  });
}

const char* tvc_result_json(const tvc_result* result) {
  return result->json_text.c_str();
}

double tvc_result_final_energy(const tvc_result* result) {
  return result->final_energy;
}
double tvc_result_balanced_cut(const tvc_result* result) {
  return result->balanced_cut;
}
long long tvc_result_inner_iterations(const tvc_result* result) {
  return result->inner_iterations;
}
int tvc_result_outer_iterations(const tvc_result* result) {
  return result->outer_iterations;
}
int tvc_result_monotone(const tvc_result* result) {
  return result->monotone ? 1 : 0;
}
void tvc_result_free(tvc_result* result) { delete result; }

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tvcut::RunConfig config_from_json(const char* text) {
  using namespace tvcut;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw_config(std::string("bad config document: ") + e.what());
  }
  RunConfig c;
  c.gen = j.value("gen", c.gen);
  c.points_path = j.value("points", c.points_path);
  c.csv_first_column_label =
      j.value("csv_first_column_label", c.csv_first_column_label);
  c.graph_path = j.value("graph", c.graph_path);
  c.idx_images = j.value("idx_images", c.idx_images);
  c.idx_labels = j.value("idx_labels", c.idx_labels);
  c.gen_n = j.value("gen_n", c.gen_n);
  c.gen_noise = j.value("gen_noise", c.gen_noise);
  c.gen_dim = j.value("gen_dim", c.gen_dim);
  c.gen_classes = j.value("gen_classes", c.gen_classes);
  c.gen_separation = j.value("gen_separation", c.gen_separation);
  c.k = j.value("k", c.k);
  c.pca = j.value("pca", c.pca);

  std::string algo = j.value("algo", std::string("adaptive-median-free"));
  if (algo == "fixed")
    c.variant.kind = AlgorithmVariant::Kind::NonAdaptive;
  else if (algo == "adaptive-median")
    c.variant.kind = AlgorithmVariant::Kind::AdaptiveMedian;
  else if (algo == "adaptive-median-free")
    c.variant.kind = AlgorithmVariant::Kind::AdaptiveMedianFree;
  else
    throw_config("unknown algo '" + algo + "'");
  c.variant.theta = j.value("theta", c.variant.theta);
  c.variant.eps = j.value("eps", c.variant.eps);

  std::string solver = j.value("solver", std::string("pd"));
  if (solver == "pd" || solver == "primal-dual")
    c.solver = RofSolverKind::PrimalDual;
  else if (solver == "fb" || solver == "forward-backward-dual")
    c.solver = RofSolverKind::ForwardBackwardDual;
  else
    throw_config("unknown solver '" + solver + "'");

  std::string init = j.value("init", std::string("spectral"));
  if (init == "spectral")
    c.init = InitMethod::SpectralSecondEigenvector;
  else if (init == "random")
    c.init = InitMethod::RandomZeroMedian;
  else
    throw_config("unknown init '" + init + "'");

  c.m_max = j.value("max_inner", c.m_max);
  c.tol = j.value("tol", c.tol);
  c.max_outer = j.value("max_outer", c.max_outer);
  c.classes = j.value("classes", c.classes);
  c.restarts = j.value("restarts", c.restarts);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.jobs = j.value("jobs", c.jobs);
  c.out_path = j.value("out", c.out_path);
  if (j.contains("baseline_eps") && !j["baseline_eps"].is_null())
    c.baseline_eps = j["baseline_eps"].get<double>();
  c.validate();
  return c;
}

}  // namespace

tvc_status tvc_run_single_json(const char* config_json, char** out_json) {
  return guarded([&] {
    tvcut::RunConfig config = config_from_json(config_json);
    tvcut::TrialResult trial = tvcut::run_single(config, config.seed);
    *out_json = dup_string(tvcut::trial_to_json(config, trial));
    if (!*out_json) tvcut::throw_numerical("out of memory");
  });
}

tvc_status tvc_run_bench_json(const char* config_json, char** out_json,
                              char** out_table) {
  return guarded([&] {
    tvcut::RunConfig config = config_from_json(config_json);
    tvcut::BenchReport report = tvcut::run_bench(config);
    *out_json = dup_string(tvcut::bench_to_json(config, report));
    if (!*out_json) tvcut::throw_numerical("out of memory");
    if (out_table) {
      *out_table = dup_string(tvcut::bench_table(report));
      if (!*out_table) {
        std::free(*out_json);
        *out_json = nullptr;
        tvcut::throw_numerical("out of memory");
      }
    }
  });
}

void tvc_string_free(char* s) { std::free(s); }

tvc_status tvc_score_error(const int* labels_pred, const int* labels_true,
                           int n, int classes, double* out_pct) {
  return guarded([&] {
    std::vector<int> pred(labels_pred, labels_pred + n);
    std::vector<int> truth(labels_true, labels_true + n);
    *out_pct = tvcut::score_error(pred, truth, classes);
  });
}

void tvc_verify_config_defaults(tvc_verify_config* config) {
  config->seed = 20240817;
  config->theta = 0.99;
  config->quick = 0;
  config->mnist_images = nullptr;
  config->mnist_labels = nullptr;
  config->usps_csv = nullptr;
}

int tvc_verify(const tvc_verify_config* config, int verbose) {
  try {
    tvcut::VerifyOptions options;
    if (config) {
      options.seed = config->seed;
      options.theta = config->theta;
      options.quick = config->quick != 0;
      if (config->mnist_images) options.mnist_images = config->mnist_images;
      if (config->mnist_labels) options.mnist_labels = config->mnist_labels;
      if (config->usps_csv) options.usps_csv = config->usps_csv;
    }
    auto results =
        tvcut::run_verification(options, verbose ? &std::cout : nullptr);
    return tvcut::all_passed(results) ? 0 : 1;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return 2;
  }
}

}  // extern "C"
