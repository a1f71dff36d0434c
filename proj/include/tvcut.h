/* C API for the tvcut graph-clustering library.
 *
 * All functions return a tvc_status; handles are opaque and must be released
 * with the matching _free call. On failure tvc_last_error() returns a
 * descriptive message for the calling thread. */
#ifndef TVCUT_H
#define TVCUT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tvc_status {
  TVC_OK = 0,
  TVC_ERR_CONFIG = 2,
  TVC_ERR_DATA = 3,
  TVC_ERR_NUMERICAL = 4
} tvc_status;

typedef struct tvc_points tvc_points;
typedef struct tvc_graph tvc_graph;
typedef struct tvc_result tvc_result;

const char* tvc_last_error(void);

/* ---- datasets ---- */

tvc_status tvc_points_two_moons(int n, double noise_sd, uint64_t seed,
                                int ambient_dim, tvc_points** out);
tvc_status tvc_points_blobs(int n, int classes, int dim, double separation,
                            double noise_sd, uint64_t seed, tvc_points** out);
tvc_status tvc_points_load_csv(const char* path, int first_column_label,
                               tvc_points** out);
tvc_status tvc_points_load_idx(const char* images_path, const char* labels_path,
                               tvc_points** out);
tvc_status tvc_points_save_csv(const tvc_points* points, const char* path,
                               int first_column_label);
tvc_status tvc_points_save_idx(const tvc_points* points, int rows, int cols,
                               const char* images_path,
                               const char* labels_path);
tvc_status tvc_points_pca(const tvc_points* points, int components,
                          tvc_points** out);
int tvc_points_count(const tvc_points* points);
int tvc_points_dim(const tvc_points* points);
/* 1 if ground-truth labels are attached. */
int tvc_points_has_labels(const tvc_points* points);
/* Copies n labels into `out`. */
tvc_status tvc_points_labels(const tvc_points* points, int* out);
void tvc_points_free(tvc_points* points);

/* ---- graphs ---- */

tvc_status tvc_graph_build_knn(const tvc_points* points, int k,
                               tvc_graph** out);
tvc_status tvc_graph_load(const char* path, tvc_graph** out);
tvc_status tvc_graph_save(const tvc_graph* graph, const char* path);
int tvc_graph_vertex_count(const tvc_graph* graph);
int tvc_graph_edge_count(const tvc_graph* graph);
int tvc_graph_is_connected(const tvc_graph* graph);
void tvc_graph_free(tvc_graph* graph);

/* ---- clustering ---- */

typedef enum tvc_algo {
  TVC_ALGO_FIXED = 0,
  TVC_ALGO_ADAPTIVE_MEDIAN = 1,
  TVC_ALGO_ADAPTIVE_MEDIAN_FREE = 2
} tvc_algo;

typedef enum tvc_solver {
  TVC_SOLVER_PRIMAL_DUAL = 0,
  TVC_SOLVER_FORWARD_BACKWARD_DUAL = 1
} tvc_solver;

typedef enum tvc_init {
  TVC_INIT_SPECTRAL = 0,
  TVC_INIT_RANDOM = 1
} tvc_init;

typedef struct tvc_run_config {
  tvc_algo algo;
  tvc_solver solver;
  tvc_init init;
  double theta;    /* adaptive variants; default 0.99 */
  double eps;      /* fixed variant inner tolerance */
  int max_inner;   /* default 1500 */
  double tol;      /* outer tolerance relative to E(f^0); default 1e-10 */
  int max_outer;   /* default 300 */
  int classes;     /* >= 2 */
  int restarts;
  uint64_t seed;
} tvc_run_config;

void tvc_run_config_defaults(tvc_run_config* config);

/* Runs one clustering; on success *out holds labels, the energy trace and
 * iteration counts. */
tvc_status tvc_cluster(const tvc_graph* graph, const tvc_run_config* config,
                       tvc_result** out);

int tvc_result_label_count(const tvc_result* result);
tvc_status tvc_result_labels(const tvc_result* result, int* out);
/* JSON document describing the run; owned by the result handle. */
const char* tvc_result_json(const tvc_result* result);
double tvc_result_final_energy(const tvc_result* result);
double tvc_result_balanced_cut(const tvc_result* result);
long long tvc_result_inner_iterations(const tvc_result* result);
int tvc_result_outer_iterations(const tvc_result* result);
/* 1 when every recorded outer iteration strictly decreased the energy. */
int tvc_result_monotone(const tvc_result* result);
void tvc_result_free(tvc_result* result);

/* ---- benchmark harness ---- */

/* Runs either a single clustering trial or the paired adaptive-vs-baseline
 * benchmark from a JSON config document (same keys as the CLI flags). On
 * success *out_json (and, for the benchmark, *out_table) receive malloc'd
 * strings; release them with tvc_string_free. */
tvc_status tvc_run_single_json(const char* config_json, char** out_json);
tvc_status tvc_run_bench_json(const char* config_json, char** out_json,
                              char** out_table);
void tvc_string_free(char* s);

/* ---- scoring and verification ---- */

/* Majority-label clustering error in percent. */
tvc_status tvc_score_error(const int* labels_pred, const int* labels_true,
                           int n, int classes, double* out_pct);

typedef struct tvc_verify_config {
  uint64_t seed;
  double theta;          /* debug override; >= 1 must fail the suite */
  int quick;             /* reduced trial counts */
  const char* mnist_images;  /* optional, may be NULL */
  const char* mnist_labels;
  const char* usps_csv;
} tvc_verify_config;

void tvc_verify_config_defaults(tvc_verify_config* config);

/* Runs the oracle/invariant suite, printing one line per check to stdout
 * when verbose is nonzero. Returns 0 when every check passed. */
int tvc_verify(const tvc_verify_config* config, int verbose);

#ifdef __cplusplus
}
#endif

#endif /* TVCUT_H */
