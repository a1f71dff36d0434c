// tvcut command line tool. All numerics go through the C API in tvcut.h;
// this file only parses flags, shuttles JSON and writes files.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tvcut.h"

using nlohmann::json;

namespace {

int fail(tvc_status status) {
  std::cerr << "error: " << tvc_last_error() << "\n";
  return static_cast<int>(status);
}

struct CommonOpts {
  std::string gen;
  std::string points_path;
  bool csv_first_column_label = false;
  std::string graph_path;
  std::string idx_images, idx_labels;
  int gen_n = 2000;
  double gen_noise = 0.14142135623730951;
  int gen_dim = 100;
  int gen_classes = 2;
  double gen_separation = 5.0;
  int k = 10;
  int pca = 0;
  std::string algo = "adaptive-median-free";
  double theta = 0.99;
  double eps = 1e-6;
  std::string solver = "pd";
  std::string init = "spectral";
  int max_inner = 1500;
  double tol = 1e-10;
  int max_outer = 300;
  int classes = 2;
  int restarts = 1;
  int trials = 1;
  uint64_t seed = 0;
  int jobs = 1;
  std::string out_path;
  std::optional<double> baseline_eps;
};

void add_dataset_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--gen", o.gen, "Generate data: two-moons or blobs");
  cmd->add_option("--points", o.points_path, "Point cloud CSV");
  cmd->add_flag("--labeled-csv", o.csv_first_column_label,
                "CSV first column holds labels");
  cmd->add_option("--graph", o.graph_path, "Prebuilt weighted graph file");
  cmd->add_option("--idx-images", o.idx_images, "IDX image file");
  cmd->add_option("--idx-labels", o.idx_labels, "IDX label file");
  cmd->add_option("--gen-n", o.gen_n, "Generated sample count");
  cmd->add_option("--noise", o.gen_noise, "Generator noise std dev");
  cmd->add_option("--gen-dim", o.gen_dim, "Generated ambient dimension");
  cmd->add_option("--gen-classes", o.gen_classes, "Blob generator classes");
  cmd->add_option("--separation", o.gen_separation, "Blob center separation");
  cmd->add_option("--k", o.k, "Nearest neighbors for graph construction");
  cmd->add_option("--pca", o.pca, "PCA components before graph build (0 = off)");
}

void add_solve_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--algo", o.algo,
                  "fixed | adaptive-median | adaptive-median-free")
      ->check(CLI::IsMember({"fixed", "adaptive-median",
                             "adaptive-median-free"}));
  cmd->add_option("--theta", o.theta, "Adaptive stopping parameter");
  cmd->add_option("--eps", o.eps, "Fixed-tolerance inner stopping threshold");
  cmd->add_option("--solver", o.solver, "pd | fb")
      ->check(CLI::IsMember({"pd", "fb"}));
  cmd->add_option("--init", o.init, "spectral | random")
      ->check(CLI::IsMember({"spectral", "random"}));
  cmd->add_option("--max-inner", o.max_inner, "Inner iteration cap");
  cmd->add_option("--tol", o.tol, "Outer loop tolerance (relative)");
  cmd->add_option("--max-outer", o.max_outer, "Outer iteration cap");
  cmd->add_option("--classes", o.classes, "Number of clusters");
  cmd->add_option("--restarts", o.restarts, "Restarts per clustering");
  cmd->add_option("--seed", o.seed, "Base random seed");
  cmd->add_option("--out", o.out_path, "Output path for the JSON report");
}

json to_config_json(const CommonOpts& o) {
  json j{{"gen", o.gen},
         {"points", o.points_path},
         {"csv_first_column_label", o.csv_first_column_label},
         {"graph", o.graph_path},
         {"idx_images", o.idx_images},
         {"idx_labels", o.idx_labels},
         {"gen_n", o.gen_n},
         {"gen_noise", o.gen_noise},
         {"gen_dim", o.gen_dim},
         {"gen_classes", o.gen_classes},
         {"gen_separation", o.gen_separation},
         {"k", o.k},
         {"pca", o.pca},
         {"algo", o.algo},
         {"theta", o.theta},
         {"eps", o.eps},
         {"solver", o.solver},
         {"init", o.init},
         {"max_inner", o.max_inner},
         {"tol", o.tol},
         {"max_outer", o.max_outer},
         {"classes", o.classes},
         {"restarts", o.restarts},
         {"trials", o.trials},
         {"seed", o.seed},
         {"jobs", o.jobs},
         {"out", o.out_path}};
  if (o.baseline_eps) j["baseline_eps"] = *o.baseline_eps;
  return j;
}

int write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return static_cast<int>(TVC_ERR_DATA);
  }
  out << text;
  return 0;
}

std::string labels_csv_path(const std::string& report_path) {
  std::string base = report_path;
  auto dot = base.rfind(".json");
  if (dot != std::string::npos && dot == base.size() - 5)
    base.resize(dot);
  return base + ".labels.csv";
}

int cmd_cluster(const CommonOpts& o) {
  char* report = nullptr;
  tvc_status status = tvc_run_single_json(to_config_json(o).dump().c_str(),
                                          &report);
  if (status != TVC_OK) return fail(status);
  std::string text(report);
  tvc_string_free(report);

  json j = json::parse(text);
  if (!o.out_path.empty()) {
    if (int rc = write_file(o.out_path, text)) return rc;
    std::string csv;
    for (const auto& label : j["trial"]["labels"])
      csv += std::to_string(label.get<int>()) + "\n";
    if (int rc = write_file(labels_csv_path(o.out_path), csv)) return rc;
  } else {
    std::cout << text << "\n";
  }

  const auto& t = j["trial"];
  std::cerr << "final energy " << t["final_energy"].get<double>()
            << ", outer " << t["outer_iterations"].get<int>() << ", inner "
            << t["inner_iterations"].get<long long>();
  if (t["error_pct"].get<double>() >= 0.0)
    std::cerr << ", error " << t["error_pct"].get<double>() << "%";
  if (!t["monotone"].get<bool>())
    std::cerr << " [warning: energy trace not monotone]";
  std::cerr << "\n";
  return 0;
}

int cmd_bench(const CommonOpts& o) {
  char* report = nullptr;
  char* table = nullptr;
  tvc_status status = tvc_run_bench_json(to_config_json(o).dump().c_str(),
                                         &report, &table);
  if (status != TVC_OK) return fail(status);
  std::string text(report), table_text(table);
  tvc_string_free(report);
  tvc_string_free(table);

  if (!o.out_path.empty()) {
    if (int rc = write_file(o.out_path, text)) return rc;
  } else {
    std::cout << text << "\n";
  }
  std::cerr << table_text;
  return 0;
}

int cmd_gen_data(const CommonOpts& o) {
  std::string out = o.out_path;
  if (out.empty()) {
    const char* cache = std::getenv("TVCUT_CACHE_DIR");
    std::string dir = cache ? cache : ".";
    out = dir + "/" + (o.gen.empty() ? std::string("points") : o.gen) + "-" +
          std::to_string(o.gen_n) + "-" + std::to_string(o.seed) + ".csv";
  }
  tvc_points* points = nullptr;
  tvc_status status;
  if (o.gen == "two-moons") {
    status = tvc_points_two_moons(o.gen_n, o.gen_noise, o.seed, o.gen_dim,
                                  &points);
  } else if (o.gen == "blobs") {
    status = tvc_points_blobs(o.gen_n, o.gen_classes, o.gen_dim,
                              o.gen_separation, o.gen_noise, o.seed, &points);
  } else {
    std::cerr << "error: --gen must be two-moons or blobs\n";
    return static_cast<int>(TVC_ERR_CONFIG);
  }
  if (status != TVC_OK) return fail(status);
  status = tvc_points_save_csv(points, out.c_str(), 1);
  tvc_points_free(points);
  if (status != TVC_OK) return fail(status);
  std::cout << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Total-variation balanced graph cut clustering"};
  app.require_subcommand(1);

  CommonOpts cluster_opts, bench_opts, gen_opts;

  CLI::App* cluster = app.add_subcommand("cluster", "Run one clustering");
  add_dataset_flags(cluster, cluster_opts);
  add_solve_flags(cluster, cluster_opts);

  CLI::App* bench = app.add_subcommand(
      "bench", "Paired benchmark: chosen adaptive variant vs fixed baseline");
  add_dataset_flags(bench, bench_opts);
  add_solve_flags(bench, bench_opts);
  bench->add_option("--trials", bench_opts.trials, "Seeded trials to run");
  bench->add_option("--jobs", bench_opts.jobs, "Concurrent trials");
  double baseline_eps = 0.0;
  CLI::Option* baseline_opt = bench->add_option(
      "--baseline-eps", baseline_eps,
      "Fixed-baseline inner tolerance (default: auto-match final energy)");
  bench_opts.trials = 10;

  CLI::App* gen = app.add_subcommand(
      "gen-data", "Generate a labeled point cloud CSV "
                  "(default directory: $TVCUT_CACHE_DIR)");
  add_dataset_flags(gen, gen_opts);
  gen->add_option("--seed", gen_opts.seed, "Random seed");
  gen->add_option("--out", gen_opts.out_path, "Output CSV path");

  CLI::App* verify = app.add_subcommand(
      "verify", "Run the oracle and invariant suite");
  tvc_verify_config vcfg;
  tvc_verify_config_defaults(&vcfg);
  bool quick = false;
  std::string mnist_images, mnist_labels, usps_csv;
  verify->add_option("--seed", vcfg.seed, "Suite seed");
  verify->add_option("--theta", vcfg.theta,
                     "Adaptive stopping parameter (debug override)");
  verify->add_flag("--quick", quick, "Reduced trial counts");
  verify->add_option("--mnist-images", mnist_images, "MNIST IDX image file");
  verify->add_option("--mnist-labels", mnist_labels, "MNIST IDX label file");
  verify->add_option("--usps", usps_csv, "USPS CSV file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster->parsed()) return cmd_cluster(cluster_opts);
    if (bench->parsed()) {
      if (*baseline_opt) bench_opts.baseline_eps = baseline_eps;
      return cmd_bench(bench_opts);
    }
    if (gen->parsed()) return cmd_gen_data(gen_opts);
    if (verify->parsed()) {
      vcfg.quick = quick ? 1 : 0;
      vcfg.mnist_images = mnist_images.empty() ? nullptr : mnist_images.c_str();
      vcfg.mnist_labels = mnist_labels.empty() ? nullptr : mnist_labels.c_str();
      vcfg.usps_csv = usps_csv.empty() ? nullptr : usps_csv.c_str();
      int rc = tvc_verify(&vcfg, 1);
      if (rc == 2) return fail(TVC_ERR_NUMERICAL);
      return rc == 0 ? 0 : static_cast<int>(TVC_ERR_NUMERICAL);
    }
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(TVC_ERR_NUMERICAL);
  }
  return 0;
}
