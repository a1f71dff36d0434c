#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvcut/errors.hpp"

namespace tvcut {

struct PointCloud {
  int n = 0;
  int d = 0;
  std::vector<double> data;   // row-major n x d
  std::vector<int> labels;    // empty when no ground truth

  double at(int i, int j) const { return data[static_cast<size_t>(i) * d + j]; }
};

// Two interleaved half-circles of radius 1 in the first two coordinates,
// embedded in `ambient_dim` dimensions, Gaussian noise of standard deviation
// noise_sd on every coordinate. n/2 points per moon, labels 0/1.
PointCloud two_moons(int n, double noise_sd, uint64_t seed,
                     int ambient_dim = 100);

// `classes` isotropic Gaussian blobs with centers spaced `separation` apart
// on the coordinate axes.
PointCloud gaussian_blobs(int n, int classes, int dim, double separation,
                          double noise_sd, uint64_t seed);

// IDX big-endian binary (magic 0x00000803 images / 0x00000801 labels).
// Pixels scaled to [0, 1].
PointCloud load_idx(const std::string& images_path,
                    const std::string& labels_path);
void write_idx(const PointCloud& pc, int rows, int cols,
               const std::string& images_path, const std::string& labels_path);

// CSV, one row per point, no header. When `first_column_label` is set the
// leading field is the integer class label (USPS-style).
PointCloud load_csv(const std::string& path, bool first_column_label = false);
void save_csv(const PointCloud& pc, const std::string& path,
              bool first_column_label = false);

// Mean-centered projection onto the top `components` principal directions.
// Component signs fixed by making each one's largest-magnitude loading
// positive.
PointCloud pca_project(const PointCloud& pc, int components);

}  // namespace tvcut
