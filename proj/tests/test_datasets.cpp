#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "tvcut/datasets.hpp"

using namespace tvcut;

namespace {

double dist(const PointCloud& pc, int i, int j) {
  double s = 0.0;
  for (int c = 0; c < pc.d; ++c) {
    double diff = pc.at(i, c) - pc.at(j, c);
    s += diff * diff;
  }
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("two-moons geometry in the noiseless limit") {
  PointCloud pc = two_moons(200, 0.0, 42);
  CHECK(pc.n == 200);
  CHECK(pc.d == 100);
  int per_class[2] = {0, 0};
  for (int i = 0; i < pc.n; ++i) {
    REQUIRE(pc.labels[i] >= 0);
    REQUIRE(pc.labels[i] <= 1);
    ++per_class[pc.labels[i]];
    double x = pc.at(i, 0), y = pc.at(i, 1);
    // Each moon is a radius-1 half circle; the second is shifted.
    double r = pc.labels[i] == 0
                   ? std::hypot(x, y)
                   : std::hypot(x - 1.0, y - 0.5);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
    for (int c = 2; c < pc.d; ++c) CHECK(pc.at(i, c) == 0.0);
  }
  CHECK(per_class[0] == 100);
  CHECK(per_class[1] == 100);
}

TEST_CASE("two-moons determinism and validation") {
  PointCloud a = two_moons(64, 0.1, 7);
  PointCloud b = two_moons(64, 0.1, 7);
  CHECK(a.data == b.data);  // bitwise
  CHECK(a.labels == b.labels);
  PointCloud c = two_moons(64, 0.1, 8);
  CHECK(a.data != c.data);

  CHECK_THROWS_AS(two_moons(63, 0.1, 1), Error);   // odd n
  CHECK_THROWS_AS(two_moons(2, 0.1, 1), Error);    // too small
  CHECK_THROWS_AS(two_moons(10, -0.1, 1), Error);  // negative noise
}

TEST_CASE("gaussian blobs carry labels and are deterministic") {
  PointCloud pc = gaussian_blobs(90, 3, 4, 10.0, 0.5, 11);
  CHECK(pc.n == 90);
  CHECK(pc.d == 4);
  int counts[3] = {0, 0, 0};
  for (int l : pc.labels) ++counts[l];
  CHECK(counts[0] == 30);
  CHECK(counts[1] == 30);
  CHECK(counts[2] == 30);
  PointCloud again = gaussian_blobs(90, 3, 4, 10.0, 0.5, 11);
  CHECK(pc.data == again.data);
  CHECK_THROWS_AS(gaussian_blobs(2, 3, 4, 1.0, 0.5, 1), Error);
}

TEST_CASE("idx files parse hand-crafted bytes") {
  std::string img_path = "test_idx_images.bin";
  std::string lbl_path = "test_idx_labels.bin";
  {
    std::ofstream img(img_path, std::ios::binary);
    const unsigned char header[] = {0, 0, 8, 3, 0, 0, 0, 1,
                                    0, 0, 0, 2, 0, 0, 0, 2};
    img.write(reinterpret_cast<const char*>(header), sizeof(header));
    const unsigned char pixels[] = {0, 128, 255, 64};
    img.write(reinterpret_cast<const char*>(pixels), sizeof(pixels));
    std::ofstream lbl(lbl_path, std::ios::binary);
    const unsigned char lheader[] = {0, 0, 8, 1, 0, 0, 0, 1};
    lbl.write(reinterpret_cast<const char*>(lheader), sizeof(lheader));
    const unsigned char label = 7;
    lbl.write(reinterpret_cast<const char*>(&label), 1);
  }
  PointCloud pc = load_idx(img_path, lbl_path);
  REQUIRE(pc.n == 1);
  REQUIRE(pc.d == 4);
  CHECK(pc.at(0, 0) == 0.0);
  CHECK(pc.at(0, 1) == doctest::Approx(128.0 / 255.0));
  CHECK(pc.at(0, 2) == 1.0);
  CHECK(pc.at(0, 3) == doctest::Approx(64.0 / 255.0));
  CHECK(pc.labels[0] == 7);
  std::remove(img_path.c_str());
  std::remove(lbl_path.c_str());
}

TEST_CASE("idx error cases are reported distinctly") {
  std::string img_path = "test_idx_bad_images.bin";
  std::string lbl_path = "test_idx_bad_labels.bin";
  auto write_images = [&](uint32_t magic, uint32_t count) {
    std::ofstream img(img_path, std::ios::binary);
    unsigned char h[16] = {};
    for (int i = 0; i < 4; ++i) h[i] = (magic >> (24 - 8 * i)) & 0xff;
    for (int i = 0; i < 4; ++i) h[4 + i] = (count >> (24 - 8 * i)) & 0xff;
    h[11] = 1;  // rows = 1
    h[15] = 1;  // cols = 1
    img.write(reinterpret_cast<char*>(h), 16);
    for (uint32_t i = 0; i < count; ++i) img.put(0);
  };
  auto write_labels = [&](uint32_t count) {
    std::ofstream lbl(lbl_path, std::ios::binary);
    unsigned char h[8] = {0, 0, 8, 1};
    for (int i = 0; i < 4; ++i) h[4 + i] = (count >> (24 - 8 * i)) & 0xff;
    lbl.write(reinterpret_cast<char*>(h), 8);
    for (uint32_t i = 0; i < count; ++i) lbl.put(0);
  };

  write_images(0xdeadbeef, 1);
  write_labels(1);
  CHECK_THROWS_WITH_AS(load_idx(img_path, lbl_path),
                       doctest::Contains("magic"), Error);

  write_images(0x00000803u, 0);
  CHECK_THROWS_WITH_AS(load_idx(img_path, lbl_path),
                       doctest::Contains("empty"), Error);

  write_images(0x00000803u, 2);
  write_labels(3);
  CHECK_THROWS_WITH_AS(load_idx(img_path, lbl_path),
                       doctest::Contains("mismatch"), Error);

  CHECK_THROWS_AS(load_idx("does_not_exist.idx", lbl_path), Error);
  std::remove(img_path.c_str());
  std::remove(lbl_path.c_str());
}

TEST_CASE("idx round trip preserves quantized pixel values") {
  PointCloud pc = gaussian_blobs(12, 2, 6, 0.3, 0.1, 3);
  // Shift into [0, 1] so quantization is the only loss.
  for (double& v : pc.data) v = std::clamp(std::abs(v), 0.0, 1.0);
  std::string img_path = "test_idx_rt_images.bin";
  std::string lbl_path = "test_idx_rt_labels.bin";
  write_idx(pc, 2, 3, img_path, lbl_path);
  PointCloud back = load_idx(img_path, lbl_path);
  REQUIRE(back.n == pc.n);
  REQUIRE(back.d == pc.d);
  CHECK(back.labels == pc.labels);
  for (size_t i = 0; i < pc.data.size(); ++i) {
    double quantized = std::lround(pc.data[i] * 255.0) / 255.0;
    CHECK(back.data[i] == doctest::Approx(quantized).epsilon(1e-12));
  }
  // Second round trip is the identity.
  write_idx(back, 2, 3, img_path, lbl_path);
  PointCloud again = load_idx(img_path, lbl_path);
  CHECK(again.data == back.data);
  std::remove(img_path.c_str());
  std::remove(lbl_path.c_str());
}

TEST_CASE("csv round trip with and without labels") {
  PointCloud pc = gaussian_blobs(20, 2, 3, 5.0, 1.0, 17);
  std::string path = "test_points.csv";

  save_csv(pc, path, true);
  PointCloud labeled = load_csv(path, true);
  REQUIRE(labeled.n == pc.n);
  REQUIRE(labeled.d == pc.d);
  CHECK(labeled.labels == pc.labels);
  for (size_t i = 0; i < pc.data.size(); ++i)
    CHECK(labeled.data[i] == doctest::Approx(pc.data[i]).epsilon(1e-15));

  save_csv(pc, path, false);
  PointCloud plain = load_csv(path, false);
  CHECK(plain.labels.empty());
  CHECK(plain.d == pc.d);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_csv("missing_file.csv", false), Error);
  {
    std::ofstream bad(path);
    bad << "1.0,2.0\n3.0\n";
  }
  CHECK_THROWS_AS(load_csv(path, false), Error);  // ragged rows
  {
    std::ofstream bad(path);
    bad << "1.0,abc\n";
  }
  CHECK_THROWS_AS(load_csv(path, false), Error);  // non-numeric field
  std::remove(path.c_str());
}

TEST_CASE("full-dimensional pca is an isometry after centering") {
  PointCloud pc = gaussian_blobs(40, 2, 5, 3.0, 1.0, 23);
  PointCloud proj = pca_project(pc, 5);
  REQUIRE(proj.d == 5);
  for (int i = 0; i < pc.n; ++i)
    for (int j = i + 1; j < pc.n; ++j)
      CHECK(dist(proj, i, j) == doctest::Approx(dist(pc, i, j)).epsilon(1e-9));
}

TEST_CASE("pca projection is a contraction of pairwise distances") {
  PointCloud pc = gaussian_blobs(40, 3, 8, 3.0, 1.0, 29);
  PointCloud proj = pca_project(pc, 3);
  for (int i = 0; i < pc.n; ++i)
    for (int j = i + 1; j < pc.n; ++j)
      CHECK(dist(proj, i, j) <= dist(pc, i, j) + 1e-9);
}

TEST_CASE("pca keeps low-rank data exactly") {
  // Rank-2 data in 6 dimensions: distances survive a 2-component projection.
  PointCloud pc;
  pc.n = 30;
  pc.d = 6;
  pc.data.resize(static_cast<size_t>(pc.n) * pc.d, 0.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int i = 0; i < pc.n; ++i) {
    double a = val(rng), b = val(rng);
    for (int j = 0; j < pc.d; ++j)
      pc.data[static_cast<size_t>(i) * pc.d + j] = a * (j + 1) + b * (j % 2);
  }
  PointCloud proj = pca_project(pc, 2);
  for (int i = 0; i < pc.n; ++i)
    for (int j = i + 1; j < pc.n; ++j)
      CHECK(dist(proj, i, j) == doctest::Approx(dist(pc, i, j)).epsilon(1e-9));
}

TEST_CASE("pca validation and determinism") {
  PointCloud pc = gaussian_blobs(10, 2, 4, 3.0, 1.0, 37);
  CHECK_THROWS_AS(pca_project(pc, 0), Error);
  CHECK_THROWS_AS(pca_project(pc, 5), Error);
  PointCloud a = pca_project(pc, 2);
  PointCloud b = pca_project(pc, 2);
  CHECK(a.data == b.data);
  CHECK(a.labels == pc.labels);
}
