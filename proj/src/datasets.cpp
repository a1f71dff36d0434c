#include "tvcut/datasets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace tvcut {

PointCloud two_moons(int n, double noise_sd, uint64_t seed, int ambient_dim) {
  if (n < 4 || n % 2 != 0) throw_config("two_moons needs even n >= 4");
  if (noise_sd < 0.0) throw_config("noise_sd must be nonnegative");
  if (ambient_dim < 2) throw_config("ambient_dim must be at least 2");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::normal_distribution<double> noise(0.0, 1.0);

  PointCloud pc;
  pc.n = n;
  pc.d = ambient_dim;
  pc.data.assign(static_cast<size_t>(n) * ambient_dim, 0.0);
  pc.labels.resize(n);
  int half = n / 2;
  for (int i = 0; i < n; ++i) {
    double t = angle(rng);
    double x, y;
    if (i < half) {
      x = std::cos(t);
      y = std::sin(t);
      pc.labels[i] = 0;
    } else {
      x = 1.0 - std::cos(t);
      y = 0.5 - std::sin(t);
      pc.labels[i] = 1;
    }
    pc.data[static_cast<size_t>(i) * ambient_dim + 0] = x;
    pc.data[static_cast<size_t>(i) * ambient_dim + 1] = y;
    if (noise_sd > 0.0)
      for (int j = 0; j < ambient_dim; ++j)
        pc.data[static_cast<size_t>(i) * ambient_dim + j] +=
            noise_sd * noise(rng);
  }
  return pc;
}

PointCloud gaussian_blobs(int n, int classes, int dim, double separation,
                          double noise_sd, uint64_t seed) {
  if (n < classes || classes < 1) throw_config("need n >= classes >= 1");
  if (dim < 1) throw_config("dim must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  PointCloud pc;
  pc.n = n;
  pc.d = dim;
  pc.data.assign(static_cast<size_t>(n) * dim, 0.0);
  pc.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    int c = i % classes;
    pc.labels[i] = c;
    for (int j = 0; j < dim; ++j) {
      double center = (j == c % dim) ? separation * (1 + c / dim) : 0.0;
      pc.data[static_cast<size_t>(i) * dim + j] =
          center + noise_sd * noise(rng);
    }
  }
  return pc;
}

namespace {

uint32_t read_be32(std::istream& in, const char* what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw_data(std::string("truncated IDX file while reading ") + what);
  return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) |
         (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

void write_be32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<char*>(b), 4);
}

}  // namespace

PointCloud load_idx(const std::string& images_path,
                    const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw_data("cannot open IDX images file: " + images_path);
  uint32_t magic = read_be32(img, "images magic");
  if (magic != 0x00000803u)
    throw_data("bad IDX images magic number in " + images_path);
  uint32_t count = read_be32(img, "image count");
  uint32_t rows = read_be32(img, "rows");
  uint32_t cols = read_be32(img, "cols");
  if (count == 0) throw_data("empty dataset: " + images_path);

  size_t pixels = static_cast<size_t>(count) * rows * cols;
  std::vector<unsigned char> raw(pixels);
  if (!img.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(pixels)))
    throw_data("truncated IDX image payload in " + images_path);

  std::ifstream lbl(labels_path, std::ios::binary);
  if (!lbl) throw_data("cannot open IDX labels file: " + labels_path);
  uint32_t lmagic = read_be32(lbl, "labels magic");
  if (lmagic != 0x00000801u)
    throw_data("bad IDX labels magic number in " + labels_path);
  uint32_t lcount = read_be32(lbl, "label count");
  if (lcount != count)
    throw_data("image/label count mismatch: " + std::to_string(count) +
               " images vs " + std::to_string(lcount) + " labels");
  std::vector<unsigned char> lraw(lcount);
  if (!lbl.read(reinterpret_cast<char*>(lraw.data()),
                static_cast<std::streamsize>(lcount)))
    throw_data("truncated IDX label payload in " + labels_path);

  PointCloud pc;
  pc.n = static_cast<int>(count);
  pc.d = static_cast<int>(rows * cols);
  pc.data.resize(pixels);
  for (size_t i = 0; i < pixels; ++i) pc.data[i] = raw[i] / 255.0;
  pc.labels.assign(lraw.begin(), lraw.end());
  return pc;
}

void write_idx(const PointCloud& pc, int rows, int cols,
               const std::string& images_path,
               const std::string& labels_path) {
  if (rows * cols != pc.d) throw_config("rows * cols must equal d");
  std::ofstream img(images_path, std::ios::binary);
  if (!img) throw_data("cannot write IDX images file: " + images_path);
  write_be32(img, 0x00000803u);
  write_be32(img, static_cast<uint32_t>(pc.n));
  write_be32(img, static_cast<uint32_t>(rows));
  write_be32(img, static_cast<uint32_t>(cols));
  for (double v : pc.data) {
    double clamped = std::clamp(v, 0.0, 1.0);
    unsigned char byte =
        static_cast<unsigned char>(std::lround(clamped * 255.0));
    img.write(reinterpret_cast<char*>(&byte), 1);
  }
  std::ofstream lbl(labels_path, std::ios::binary);
  if (!lbl) throw_data("cannot write IDX labels file: " + labels_path);
  write_be32(lbl, 0x00000801u);
  write_be32(lbl, static_cast<uint32_t>(pc.n));
  for (int i = 0; i < pc.n; ++i) {
    unsigned char byte =
        pc.labels.empty() ? 0 : static_cast<unsigned char>(pc.labels[i]);
    lbl.write(reinterpret_cast<char*>(&byte), 1);
  }
}

PointCloud load_csv(const std::string& path, bool first_column_label) {
  std::ifstream in(path);
  if (!in) throw_data("cannot open CSV file: " + path);
  PointCloud pc;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw_data("non-numeric CSV field '" + field + "' in " + path);
      }
    }
    int offset = first_column_label ? 1 : 0;
    int d = static_cast<int>(row.size()) - offset;
    if (d < 1) throw_data("CSV row with no data fields in " + path);
    if (pc.n == 0)
      pc.d = d;
    else if (d != pc.d)
      throw_data("ragged CSV rows in " + path);
    if (first_column_label)
      pc.labels.push_back(static_cast<int>(std::lround(row[0])));
    pc.data.insert(pc.data.end(), row.begin() + offset, row.end());
    ++pc.n;
  }
  if (pc.n == 0) throw_data("empty CSV file: " + path);
  return pc;
}

void save_csv(const PointCloud& pc, const std::string& path,
              bool first_column_label) {
  std::ofstream out(path);
  if (!out) throw_data("cannot write CSV file: " + path);
  out.precision(17);
  for (int i = 0; i < pc.n; ++i) {
    if (first_column_label)
      out << (pc.labels.empty() ? 0 : pc.labels[i]) << ',';
    for (int j = 0; j < pc.d; ++j) {
      out << pc.at(i, j);
      if (j + 1 < pc.d) out << ',';
    }
    out << '\n';
  }
}

PointCloud pca_project(const PointCloud& pc, int components) {
  if (components < 1 || components > std::min(pc.n, pc.d))
    throw_config("pca components out of range");

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      x(pc.data.data(), pc.n, pc.d);
  Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov =
      centered.transpose() * centered / std::max(1, pc.n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw_numerical("PCA eigen-decomposition failed");

  // Eigen returns ascending eigenvalues; take the trailing columns.
  Eigen::MatrixXd basis(pc.d, components);
  for (int c = 0; c < components; ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(pc.d - 1 - c);
    int arg = 0;
    for (int j = 1; j < pc.d; ++j)
      if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
    if (v[arg] < 0.0) v = -v;
    basis.col(c) = v;
  }

  Eigen::MatrixXd projected = centered * basis;
  PointCloud out;
  out.n = pc.n;
  out.d = components;
  out.labels = pc.labels;
  out.data.resize(static_cast<size_t>(pc.n) * components);
  for (int i = 0; i < pc.n; ++i)
    for (int j = 0; j < components; ++j)
      out.data[static_cast<size_t>(i) * components + j] = projected(i, j);
  return out;
}

}  // namespace tvcut
