#include "clipper/io.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace clipper::io {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

std::ifstream openIn(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) fail(path, "cannot open for reading");
  return in;
}

std::ofstream openOut(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

}  // namespace

Eigen::Matrix3Xd readPointCloudText(const std::filesystem::path& path) {
  auto in = openIn(path);
  std::vector<Eigen::Vector3d> points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, y, z;
    if (!(ss >> x)) continue;  // blank or comment-only line
    if (!(ss >> y >> z)) fail(path, "line " + std::to_string(lineno) + ": expected 3 values");
    points.emplace_back(x, y, z);
  }
  Eigen::Matrix3Xd cloud(3, static_cast<Eigen::Index>(points.size()));
  for (Eigen::Index i = 0; i < cloud.cols(); ++i) cloud.col(i) = points[i];
  return cloud;
}

void writePointCloudText(const std::filesystem::path& path, const Eigen::Matrix3Xd& cloud) {
  auto out = openOut(path);
  char buf[128];
  for (Eigen::Index i = 0; i < cloud.cols(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", cloud(0, i), cloud(1, i), cloud(2, i));
    out << buf;
  }
}

Eigen::Matrix3Xd readPointCloudBinary(const std::filesystem::path& path) {
  auto in = openIn(path, std::ios::in | std::ios::binary);
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  if (bytes % (3 * sizeof(double)) != 0) fail(path, "size is not a multiple of 24 bytes");
  const auto n = static_cast<Eigen::Index>(bytes / (3 * sizeof(double)));
  Eigen::Matrix3Xd cloud(3, n);
  in.read(reinterpret_cast<char*>(cloud.data()), static_cast<std::streamsize>(bytes));
  if (!in) fail(path, "short read");
  return cloud;
}

void writePointCloudBinary(const std::filesystem::path& path, const Eigen::Matrix3Xd& cloud) {
  auto out = openOut(path, std::ios::out | std::ios::binary);
  out.write(reinterpret_cast<const char*>(cloud.data()),
            static_cast<std::streamsize>(sizeof(double) * 3 * cloud.cols()));
}

AssociationSet readAssociationsCsv(const std::filesystem::path& path) {
  auto in = openIn(path);
  AssociationSet assoc;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    long long p, q;
    if (!(ss >> p)) continue;
    if (!(ss >> q)) fail(path, "line " + std::to_string(lineno) + ": expected 2 indices");
    assoc.push_back({static_cast<int>(p), static_cast<int>(q)});
  }
  return assoc;
}

void writeAssociationsCsv(const std::filesystem::path& path, const AssociationSet& associations) {
  auto out = openOut(path);
  for (const auto& a : associations) out << a.p << ',' << a.q << '\n';
}

void writeMatrixCsv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix) {
  auto out = openOut(path);
  char buf[64];
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", matrix(i, j));
      out << buf << (j + 1 < matrix.cols() ? "," : "");
    }
    out << '\n';
  }
}

Eigen::MatrixXd readMatrixCsv(const std::filesystem::path& path) {
  auto in = openIn(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::vector<double> row;
    double x;
    while (ss >> x) row.push_back(x);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  const auto cols = rows.front().size();
  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) fail(path, "ragged rows");
    for (std::size_t j = 0; j < cols; ++j) matrix(static_cast<Eigen::Index>(i),
                                                  static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return matrix;
}

}  // namespace clipper::io
