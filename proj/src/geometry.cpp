#include "clipper/geometry.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include <Eigen/LU>
#include <Eigen/SVD>

#include <json.hpp>

#include "clipper/io.h"
#include "clipper/random.h"

namespace clipper::geometry {

namespace {

using nlohmann::json;

Eigen::Matrix3d randomRotation(Rng& rng) {
  // Uniform over SO(3): normalized 4-normal quaternion.
  Eigen::Vector4d q{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
  q.normalize();
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  Eigen::Matrix3d R;
  R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return R;
}

std::uint64_t pairKey(int i, int j) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

}  // namespace

void SyntheticParams::validate() const {
  if (n_points < 2) throw std::invalid_argument("SyntheticParams: n_points must be >= 2");
  if (m_putative < 1) throw std::invalid_argument("SyntheticParams: m_putative must be >= 1");
  if (!(outlier_rate >= 0.0) || !(outlier_rate < 1.0)) {
    throw std::invalid_argument("SyntheticParams: outlier_rate must be in [0,1)");
  }
  if (!(gamma > 0.0)) throw std::invalid_argument("SyntheticParams: gamma must be positive");
  if (!(beta_factor > 0.0)) throw std::invalid_argument("SyntheticParams: beta_factor must be positive");
}

BenchmarkInstance generateSynthetic(const SyntheticParams& params) {
  params.validate();
  const int n = params.n_points;
  const int m = params.m_putative;
  const double beta = params.beta();

  Rng points_rng(Rng::derive(params.seed, 0));
  Rng noise_rng(Rng::derive(params.seed, 1));
  Rng transform_rng(Rng::derive(params.seed, 2));
  Rng inlier_rng(Rng::derive(params.seed, 3));
  Rng outlier_rng(Rng::derive(params.seed, 4));
  Rng shuffle_rng(Rng::derive(params.seed, 5));

  BenchmarkInstance instance;
  instance.source.resize(3, n);
  for (int i = 0; i < n; ++i) {
    instance.source.col(i) =
        Eigen::Vector3d{points_rng.uniform01(), points_rng.uniform01(), points_rng.uniform01()};
  }

  // Bounded noise: resample until within the beta ball.
  Eigen::Matrix3Xd noisy(3, n);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d eta;
    do {
      eta = noise_rng.normal3(params.gamma);
    } while (eta.norm() > beta);
    noisy.col(i) = instance.source.col(i) + eta;
  }

  // Ground truth: mutual nearest neighbors within beta.
  std::vector<int> nn_fwd(n), nn_bwd(n);
  std::vector<double> dist_fwd(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Index best;
    dist_fwd[i] = std::sqrt(
        (noisy.colwise() - instance.source.col(i)).colwise().squaredNorm().minCoeff(&best));
    nn_fwd[i] = static_cast<int>(best);
  }
  for (int j = 0; j < n; ++j) {
    Eigen::Index best;
    (instance.source.colwise() - noisy.col(j)).colwise().squaredNorm().minCoeff(&best);
    nn_bwd[j] = static_cast<int>(best);
  }
  AssociationSet true_pairs;
  std::unordered_set<std::uint64_t> true_keys;
  for (int i = 0; i < n; ++i) {
    const int j = nn_fwd[i];
    if (nn_bwd[j] == i && dist_fwd[i] <= beta) {
      true_pairs.push_back({i, j});
      true_keys.insert(pairKey(i, j));
    }
  }

  const int n_inliers = static_cast<int>(std::lround((1.0 - params.outlier_rate) * m));
  const int n_outliers = m - n_inliers;
  if (n_inliers > static_cast<int>(true_pairs.size())) {
    throw std::runtime_error("generateSynthetic: requested " + std::to_string(n_inliers) +
                             " inliers but only " + std::to_string(true_pairs.size()) +
                             " mutual nearest neighbor pairs exist");
  }
  const std::uint64_t complement = static_cast<std::uint64_t>(n) * n - true_pairs.size();
  if (static_cast<std::uint64_t>(n_outliers) > complement) {
    throw std::runtime_error("generateSynthetic: not enough false correspondences available");
  }

  // Partial Fisher-Yates for the inlier subset.
  for (int k = 0; k < n_inliers; ++k) {
    const int pick = k + inlier_rng.uniformInt(static_cast<int>(true_pairs.size()) - k);
    std::swap(true_pairs[k], true_pairs[pick]);
  }

  AssociationSet putative(true_pairs.begin(), true_pairs.begin() + n_inliers);
  std::vector<std::uint8_t> mask(n_inliers, 1);

  std::unordered_set<std::uint64_t> used;
  while (static_cast<int>(putative.size()) < m) {
    const int i = outlier_rng.uniformInt(n);
    const int j = outlier_rng.uniformInt(n);
    const std::uint64_t key = pairKey(i, j);
    if (true_keys.count(key) || !used.insert(key).second) continue;
    putative.push_back({i, j});
    mask.push_back(0);
  }

  // Mix inliers and outliers.
  for (int k = m - 1; k > 0; --k) {
    const int pick = shuffle_rng.uniformInt(k + 1);
    std::swap(putative[k], putative[pick]);
    std::swap(mask[k], mask[pick]);
  }

  instance.ground_truth.R = randomRotation(transform_rng);
  instance.ground_truth.t = Eigen::Vector3d{transform_rng.uniform(-1.0, 1.0),
                                            transform_rng.uniform(-1.0, 1.0),
                                            transform_rng.uniform(-1.0, 1.0)};
  instance.target = instance.ground_truth.apply(noisy);
  instance.putative = std::move(putative);
  instance.inlier_mask = std::move(mask);
  return instance;
}

RigidTransform arunLeastSquares(const Eigen::Matrix3Xd& P, const Eigen::Matrix3Xd& Q) {
  if (P.cols() != Q.cols()) throw std::invalid_argument("arunLeastSquares: size mismatch");
  const Eigen::Index k = P.cols();
  if (k < 3) throw std::invalid_argument("arunLeastSquares: need at least 3 correspondences");

  const Eigen::Vector3d p_bar = P.rowwise().mean();
  const Eigen::Vector3d q_bar = Q.rowwise().mean();
  const Eigen::Matrix3d H =
      (P.colwise() - p_bar) * (Q.colwise() - q_bar).transpose() / static_cast<double>(k);

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  if (!(s(1) > 1e-12 * std::max(s(0), 1e-300))) {
    throw std::invalid_argument("arunLeastSquares: degenerate configuration (rank < 2)");
  }

  Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
  D(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  RigidTransform T;
  T.R = svd.matrixV() * D * svd.matrixU().transpose();
  T.t = q_bar - T.R * p_bar;
  return T;
}

RigidTransform arunLeastSquares(const Eigen::Matrix3Xd& source, const Eigen::Matrix3Xd& target,
                                const AssociationSet& associations, const Selection& selection) {
  Eigen::Matrix3Xd P(3, static_cast<Eigen::Index>(selection.size()));
  Eigen::Matrix3Xd Q(3, static_cast<Eigen::Index>(selection.size()));
  for (std::size_t k = 0; k < selection.size(); ++k) {
    const int idx = selection[k];
    if (idx < 0 || idx >= static_cast<int>(associations.size())) {
      throw std::invalid_argument("arunLeastSquares: selection index out of range");
    }
    const auto& a = associations[idx];
    P.col(static_cast<Eigen::Index>(k)) = source.col(a.p);
    Q.col(static_cast<Eigen::Index>(k)) = target.col(a.q);
  }
  return arunLeastSquares(P, Q);
}

double rotationError(const Eigen::Matrix3d& R_hat, const Eigen::Matrix3d& R) {
  // Geodesic angle of Rhat'R via atan2(|sin|, cos); the plain
  // acos((tr-1)/2) form floors out near 1e-8 for small angles.
  const Eigen::Matrix3d D = R_hat.transpose() * R;
  const Eigen::Vector3d skew(D(2, 1) - D(1, 2), D(0, 2) - D(2, 0), D(1, 0) - D(0, 1));
  return std::atan2(0.5 * skew.norm(), 0.5 * (D.trace() - 1.0));
}

double translationError(const Eigen::Vector3d& t_hat, const Eigen::Vector3d& t) {
  return (t_hat - t).norm();
}

PrecisionRecall precisionRecall(const Selection& selection,
                                const std::vector<std::uint8_t>& inlier_mask) {
  int total_inliers = 0;
  for (auto flag : inlier_mask) total_inliers += flag != 0;

  PrecisionRecall pr;
  if (selection.empty()) {
    pr.empty_selection = true;
    pr.precision = 1.0;  // convention so aggregate curves stay defined
    pr.recall = total_inliers == 0 ? 1.0 : 0.0;
    return pr;
  }
  int hits = 0;
  for (int idx : selection) {
    if (idx < 0 || idx >= static_cast<int>(inlier_mask.size())) {
      throw std::invalid_argument("precisionRecall: selection index out of range");
    }
    hits += inlier_mask[idx] != 0;
  }
  pr.precision = static_cast<double>(hits) / static_cast<double>(selection.size());
  pr.recall = total_inliers == 0 ? 1.0 : static_cast<double>(hits) / total_inliers;
  return pr;
}

void saveInstance(const BenchmarkInstance& instance, const std::filesystem::path& prefix) {
  const auto source_file = prefix.string() + ".source.bin";
  const auto target_file = prefix.string() + ".target.bin";
  io::writePointCloudBinary(source_file, instance.source);
  io::writePointCloudBinary(target_file, instance.target);

  json j;
  j["format"] = "consistency-benchmark-instance-v1";
  j["n_source"] = instance.source.cols();
  j["n_target"] = instance.target.cols();
  j["source_file"] = std::filesystem::path(source_file).filename().string();
  j["target_file"] = std::filesystem::path(target_file).filename().string();
  auto& putative = j["putative"] = json::array();
  for (const auto& a : instance.putative) putative.push_back({a.p, a.q});
  j["inlier_mask"] = instance.inlier_mask;
  std::vector<double> R(instance.ground_truth.R.data(), instance.ground_truth.R.data() + 9);
  j["rotation_col_major"] = R;
  j["translation"] = {instance.ground_truth.t(0), instance.ground_truth.t(1),
                      instance.ground_truth.t(2)};

  std::ofstream out(prefix.string() + ".json");
  if (!out) throw std::runtime_error("saveInstance: cannot write " + prefix.string() + ".json");
  out << j.dump(2) << '\n';
}

BenchmarkInstance loadInstance(const std::filesystem::path& prefix) {
  std::ifstream in(prefix.string() + ".json");
  if (!in) throw std::runtime_error("loadInstance: cannot read " + prefix.string() + ".json");
  json j;
  in >> j;

  BenchmarkInstance instance;
  const auto dir = prefix.parent_path();
  instance.source = io::readPointCloudBinary(dir / j.at("source_file").get<std::string>());
  instance.target = io::readPointCloudBinary(dir / j.at("target_file").get<std::string>());
  for (const auto& pair : j.at("putative")) {
    instance.putative.push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
  }
  instance.inlier_mask = j.at("inlier_mask").get<std::vector<std::uint8_t>>();
  const auto R = j.at("rotation_col_major").get<std::vector<double>>();
  if (R.size() != 9) throw std::runtime_error("loadInstance: malformed rotation");
  instance.ground_truth.R = Eigen::Map<const Eigen::Matrix3d>(R.data());
  const auto t = j.at("translation").get<std::vector<double>>();
  if (t.size() != 3) throw std::runtime_error("loadInstance: malformed translation");
  instance.ground_truth.t = Eigen::Vector3d(t[0], t[1], t[2]);
  return instance;
}

}  // namespace clipper::geometry
