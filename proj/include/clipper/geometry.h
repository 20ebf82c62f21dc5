/**
 * @file geometry.h
 * @brief Rigid registration, error metrics, and the synthetic benchmark
 *        generator with bounded noise and controlled outlier rates
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "clipper/types.h"

namespace clipper::geometry {

struct RigidTransform {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return R * p + t; }
  Eigen::Matrix3Xd apply(const Eigen::Matrix3Xd& cloud) const {
    return (R * cloud).colwise() + t;
  }
  RigidTransform inverse() const { return {R.transpose(), -(R.transpose() * t)}; }
};

struct SyntheticParams {
  int n_points = 500;        ///< model points sampled uniformly in [0,1]^3
  int m_putative = 100;      ///< putative associations to emit
  double outlier_rate = 0.8; ///< in [0,1)
  double gamma = 0.01;       ///< Gaussian noise sigma per axis
  double beta_factor = 5.54; ///< noise bound beta = beta_factor * gamma
  std::uint64_t seed = 0;

  double beta() const { return beta_factor * gamma; }
  void validate() const;  ///< throws std::invalid_argument
};

struct BenchmarkInstance {
  Eigen::Matrix3Xd source;
  Eigen::Matrix3Xd target;
  AssociationSet putative;
  std::vector<std::uint8_t> inlier_mask;  ///< one flag per putative association
  RigidTransform ground_truth;            ///< maps source frame into target frame
};

/// Generates a registration instance: uniform points in the unit cube, a
/// noisy copy with rejection-sampled bounded Gaussian noise (||eta|| <=
/// beta), ground-truth correspondences by mutual nearest neighbor within
/// beta, false correspondences drawn from their complement, mixed per
/// outlier_rate (inlier count = round((1 - rate) * m)), and a random rigid
/// transform applied to the target cloud.
///
/// Substreams of params.seed (see Rng::derive): 0 points, 1 noise,
/// 2 transform, 3 inlier subset, 4 outlier pairs, 5 final shuffle.
///
/// Throws std::runtime_error when more inliers are requested than mutual
/// nearest neighbor pairs exist.
BenchmarkInstance generateSynthetic(const SyntheticParams& params);

/// Least-squares rigid transform mapping matched columns of P onto Q via
/// SVD of the cross-covariance, reflection-corrected so R is in SO(3).
/// Throws std::invalid_argument on fewer than 3 points or a degenerate
/// (rank < 2) configuration.
RigidTransform arunLeastSquares(const Eigen::Matrix3Xd& P, const Eigen::Matrix3Xd& Q);

/// Same, on the associations picked out by `selection`.
RigidTransform arunLeastSquares(const Eigen::Matrix3Xd& source, const Eigen::Matrix3Xd& target,
                                const AssociationSet& associations, const Selection& selection);

/// Geodesic rotation distance ||Log(Rhat' R)|| in radians.
double rotationError(const Eigen::Matrix3d& R_hat, const Eigen::Matrix3d& R);

double translationError(const Eigen::Vector3d& t_hat, const Eigen::Vector3d& t);

struct PrecisionRecall {
  double precision = 1.0;
  double recall = 1.0;
  bool empty_selection = false;  ///< precision defaulted to 1 by convention
};

PrecisionRecall precisionRecall(const Selection& selection,
                                const std::vector<std::uint8_t>& inlier_mask);

/// Writes `<prefix>.json` (parameters, associations, mask, transform) plus
/// `<prefix>.source.bin` / `<prefix>.target.bin` little-endian f64 triples.
void saveInstance(const BenchmarkInstance& instance, const std::filesystem::path& prefix);

BenchmarkInstance loadInstance(const std::filesystem::path& prefix);

}  // namespace clipper::geometry
