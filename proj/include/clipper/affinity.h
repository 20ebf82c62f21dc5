/**
 * @file affinity.h
 * @brief Weighted consistency graph construction from putative associations
 */

#pragma once

#include <optional>

#include "clipper/types.h"

namespace clipper {

/// Parameters of the pairwise consistency score: a hard cutoff `epsilon`
/// on the distance discrepancy and a Gaussian falloff `sigma`.
struct ScoreParams {
  double epsilon;
  double sigma;

  /// Both lengths must be positive.
  ScoreParams(double epsilon_, double sigma_);

  /// Cutoff only; sigma defaults to epsilon/3 so the score at the cutoff
  /// is exp(-4.5) ~ 0.011 and the truncation step is negligible.
  explicit ScoreParams(double epsilon_) : ScoreParams(epsilon_, epsilon_ / 3.0) {}

  /// For data whose per-point noise is bounded by `beta`: the pairwise
  /// distance discrepancy is then bounded by 2*beta, which becomes epsilon.
  static ScoreParams fromNoiseBound(double beta) { return ScoreParams(2.0 * beta); }
};

/// Scores at or below this value are snapped to exactly 0 so the constraint
/// matrix and the affinity support agree bit-for-bit.
inline constexpr double kScoreSnapTol = 1e-9;

/// Gaussian consistency score with hard cutoff: exp(-delta^2 / (2 sigma^2))
/// for |delta| <= epsilon, exactly 0 beyond.
double consistencyScore(double delta, const ScoreParams& params);

/// Distance-invariant discrepancy of two associations (pi->qi), (pj->qj):
/// ||pi - pj|| - ||qi - qj||.
double pairwiseDelta(const Eigen::Vector3d& pi, const Eigen::Vector3d& pj,
                     const Eigen::Vector3d& qi, const Eigen::Vector3d& qj);

/// Builds the affinity matrix M and constraint matrix C for a set of
/// putative associations between two point clouds (3xN, one point per
/// column).
///
/// Off-diagonal entries score the pairwise distance discrepancy; pairs of
/// associations sharing a source or target point are forbidden (score 0,
/// constraint 1) regardless of geometry. The diagonal is 1 unless
/// per-association scores are supplied. Scores below kScoreSnapTol are
/// snapped to exact zero and marked in C.
///
/// Throws std::invalid_argument on empty/duplicate associations or
/// out-of-bounds indices.
ConsistencyGraph buildAffinity(const Eigen::Matrix3Xd& source,
                               const Eigen::Matrix3Xd& target,
                               const AssociationSet& associations,
                               const ScoreParams& params,
                               const std::optional<Eigen::VectorXd>& diagonal_scores = std::nullopt);

/// Binary matrix marking association pairs that share a source or a target
/// point (the one-to-one constraints), independent of geometry.
Eigen::MatrixXd oneToOneConflicts(const AssociationSet& associations);

}  // namespace clipper
