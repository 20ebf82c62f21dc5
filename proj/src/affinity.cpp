#include "clipper/affinity.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace clipper {

ScoreParams::ScoreParams(double epsilon_, double sigma_) : epsilon(epsilon_), sigma(sigma_) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("ScoreParams: epsilon must be positive");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("ScoreParams: sigma must be positive");
  }
}

double consistencyScore(double delta, const ScoreParams& params) {
  if (std::abs(delta) > params.epsilon) return 0.0;
  const double z = delta / params.sigma;
  return std::exp(-0.5 * z * z);
}

double pairwiseDelta(const Eigen::Vector3d& pi, const Eigen::Vector3d& pj,
                     const Eigen::Vector3d& qi, const Eigen::Vector3d& qj) {
  return (pi - pj).norm() - (qi - qj).norm();
}

ConsistencyGraph buildAffinity(const Eigen::Matrix3Xd& source, const Eigen::Matrix3Xd& target,
                               const AssociationSet& associations, const ScoreParams& params,
                               const std::optional<Eigen::VectorXd>& diagonal_scores) {
  const int m = static_cast<int>(associations.size());
  if (m == 0) throw std::invalid_argument("buildAffinity: empty association set");

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(associations.size());
  for (int k = 0; k < m; ++k) {
    const auto& [p, q] = associations[k];
    if (p < 0 || p >= source.cols() || q < 0 || q >= target.cols()) {
      throw std::invalid_argument("buildAffinity: association " + std::to_string(k) +
                                  " out of bounds");
    }
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p)) << 32) |
        static_cast<std::uint32_t>(q);
    if (!seen.insert(key).second) {
      throw std::invalid_argument("buildAffinity: duplicate association " + std::to_string(k));
    }
  }
  if (diagonal_scores && diagonal_scores->size() != m) {
    throw std::invalid_argument("buildAffinity: diagonal score length mismatch");
  }

  ConsistencyGraph graph;
  graph.M = Eigen::MatrixXd::Zero(m, m);
  graph.C = Eigen::MatrixXd::Zero(m, m);

  for (int i = 0; i < m; ++i) {
    graph.M(i, i) = diagonal_scores ? (*diagonal_scores)(i) : 1.0;
    for (int j = i + 1; j < m; ++j) {
      const auto& a = associations[i];
      const auto& b = associations[j];
      double score = 0.0;
      // Associations sharing a source or target point can never be jointly
      // selected, whatever the geometry says.
      if (a.p != b.p && a.q != b.q) {
        const double delta = pairwiseDelta(source.col(a.p), source.col(b.p),
                                           target.col(a.q), target.col(b.q));
        score = consistencyScore(delta, params);
        if (score < kScoreSnapTol) score = 0.0;
      }
      graph.M(i, j) = graph.M(j, i) = score;
      if (score == 0.0) graph.C(i, j) = graph.C(j, i) = 1.0;
    }
  }
  return graph;
}

Eigen::MatrixXd oneToOneConflicts(const AssociationSet& associations) {
  const int m = static_cast<int>(associations.size());
  Eigen::MatrixXd conflicts = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (associations[i].p == associations[j].p || associations[i].q == associations[j].q) {
        conflicts(i, j) = conflicts(j, i) = 1.0;
      }
    }
  }
  return conflicts;
}

}  // namespace clipper
