/**
 * @file affinity_test.cpp
 * @brief Consistency score and affinity construction tests
 */

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

#include "clipper/affinity.h"
#include "clipper/random.h"
#include "fixtures.h"
#include "oracle_helpers.h"

using clipper::Association;
using clipper::AssociationSet;
using clipper::buildAffinity;
using clipper::consistencyScore;
using clipper::pairwiseDelta;
using clipper::ScoreParams;

TEST(ScoreParams, Validation) {
  EXPECT_THROW(ScoreParams(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ScoreParams(1.0, -1.0), std::invalid_argument);
  const ScoreParams p(0.3);
  EXPECT_DOUBLE_EQ(p.sigma, 0.1);
  const ScoreParams q = ScoreParams::fromNoiseBound(0.05);
  EXPECT_DOUBLE_EQ(q.epsilon, 0.1);
  EXPECT_DOUBLE_EQ(q.sigma, 0.1 / 3.0);
}

TEST(ConsistencyScore, KnownValues) {
  const ScoreParams params(0.5, 0.1);
  EXPECT_DOUBLE_EQ(consistencyScore(0.0, params), 1.0);
  EXPECT_DOUBLE_EQ(consistencyScore(0.6, params), 0.0);   // beyond the cutoff: exactly zero
  EXPECT_DOUBLE_EQ(consistencyScore(-0.51, params), 0.0);
  // delta = sigma
  EXPECT_NEAR(consistencyScore(0.1, params), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(consistencyScore(0.1, params), 0.606530, 1e-6);
}

TEST(ConsistencyScore, MatchesScalarOracleAndMonotone) {
  const ScoreParams params(0.4, 0.15);
  double previous = 2.0;
  for (int k = 0; k <= 200; ++k) {
    const double delta = 0.6 * k / 200.0;
    const double s = consistencyScore(delta, params);
    EXPECT_DOUBLE_EQ(s, testing_oracles::scoreOracle(delta, params.epsilon, params.sigma));
    EXPECT_DOUBLE_EQ(s, consistencyScore(-delta, params));
    EXPECT_LE(s, previous);  // non-increasing in |delta|
    previous = s;
  }
}

TEST(PairwiseDelta, KnownValues) {
  const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  EXPECT_DOUBLE_EQ(pairwiseDelta(zero, zero, zero, zero), 0.0);
  EXPECT_DOUBLE_EQ(pairwiseDelta(zero, {1, 0, 0}, zero, {0, 2, 0}), -1.0);
}

TEST(PairwiseDelta, RigidInvariance) {
  clipper::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector3d pi{rng.uniform01(), rng.uniform01(), rng.uniform01()};
    Eigen::Vector3d pj{rng.uniform01(), rng.uniform01(), rng.uniform01()};
    // random rotation from a normalized quaternion
    Eigen::Vector4d q{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    q.normalize();
    Eigen::Quaterniond quat(q(0), q(1), q(2), q(3));
    const Eigen::Matrix3d R = quat.toRotationMatrix();
    const Eigen::Vector3d t{rng.normal(), rng.normal(), rng.normal()};
    EXPECT_NEAR(pairwiseDelta(pi, pj, R * pi + t, R * pj + t), 0.0, 1e-12);
  }
}

TEST(BuildAffinity, TwoTriangleScenePattern) {
  const auto scene = fixtures::twoTriangleScene();
  const auto graph = buildAffinity(scene.source, scene.target, scene.associations,
                                   ScoreParams(0.15, 0.05));

  // correct triangle pairs: exact distance preservation
  EXPECT_DOUBLE_EQ(graph.M(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(graph.M(0, 3), 1.0);
  EXPECT_DOUBLE_EQ(graph.M(1, 3), 1.0);
  // competing triangle pairs: positive but weaker
  EXPECT_GT(graph.M(0, 2), 0.0);
  EXPECT_GT(graph.M(0, 4), 0.0);
  EXPECT_GT(graph.M(2, 4), 0.0);
  EXPECT_LT(graph.M(2, 4), 1.0);
  // shared endpoints are forbidden
  EXPECT_DOUBLE_EQ(graph.M(1, 2), 0.0);
  EXPECT_DOUBLE_EQ(graph.C(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(graph.M(3, 4), 0.0);
  EXPECT_DOUBLE_EQ(graph.C(3, 4), 1.0);
  // cross pairs are geometrically inconsistent
  EXPECT_DOUBLE_EQ(graph.M(1, 4), 0.0);
  EXPECT_DOUBLE_EQ(graph.M(2, 3), 0.0);
}

TEST(BuildAffinity, NoiselessAllInlier) {
  clipper::Rng rng(3);
  Eigen::Matrix3Xd source(3, 8);
  for (int i = 0; i < 8; ++i) {
    source.col(i) << rng.uniform01(), rng.uniform01(), rng.uniform01();
  }
  Eigen::Quaterniond quat(0.2, -0.4, 0.7, 0.5);
  quat.normalize();
  const Eigen::Matrix3d R = quat.toRotationMatrix();
  const Eigen::Vector3d t{0.3, -2.0, 0.1};
  const Eigen::Matrix3Xd target = (R * source).colwise() + t;

  AssociationSet assoc;
  for (int i = 0; i < 8; ++i) assoc.push_back({i, i});
  const auto graph = buildAffinity(source, target, assoc, ScoreParams(0.1));

  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      EXPECT_DOUBLE_EQ(graph.M(i, j), 1.0);
      EXPECT_DOUBLE_EQ(graph.C(i, j), 0.0);
    }
  }
}

TEST(BuildAffinity, MatchesEntrywiseRecomputation) {
  clipper::Rng rng(11);
  Eigen::Matrix3Xd source(3, 6), target(3, 6);
  for (int i = 0; i < 6; ++i) {
    source.col(i) << rng.uniform01(), rng.uniform01(), rng.uniform01();
    target.col(i) << rng.uniform01(), rng.uniform01(), rng.uniform01();
  }
  AssociationSet assoc = {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {4, 5}, {5, 4}};
  const ScoreParams params(0.8, 0.25);
  const auto graph = buildAffinity(source, target, assoc, params);

  for (int i = 0; i < 6; ++i) {
    EXPECT_DOUBLE_EQ(graph.M(i, i), 1.0);
    for (int j = 0; j < 6; ++j) {
      if (i == j) continue;
      const auto& a = assoc[i];
      const auto& b = assoc[j];
      double expected = 0.0;
      if (a.p != b.p && a.q != b.q) {
        const double delta = (source.col(a.p) - source.col(b.p)).norm() -
                             (target.col(a.q) - target.col(b.q)).norm();
        expected = testing_oracles::scoreOracle(delta, params.epsilon, params.sigma);
        if (expected < clipper::kScoreSnapTol) expected = 0.0;
      }
      EXPECT_DOUBLE_EQ(graph.M(i, j), expected) << i << "," << j;
      EXPECT_DOUBLE_EQ(graph.C(i, j), expected == 0.0 ? 1.0 : 0.0);
    }
  }
}

TEST(BuildAffinity, SymmetryCouplingAndRigidInvariance) {
  clipper::Rng rng(23);
  Eigen::Matrix3Xd source(3, 10), target(3, 10);
  for (int i = 0; i < 10; ++i) {
    source.col(i) << rng.uniform01(), rng.uniform01(), rng.uniform01();
    target.col(i) << rng.uniform01(), rng.uniform01(), rng.uniform01();
  }
  AssociationSet assoc;
  for (int i = 0; i < 10; ++i) assoc.push_back({i, (i + 3) % 10});
  const ScoreParams params(0.6, 0.2);
  const auto graph = buildAffinity(source, target, assoc, params);

  EXPECT_EQ(graph.M, graph.M.transpose());
  EXPECT_EQ(graph.C, graph.C.transpose());
  for (int i = 0; i < 10; ++i) {
    EXPECT_DOUBLE_EQ(graph.C(i, i), 0.0);
    for (int j = 0; j < 10; ++j) {
      if (i == j) continue;
      EXPECT_EQ(graph.C(i, j) == 1.0, graph.M(i, j) == 0.0);
      EXPECT_GE(graph.M(i, j), 0.0);
      EXPECT_LE(graph.M(i, j), 1.0);
    }
  }

  // rotating + translating the target leaves M unchanged
  Eigen::Quaterniond quat(1.0, 2.0, -0.5, 0.25);
  quat.normalize();
  const Eigen::Matrix3Xd moved =
      (quat.toRotationMatrix() * target).colwise() + Eigen::Vector3d{5, -1, 2};
  const auto graph2 = buildAffinity(source, moved, assoc, params);
  EXPECT_LT((graph.M - graph2.M).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BuildAffinity, SnapsTinyScoresIntoConstraints) {
  // sigma = epsilon/10: near the cutoff the score drops below the snap
  // threshold while |delta| <= epsilon.
  Eigen::Matrix3Xd source(3, 3), target(3, 3);
  source.col(0) << 0, 0, 0;
  source.col(1) << 1.0, 0, 0;
  source.col(2) << 0, 2.0, 0;
  target = source;
  target(0, 1) = 1.095;  // delta ~ -0.095, within epsilon = 0.1
  const AssociationSet assoc = {{0, 0}, {1, 1}, {2, 2}};
  const auto graph = buildAffinity(source, target, assoc, ScoreParams(0.1, 0.01));
  EXPECT_DOUBLE_EQ(graph.M(0, 1), 0.0);  // exp(-45.125) snapped to exact zero
  EXPECT_DOUBLE_EQ(graph.C(0, 1), 1.0);
}

TEST(BuildAffinity, DiagonalOverrideAndErrors) {
  Eigen::Matrix3Xd cloud(3, 4);
  cloud << 0, 1, 0, 1,
           0, 0, 1, 1,
           0, 0, 0, 0;
  AssociationSet assoc = {{0, 0}, {1, 1}, {2, 2}};
  Eigen::VectorXd diag(3);
  diag << 0.5, 1.0, 0.25;
  const auto graph = buildAffinity(cloud, cloud, assoc, ScoreParams(0.1), diag);
  EXPECT_DOUBLE_EQ(graph.M(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(graph.M(2, 2), 0.25);

  EXPECT_THROW(buildAffinity(cloud, cloud, {}, ScoreParams(0.1)), std::invalid_argument);
  EXPECT_THROW(buildAffinity(cloud, cloud, {{0, 4}}, ScoreParams(0.1)), std::invalid_argument);
  EXPECT_THROW(buildAffinity(cloud, cloud, {{-1, 0}}, ScoreParams(0.1)), std::invalid_argument);
  EXPECT_THROW(buildAffinity(cloud, cloud, {{0, 0}, {0, 0}}, ScoreParams(0.1)),
               std::invalid_argument);
  Eigen::VectorXd bad(2);
  bad << 1, 1;
  EXPECT_THROW(buildAffinity(cloud, cloud, assoc, ScoreParams(0.1), bad), std::invalid_argument);
}

TEST(OneToOneConflicts, MarksSharedEndpointsOnly) {
  const AssociationSet assoc = {{0, 0}, {1, 1}, {1, 3}, {2, 2}, {2, 4}, {3, 2}};
  const auto conflicts = clipper::oneToOneConflicts(assoc);
  EXPECT_EQ(conflicts, conflicts.transpose());
  EXPECT_DOUBLE_EQ(conflicts(1, 2), 1.0);  // share p = 1
  EXPECT_DOUBLE_EQ(conflicts(3, 4), 1.0);  // share p = 2
  EXPECT_DOUBLE_EQ(conflicts(3, 5), 1.0);  // share q = 2
  EXPECT_DOUBLE_EQ(conflicts(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(conflicts(2, 5), 0.0);
  for (int i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(conflicts(i, i), 0.0);
}
