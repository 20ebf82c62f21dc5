/**
 * @file fixtures.h
 * @brief Shared hand-built problem instances for tests.
 */

#pragma once

#include <Eigen/Dense>

#include "clipper/types.h"

namespace fixtures {

/// 5x5 affinity with two competing candidate subgraphs: a tight 2-block of
/// unit scores and a loose 3-block of 0.2 cross-scores. Densities are
/// exactly 2.0 for {0,1} and 1.4 for {2,3,4}, so the density objective
/// prefers the smaller but more consistent block while cardinality-style
/// objectives prefer the larger one.
inline clipper::ConsistencyGraph competingBlocks() {
  clipper::ConsistencyGraph graph;
  graph.M.resize(5, 5);
  graph.M << 1.0, 1.0, 0.0, 0.0, 0.0,
             1.0, 1.0, 0.0, 0.0, 0.0,
             0.0, 0.0, 1.0, 0.2, 0.2,
             0.0, 0.0, 0.2, 1.0, 0.2,
             0.0, 0.0, 0.2, 0.2, 1.0;
  graph.C = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i != j && graph.M(i, j) == 0.0) graph.C(i, j) = 1.0;
    }
  }
  return graph;
}

/// Small registration scene with five putative associations over points
/// {a,b,c} -> {a',b',c',d',e'}: u0=(a,a'), u1=(b,b'), u3=(c,c') are correct;
/// u2=(b,d') and u4=(c,e') are wrong but mutually consistent with u0, so the
/// thresholded graph contains two competing triangles {u0,u1,u3} and
/// {u0,u2,u4}. u1/u2 share b and u3/u4 share c, so those pairs are
/// forbidden; the remaining cross pairs are geometrically inconsistent.
struct TwoTriangleScene {
  Eigen::Matrix3Xd source;
  Eigen::Matrix3Xd target;
  clipper::AssociationSet associations;
};

inline TwoTriangleScene twoTriangleScene() {
  TwoTriangleScene scene;
  scene.source.resize(3, 3);
  scene.source.col(0) << 0.0, 0.0, 0.0;  // a
  scene.source.col(1) << 1.0, 0.0, 0.0;  // b
  scene.source.col(2) << 0.5, 1.0, 0.0;  // c

  scene.target.resize(3, 5);
  scene.target.col(0) << 0.0, 0.0, 0.0;            // a'
  scene.target.col(1) << 1.0, 0.0, 0.0;            // b'
  scene.target.col(2) << 0.5, 1.0, 0.0;            // c'
  scene.target.col(3) << -0.967884, -0.352281, 0;  // d' : |a'd'| = 1.03
  scene.target.col(4) << -0.116677, -1.152142, 0;  // e' : |a'e'| ~ 1.158

  scene.associations = {{0, 0}, {1, 1}, {1, 3}, {2, 2}, {2, 4}};
  return scene;
}

}  // namespace fixtures
