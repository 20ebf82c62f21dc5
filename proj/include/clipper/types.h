/**
 * @file types.h
 * @brief Core data types shared across the library
 */

#pragma once

#include <vector>

#include <Eigen/Core>

namespace clipper {

/// One putative correspondence: an index into the source point set paired
/// with an index into the target point set.
struct Association {
  int p;  ///< source index
  int q;  ///< target index

  friend bool operator==(const Association&, const Association&) = default;
};

using AssociationSet = std::vector<Association>;

/// Indices of selected associations (rows/cols of the affinity matrix),
/// kept sorted ascending.
using Selection = std::vector<int>;

/// Symmetric m-by-m matrix of pairwise consistency scores in [0,1].
using Affinity = Eigen::MatrixXd;

/// Symmetric binary m-by-m matrix with zero diagonal; C(i,j) = 1 marks a
/// forbidden pair and coincides with the zero pattern of the affinity.
using Constraint = Eigen::MatrixXd;

/// Weighted consistency graph in matrix form. Off the diagonal the two
/// members are coupled: C(i,j) = 1 exactly where M(i,j) = 0.
struct ConsistencyGraph {
  Affinity M;
  Constraint C;

  int size() const { return static_cast<int>(M.rows()); }
};

}  // namespace clipper
