/**
 * @file sdp.h
 * @brief Convex semidefinite relaxation of the MSRC with rank-1 recovery
 *
 * Maximizes Tr(MX) over the doubly nonnegative cone subject to the zero
 * pattern of M and Tr(X) <= 1, by two-block operator splitting: alternating
 * projections onto (a) the pattern/nonnegativity/trace set and (b) the PSD
 * cone, with a scaled dual update.
 */

#pragma once

#include "clipper/types.h"

namespace clipper::sdp {

struct SdpParams {
  double tol = 1e-6;     ///< convergence threshold on max(primal, dual) residual
  int max_iters = 20000;
  double rho = 1.0;      ///< initial splitting penalty; rebalanced every 50 iters
  int size_cap = 200;    ///< refuse larger problems (dense eigendecompositions)
};

struct SdpSolution {
  Eigen::MatrixXd X;        ///< symmetric, pattern/nonnegativity/trace exact
  double objective = 0.0;   ///< Tr(MX)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Solves the relaxation. Throws std::invalid_argument when m exceeds
/// params.size_cap; non-convergence is reported through the flag and
/// residuals, never silently.
SdpSolution solveMsrcSdr(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C,
                         const SdpParams& params = {});

/// True iff lambda_2 / lambda_1 <= ratio_tol (false for non-positive
/// lambda_1).
bool checkRank1(const Eigen::MatrixXd& X, double ratio_tol = 1e-3);

/// Principal eigenvector of a rank-1 solution, unit norm, sign-fixed
/// nonnegative with negative dust clamped to zero. Throws
/// std::invalid_argument when the rank-1 check fails.
Eigen::VectorXd extract(const Eigen::MatrixXd& X, double ratio_tol = 1e-3);

}  // namespace clipper::sdp
