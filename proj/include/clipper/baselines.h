/**
 * @file baselines.h
 * @brief Reference correspondence-selection baselines
 */

#pragma once

#include "clipper/oracles.h"
#include "clipper/types.h"

namespace clipper::baselines {

/// Spectral matching: greedy discretization of the principal eigenvector.
/// Repeatedly selects the largest remaining entry, zeroes out entries in
/// conflict with it (per the binary `conflicts` matrix, typically the
/// one-to-one constraints), and stops when the next candidate's entry is
/// zero. The result is not guaranteed to be a clique of the consistency
/// graph.
Selection spectralMatching(const Eigen::MatrixXd& M, const Eigen::MatrixXd& conflicts,
                           double zero_tol = 1e-9);

/// Spectral matching without conflict removal.
Selection spectralMatching(const Eigen::MatrixXd& M, double zero_tol = 1e-9);

/// Unweighted-consistency-graph pipeline: binarize M (edge iff
/// M(i,j) >= threshold, i != j) and solve maximum clique exactly. The
/// default threshold keeps every positive edge of a snapped affinity
/// matrix.
Selection thresholdThenMaxClique(const Eigen::MatrixXd& M, double threshold = 1e-9,
                                 const oracles::MaxCliqueOptions& options = {});

}  // namespace clipper::baselines
