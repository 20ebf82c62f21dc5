/**
 * @file oracles.h
 * @brief Exact small-scale solvers used as ground truth
 */

#pragma once

#include "clipper/types.h"

namespace clipper::oracles {

/// Subgraph density u' M u / u' u of a selection, diagonal included.
/// Throws std::invalid_argument on an empty selection.
double density(const Eigen::MatrixXd& M, const Selection& selection);

struct DewcResult {
  Selection selection;
  double density = 0.0;
};

/// Exhaustive densest edge-weighted clique: enumerates every clique of the
/// complement of C and maximizes density. Ties prefer larger cardinality,
/// then the lexicographically smaller index set. Throws when m > max_m.
DewcResult dewcBruteforce(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C, int max_m = 20);

struct MsrcResult {
  Selection clique;      ///< the maximal clique attaining the optimum
  double value = 0.0;    ///< spectral radius of M restricted to the clique
  Eigen::VectorXd v;     ///< Perron vector embedded in R^m, unit norm
};

/// Exact maximum-spectral-radius clique: Bron-Kerbosch (with pivoting)
/// enumeration of maximal cliques of the complement of C; the optimum over
/// all feasible supports is attained on one of them since the top
/// eigenvalue is monotone under growing principal submatrices.
/// Throws when m > max_m.
MsrcResult msrcBruteforce(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C, int max_m = 25);

struct MaxCliqueOptions {
  int max_vertices = 2000;
  double timeout_s = 0.0;  ///< 0 disables the timeout
};

struct MaxCliqueResult {
  Selection clique;
  bool optimal = true;  ///< false when the timeout fired; clique is best found
};

/// Exact maximum clique by branch and bound with a greedy-coloring bound.
/// Adjacency: any nonzero off-diagonal entry is an edge (symmetric input).
/// Among maximum cliques the lexicographically smallest index set is
/// returned (skipped on timeout).
MaxCliqueResult maxCliqueExact(const Eigen::MatrixXd& adjacency, const MaxCliqueOptions& options = {});

struct DensestSubgraphResult {
  Selection vertices;
  double density = 0.0;  ///< sum of internal edge weights / |S|, each edge once
};

/// Goldberg's exact densest subgraph: binary search on the density g with a
/// min-cut feasibility test (source->v at weighted degree, v<->u at w_uv,
/// v->sink at 2g). The diagonal of `weights` is ignored: this is the
/// edge-only density convention. On a clique S, the diagonal-inclusive
/// density used elsewhere equals 2 * edge density + mean diagonal over S.
DensestSubgraphResult densestSubgraphExact(const Eigen::MatrixXd& weights);

}  // namespace clipper::oracles
