/**
 * @file solver.h
 * @brief Homotopy projected gradient ascent for the penalized MSRC objective
 *
 * Maximizes F_d = v' (M - d C) v over the nonnegative part of the unit
 * sphere, raising the penalty d until no forbidden pair is jointly active,
 * then rounds the continuous solution to a clique.
 */

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "clipper/types.h"

namespace clipper {

struct SolverParams {
  double inner_tol = 1e-9;          ///< convergence threshold on ||v_new - v_old||
  int max_inner_iters = 1000;       ///< gradient steps per penalty value
  int max_outer_iters = 100;        ///< penalty increases
  double zero_tol = 1e-9;           ///< entries at or below this count as zero
  double line_search_shrink = 0.5;  ///< backtracking factor, in (0,1)
  double min_step = 1e-9;           ///< smallest backtracking step size
  bool record_trace = false;        ///< keep (d, F_d) after each accepted step

  /// Throws std::invalid_argument when out of range.
  void validate() const;
};

/// Continuous solution of the penalized problem plus solver diagnostics.
struct DenseSolution {
  Eigen::VectorXd v;            ///< nonnegative, unit Euclidean norm
  double penalty = 0.0;         ///< final homotopy penalty d
  double objective = 0.0;       ///< F_d = v' (M - d C) v at the returned v
  int outer_iters = 0;
  int inner_iters = 0;          ///< accepted gradient steps, all penalties
  bool constraints_satisfied = false;
  bool forced_feasible = false;  ///< outer cap hit; violating entries hard-zeroed
  bool inner_cap_hit = false;    ///< some inner loop stopped on max_inner_iters
  std::vector<std::pair<double, double>> trace;  ///< (d, F_d) per accepted step
};

/// Clique estimate obtained by rounding a continuous solution.
struct CliqueEstimate {
  Selection selected;     ///< sorted association indices; induces a clique
  int omega_hat = 0;      ///< round(v' M v), clamped to [1, nnz(v)]
  double density = 0.0;   ///< u' M u / u' u on the selection, diagonal included
};

/// Principal eigenvector of a symmetric nonnegative matrix by power
/// iteration: unit norm, nonnegative, residual ||Mv - lambda v|| within
/// tol * lambda. Throws std::runtime_error when the iteration cap is hit
/// without meeting the residual (e.g. zero matrix).
Eigen::VectorXd principalEigenvector(const Eigen::MatrixXd& M, double tol = 1e-8,
                                     int max_iters = 50000);

/// Power iteration that reports instead of throwing; consumers that only
/// need a warm start or an ordering keep the best iterate on slow spectra.
struct EigenpairEstimate {
  Eigen::VectorXd v;
  double lambda = 0.0;
  double residual = 0.0;
  bool converged = false;
};

EigenpairEstimate principalEigenpairBestEffort(const Eigen::MatrixXd& M, double tol = 1e-8,
                                               int max_iters = 50000);

/// Gradient of F_d: 2 (M v - d C v).
Eigen::VectorXd msrcGradient(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C, double d,
                             const Eigen::VectorXd& v);

/// The solver's projection step, in this order: normalize to unit norm,
/// then clamp negative entries to zero. Throws std::invalid_argument on a
/// vector with no positive entry.
Eigen::VectorXd projectToNonnegativeSphere(const Eigen::VectorXd& v);

/// Penalty increase: the mean of (Mv)_i / (Cv)_i over the indices with
/// (Cv)_i > 0 and v_i > zero_tol; zero when no such index exists.
double penaltyIncrement(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C,
                        const Eigen::VectorXd& v, double zero_tol = 1e-9);

/// Runs the homotopy: projected gradient ascent at fixed d with
/// backtracking line search (step starts at 1, shrinks until the projected
/// candidate strictly increases F_d), then d grows by penaltyIncrement
/// until no pair with C(i,j) = 1 has both entries above zero_tol.
///
/// If the outer-iteration cap is exhausted while still infeasible, the
/// smaller entry of each violating pair is zeroed and the result flagged
/// via forced_feasible; the returned v always satisfies the constraints.
DenseSolution solveMsrc(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C,
                        const SolverParams& params = {},
                        const std::optional<Eigen::VectorXd>& initial = std::nullopt);

/// Rounds a continuous solution to a clique: omega_hat = round(v' M v)
/// clamped to [1, nnz(v)]; the omega_hat largest entries of v are selected
/// (ties keep the lower index). Pairs violating the zero pattern of M
/// (possible only through zero_tol slack) are repaired by dropping the
/// lower-valued member until the selection is a clique.
CliqueEstimate roundSolution(const Eigen::VectorXd& v, const Eigen::MatrixXd& M,
                             double zero_tol = 1e-9);

inline CliqueEstimate roundSolution(const DenseSolution& solution, const Eigen::MatrixXd& M,
                                    double zero_tol = 1e-9) {
  return roundSolution(solution.v, M, zero_tol);
}

/// Convenience pipeline: solve then round.
CliqueEstimate findDensestClique(const ConsistencyGraph& graph, const SolverParams& params = {});

}  // namespace clipper
