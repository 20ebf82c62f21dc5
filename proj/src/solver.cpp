#include "clipper/solver.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace clipper {

namespace {

/// A * v accumulated over the nonzero columns picked out by v. Falls back
/// to the dense product while the iterate is mostly dense.
Eigen::VectorXd maskedProduct(const Eigen::MatrixXd& A, const Eigen::VectorXd& v) {
  const Eigen::Index m = A.rows();
  Eigen::Index nnz = 0;
  for (Eigen::Index j = 0; j < m; ++j) nnz += (v(j) != 0.0);
  if (2 * nnz >= m) return A * v;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (v(j) != 0.0) w.noalias() += v(j) * A.col(j);
  }
  return w;
}

struct PowerResult {
  Eigen::VectorXd v;
  double lambda = 0.0;
  double residual = 0.0;
  bool converged = false;
};

PowerResult powerIteration(const Eigen::MatrixXd& M, double tol, int max_iters) {
  const Eigen::Index m = M.rows();
  PowerResult result;
  result.v = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(static_cast<double>(m)));
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd w = M * result.v;
    result.lambda = result.v.dot(w);
    result.residual = (w - result.lambda * result.v).norm();
    if (result.lambda > 0.0 && result.residual <= tol * result.lambda) {
      result.converged = true;
      return result;
    }
    const double norm = w.norm();
    if (norm == 0.0) return result;  // zero matrix: nothing to iterate on
    result.v = w / norm;
  }
  return result;
}

bool feasibleSupport(const Eigen::MatrixXd& C, const Eigen::VectorXd& v, double zero_tol) {
  const Eigen::Index m = v.size();
  Eigen::VectorXd active(m);
  for (Eigen::Index i = 0; i < m; ++i) active(i) = v(i) > zero_tol ? 1.0 : 0.0;
  const Eigen::VectorXd hits = maskedProduct(C, active);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (active(i) > 0.0 && hits(i) > 0.0) return false;
  }
  return true;
}

void requireSquarePair(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C) {
  if (M.rows() != M.cols() || C.rows() != C.cols() || M.rows() != C.rows()) {
    throw std::invalid_argument("affinity and constraint matrices must be square and same size");
  }
}

}  // namespace

void SolverParams::validate() const {
  if (!(inner_tol > 0.0) || !(zero_tol > 0.0) || !(min_step > 0.0)) {
    throw std::invalid_argument("SolverParams: tolerances must be positive");
  }
  if (max_inner_iters <= 0 || max_outer_iters <= 0) {
    throw std::invalid_argument("SolverParams: iteration caps must be positive");
  }
  if (!(line_search_shrink > 0.0) || !(line_search_shrink < 1.0)) {
    throw std::invalid_argument("SolverParams: line_search_shrink must be in (0,1)");
  }
}

Eigen::VectorXd principalEigenvector(const Eigen::MatrixXd& M, double tol, int max_iters) {
  if (M.rows() != M.cols()) throw std::invalid_argument("principalEigenvector: matrix not square");
  const PowerResult result = powerIteration(M, tol, max_iters);
  if (!result.converged) {
    throw std::runtime_error("principalEigenvector: power iteration did not converge (residual " +
                             std::to_string(result.residual) + ")");
  }
  return result.v;
}

EigenpairEstimate principalEigenpairBestEffort(const Eigen::MatrixXd& M, double tol,
                                               int max_iters) {
  if (M.rows() != M.cols()) throw std::invalid_argument("principalEigenpairBestEffort: matrix not square");
  const PowerResult result = powerIteration(M, tol, max_iters);
  return {result.v, result.lambda, result.residual, result.converged};
}

Eigen::VectorXd msrcGradient(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C, double d,
                             const Eigen::VectorXd& v) {
  return 2.0 * (M * v - d * (C * v));
}

Eigen::VectorXd projectToNonnegativeSphere(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (norm == 0.0) throw std::invalid_argument("project: zero vector");
  if (v.maxCoeff() <= 0.0) throw std::invalid_argument("project: no positive entry");
  return (v / norm).cwiseMax(0.0);
}

double penaltyIncrement(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C,
                        const Eigen::VectorXd& v, double zero_tol) {
  requireSquarePair(M, C);
  // Entries at or below zero_tol count as zero throughout; without the mask,
  // eigenvector dust ends up as a denominator and blows the increment up.
  Eigen::VectorXd masked = v;
  for (Eigen::Index i = 0; i < masked.size(); ++i) {
    if (masked(i) <= zero_tol) masked(i) = 0.0;
  }
  const Eigen::VectorXd Mv = maskedProduct(M, masked);
  const Eigen::VectorXd Cv = maskedProduct(C, masked);
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < masked.size(); ++i) {
    if (Cv(i) > 0.0 && masked(i) > 0.0) {
      sum += Mv(i) / Cv(i);
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

DenseSolution solveMsrc(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C,
                        const SolverParams& params, const std::optional<Eigen::VectorXd>& initial) {
  params.validate();
  requireSquarePair(M, C);
  const Eigen::Index m = M.rows();
  if (m == 0) throw std::invalid_argument("solveMsrc: empty problem");

  DenseSolution sol;

  Eigen::VectorXd v;
  if (initial) {
    if (initial->size() != m) throw std::invalid_argument("solveMsrc: initial size mismatch");
    v = projectToNonnegativeSphere(*initial);
  } else {
    // Warm start from the d = 0 optimum; the homotopy refines it, so a
    // best-effort power iterate is enough even on slow spectra.
    v = powerIteration(M, 1e-8, 10000).v;
    // Power iteration stagnates with residual-scale mass on non-dominant
    // vertices. Exact arithmetic would leave exact zeros there, and the
    // penalty schedule divides by (Cv)_i, so that dust must go; the ascent
    // re-enters any vertex that actually helps.
    const double floor = 1e-4 * v.maxCoeff();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (v(i) < floor) v(i) = 0.0;
    }
    v /= v.norm();
  }

  double d = penaltyIncrement(M, C, v, params.zero_tol);

  Eigen::MatrixXd Md;
  while (sol.outer_iters < params.max_outer_iters && !feasibleSupport(C, v, params.zero_tol)) {
    ++sol.outer_iters;
    Md.noalias() = M - d * C;

    Eigen::VectorXd y = maskedProduct(Md, v);
    double F = v.dot(y);
    Eigen::VectorXd g = 2.0 * y;

    // Step size: initialized to 1, backtracked within a step, and carried
    // across steps (one doubling per step, capped at 1). Restarting at 1
    // every step wastes ~log2(lambda) shrink trials on stiff problems.
    double alpha_init = 1.0;
    for (int it = 0;; ++it) {
      if (it >= params.max_inner_iters) {
        sol.inner_cap_hit = true;
        break;
      }
      // Backtracking line search on the projected candidate.
      double alpha = alpha_init;
      bool accepted = false;
      Eigen::VectorXd cand, y_cand;
      double F_cand = 0.0;
      while (alpha >= params.min_step) {
        Eigen::VectorXd raw = v + alpha * g;
        const double raw_norm = raw.norm();
        if (raw_norm > 0.0) {
          cand = (raw / raw_norm).cwiseMax(0.0);
          if (cand.maxCoeff() > 0.0) {
            y_cand = maskedProduct(Md, cand);
            F_cand = cand.dot(y_cand);
            if (F_cand > F) {
              accepted = true;
              break;
            }
          }
        }
        alpha *= params.line_search_shrink;
      }
      if (!accepted) break;  // no ascent direction left at this penalty

      alpha_init = std::min(1.0, 2.0 * alpha);
      const double delta = (cand - v).norm();
      v = std::move(cand);
      F = F_cand;
      g = 2.0 * y_cand;
      ++sol.inner_iters;
      if (params.record_trace) sol.trace.emplace_back(d, F);
      if (delta <= params.inner_tol) break;
    }

    d += penaltyIncrement(M, C, v, params.zero_tol);
  }

  if (!feasibleSupport(C, v, params.zero_tol)) {
    // Outer cap exhausted: a clique-feasible vector is still required
    // downstream, so zero the smaller member of each violating pair.
    sol.forced_feasible = true;
    bool changed = true;
    while (changed) {
      changed = false;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (v(i) <= params.zero_tol) continue;
        for (Eigen::Index j = i + 1; j < m; ++j) {
          if (C(i, j) != 0.0 && v(j) > params.zero_tol) {
            if (v(j) < v(i) || v(j) == v(i)) {
              v(j) = 0.0;
            } else {
              v(i) = 0.0;
            }
            changed = true;
            if (v(i) <= params.zero_tol) break;
          }
        }
      }
    }
  }

  const double norm = v.norm();
  if (norm == 0.0) throw std::runtime_error("solveMsrc: iterate collapsed to zero");
  v /= norm;

  sol.v = v;
  sol.penalty = d;
  sol.objective = v.dot(maskedProduct(M, v)) - d * v.dot(maskedProduct(C, v));
  sol.constraints_satisfied = feasibleSupport(C, v, params.zero_tol);
  return sol;
}

CliqueEstimate roundSolution(const Eigen::VectorXd& v, const Eigen::MatrixXd& M, double zero_tol) {
  if (v.size() != M.rows() || M.rows() != M.cols()) {
    throw std::invalid_argument("roundSolution: size mismatch");
  }
  std::vector<int> support;
  for (int i = 0; i < v.size(); ++i) {
    if (v(i) > zero_tol) support.push_back(i);
  }
  if (support.empty()) throw std::invalid_argument("roundSolution: no entry above zero_tol");

  CliqueEstimate estimate;
  const double quadratic = v.dot(maskedProduct(M, v));
  const long rounded = std::lround(quadratic);
  estimate.omega_hat = static_cast<int>(
      std::clamp(rounded, 1L, static_cast<long>(support.size())));

  // omega_hat largest entries; ties keep the lower index.
  std::stable_sort(support.begin(), support.end(),
                   [&](int a, int b) { return v(a) > v(b); });
  Selection sel(support.begin(), support.begin() + estimate.omega_hat);

  // Repair zero_tol slack: drop the lower-valued member of every pair that
  // violates the zero pattern of M.
  bool violated = true;
  while (violated && sel.size() > 1) {
    violated = false;
    for (std::size_t a = 0; a < sel.size() && !violated; ++a) {
      for (std::size_t b = a + 1; b < sel.size() && !violated; ++b) {
        if (M(sel[a], sel[b]) == 0.0) {
          const std::size_t drop = v(sel[a]) < v(sel[b]) ? a : b;
          sel.erase(sel.begin() + static_cast<std::ptrdiff_t>(drop));
          violated = true;
        }
      }
    }
  }

  std::sort(sel.begin(), sel.end());
  double sum = 0.0;
  for (int a : sel) {
    for (int b : sel) sum += M(a, b);
  }
  estimate.density = sum / static_cast<double>(sel.size());
  estimate.selected = std::move(sel);
  return estimate;
}

CliqueEstimate findDensestClique(const ConsistencyGraph& graph, const SolverParams& params) {
  const DenseSolution solution = solveMsrc(graph.M, graph.C, params);
  return roundSolution(solution, graph.M, params.zero_tol);
}

}  // namespace clipper
