#include "clipper/baselines.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clipper/solver.h"

namespace clipper::baselines {

namespace {

Selection greedyDiscretize(const Eigen::MatrixXd& M, const Eigen::MatrixXd* conflicts,
                           double zero_tol) {
  if (conflicts && (conflicts->rows() != M.rows() || conflicts->cols() != M.cols())) {
    throw std::invalid_argument("spectralMatching: conflict matrix size mismatch");
  }
  // Best-effort principal eigenvector; the greedy pass only needs an
  // ordering. The tight residual pushes stagnant mass on disconnected
  // components below zero_tol so "entry is zero" reads correctly.
  Eigen::VectorXd x = principalEigenpairBestEffort(M, 1e-12, 100000).v;

  Selection selected;
  while (true) {
    Eigen::Index best;
    if (x.maxCoeff(&best) <= zero_tol) break;  // next candidate's entry is zero
    selected.push_back(static_cast<int>(best));
    x(best) = 0.0;
    if (conflicts) {
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        if ((*conflicts)(best, j) != 0.0) x(j) = 0.0;
      }
    }
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

}  // namespace

Selection spectralMatching(const Eigen::MatrixXd& M, const Eigen::MatrixXd& conflicts,
                           double zero_tol) {
  return greedyDiscretize(M, &conflicts, zero_tol);
}

Selection spectralMatching(const Eigen::MatrixXd& M, double zero_tol) {
  return greedyDiscretize(M, nullptr, zero_tol);
}

Selection thresholdThenMaxClique(const Eigen::MatrixXd& M, double threshold,
                                 const oracles::MaxCliqueOptions& options) {
  if (!(threshold >= 0.0) || !(threshold <= 1.0)) {
    throw std::invalid_argument("thresholdThenMaxClique: threshold must be in [0,1]");
  }
  const Eigen::Index m = M.rows();
  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (M(i, j) >= threshold) adjacency(i, j) = adjacency(j, i) = 1.0;
    }
  }
  return oracles::maxCliqueExact(adjacency, options).clique;
}

}  // namespace clipper::baselines
