#include "clipper/sdp.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace clipper::sdp {

namespace {

/// Euclidean projection of a vector onto {x >= 0, sum(x) <= 1}, restricted
/// to the free indices (the rest are pinned at zero).
void projectTraceCap(Eigen::VectorXd& diag, const std::vector<int>& free) {
  double sum = 0.0;
  for (int i : free) sum += std::max(diag(i), 0.0);
  if (sum <= 1.0) {
    for (int i : free) diag(i) = std::max(diag(i), 0.0);
    return;
  }
  // Sum constraint active: simplex projection via the sorted threshold.
  std::vector<double> d;
  d.reserve(free.size());
  for (int i : free) d.push_back(diag(i));
  std::sort(d.begin(), d.end(), std::greater<double>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    cumulative += d[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (k + 1 == d.size() || d[k + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }
  for (int i : free) diag(i) = std::max(diag(i) - theta, 0.0);
}

/// Projection onto the affine/pattern set: symmetric, zero wherever
/// M is zero, elementwise nonnegative, trace at most 1.
Eigen::MatrixXd projectPattern(Eigen::MatrixXd A, const Eigen::MatrixXd& M,
                               const std::vector<int>& free_diagonal) {
  A = 0.5 * (A + A.transpose()).eval();
  const Eigen::Index m = A.rows();
  Eigen::VectorXd diag = A.diagonal();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) continue;
      A(i, j) = M(i, j) == 0.0 ? 0.0 : std::max(A(i, j), 0.0);
    }
  }
  A.diagonal().setZero();
  Eigen::VectorXd projected = diag;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (M(i, i) == 0.0) projected(i) = 0.0;
  }
  projectTraceCap(projected, free_diagonal);
  A.diagonal() = projected;
  return A;
}

Eigen::MatrixXd projectPsd(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

SdpSolution solveMsrcSdr(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C,
                         const SdpParams& params) {
  if (M.rows() != M.cols() || C.rows() != C.cols() || M.rows() != C.rows()) {
    throw std::invalid_argument("solveMsrcSdr: matrices must be square and same size");
  }
  const Eigen::Index m = M.rows();
  if (m == 0) throw std::invalid_argument("solveMsrcSdr: empty problem");
  if (m > params.size_cap) {
    throw std::invalid_argument("solveMsrcSdr: problem larger than the size cap");
  }
  if (!(params.tol > 0.0) || params.max_iters <= 0 || !(params.rho > 0.0)) {
    throw std::invalid_argument("solveMsrcSdr: invalid parameters");
  }

  std::vector<int> free_diagonal;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (M(i, i) != 0.0) free_diagonal.push_back(static_cast<int>(i));
  }

  double rho = params.rho;
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(m, m);

  SdpSolution sol;
  for (int it = 1; it <= params.max_iters; ++it) {
    X = projectPattern(Z - U + M / rho, M, free_diagonal);
    const Eigen::MatrixXd Z_prev = Z;
    Z = projectPsd(X + U);
    U += X - Z;

    sol.iterations = it;
    sol.primal_residual = (X - Z).norm();
    sol.dual_residual = rho * (Z - Z_prev).norm();
    if (std::max(sol.primal_residual, sol.dual_residual) <= params.tol) {
      sol.converged = true;
      break;
    }
    // Residual balancing keeps both residuals moving at a similar pace.
    if (it % 50 == 0) {
      if (sol.primal_residual > 10.0 * sol.dual_residual && rho < 1e6) {
        rho *= 2.0;
        U *= 0.5;
      } else if (sol.dual_residual > 10.0 * sol.primal_residual && rho > 1e-6) {
        rho *= 0.5;
        U *= 2.0;
      }
    }
  }

  // Z is PSD by construction; land exactly on the pattern/nonnegativity/
  // trace set, leaving a PSD violation no larger than the primal residual.
  sol.X = projectPattern(Z, M, free_diagonal);
  sol.objective = (M.array() * sol.X.array()).sum();
  return sol;
}

bool checkRank1(const Eigen::MatrixXd& X, double ratio_tol) {
  if (X.rows() != X.cols() || X.rows() == 0) {
    throw std::invalid_argument("checkRank1: matrix must be square and nonempty");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (X + X.transpose()),
                                                     Eigen::EigenvaluesOnly);
  const Eigen::Index m = X.rows();
  const double lambda1 = eig.eigenvalues()(m - 1);
  if (!(lambda1 > 0.0)) return false;
  if (m == 1) return true;
  const double lambda2 = eig.eigenvalues()(m - 2);
  return lambda2 / lambda1 <= ratio_tol;
}

Eigen::VectorXd extract(const Eigen::MatrixXd& X, double ratio_tol) {
  if (!checkRank1(X, ratio_tol)) {
    throw std::invalid_argument("extract: solution failed the rank-1 check");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (X + X.transpose()));
  Eigen::VectorXd v = eig.eigenvectors().col(X.rows() - 1);
  if (v.sum() < 0.0) v = -v;
  v = v.cwiseMax(0.0);
  const double norm = v.norm();
  if (norm == 0.0) throw std::invalid_argument("extract: degenerate eigenvector");
  return v / norm;
}

}  // namespace clipper::sdp
