/**
 * @file oracles_test.cpp
 * @brief Exact solver tests, cross-checked against exhaustive subset sweeps
 */

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "clipper/affinity.h"
#include "clipper/oracles.h"
#include "clipper/random.h"
#include "clipper/solver.h"
#include "fixtures.h"
#include "oracle_helpers.h"

using clipper::Selection;
using namespace clipper::oracles;

TEST(Density, CompetingBlocksValues) {
  const auto graph = fixtures::competingBlocks();
  EXPECT_DOUBLE_EQ(density(graph.M, {0, 1}), 2.0);
  EXPECT_DOUBLE_EQ(density(graph.M, {2, 3, 4}), 1.4);
  EXPECT_DOUBLE_EQ(density(graph.M, {2}), 1.0);  // singleton with unit diagonal
}

TEST(Density, MatchesDoubleLoopOracle) {
  clipper::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 3 + rng.uniformInt(8);
    const Eigen::MatrixXd M = testing_oracles::randomSymmetricNonneg(m, rng);
    Selection sel;
    for (int i = 0; i < m; ++i) {
      if (rng.uniform01() < 0.5) sel.push_back(i);
    }
    if (sel.empty()) sel.push_back(0);
    EXPECT_DOUBLE_EQ(density(M, sel), testing_oracles::densityOracle(M, sel));
  }
}

TEST(Density, Errors) {
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(density(M, {}), std::invalid_argument);
  EXPECT_THROW(density(M, {3}), std::invalid_argument);
  EXPECT_THROW(density(M, {1, 1}), std::invalid_argument);
}

TEST(DewcBruteforce, CompetingBlocksPrefersDenser) {
  const auto graph = fixtures::competingBlocks();
  const auto result = dewcBruteforce(graph.M, graph.C);
  EXPECT_EQ(result.selection, (Selection{0, 1}));
  EXPECT_DOUBLE_EQ(result.density, 2.0);
}

TEST(DewcBruteforce, BinaryMatrixReducesToMaxClique) {
  clipper::Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 6 + rng.uniformInt(8);
    clipper::ConsistencyGraph graph;
    graph.M = Eigen::MatrixXd::Zero(m, m);
    graph.C = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      graph.M(i, i) = 1.0;
      for (int j = i + 1; j < m; ++j) {
        if (rng.uniform01() < 0.5) {
          graph.M(i, j) = graph.M(j, i) = 1.0;
        } else {
          graph.C(i, j) = graph.C(j, i) = 1.0;
        }
      }
    }
    const auto dewc = dewcBruteforce(graph.M, graph.C);
    const auto mc = maxCliqueExact(graph.M - Eigen::MatrixXd::Identity(m, m));
    EXPECT_EQ(dewc.selection.size(), mc.clique.size());
    EXPECT_DOUBLE_EQ(dewc.density, static_cast<double>(dewc.selection.size()));
  }
}

TEST(DewcBruteforce, MatchesSubsetSweep) {
  clipper::Rng rng(43);
  for (int trial = 0; trial < 15; ++trial) {
    const auto graph = testing_oracles::randomCoupledGraph(10, 0.45, rng);
    const auto fast = dewcBruteforce(graph.M, graph.C);
    const auto sweep = testing_oracles::sweepDewc(graph.M, graph.C);
    EXPECT_EQ(fast.selection, sweep.selection);
    EXPECT_DOUBLE_EQ(fast.density, sweep.value);
  }
}

TEST(DewcBruteforce, CapEnforced) {
  const Eigen::MatrixXd M = Eigen::MatrixXd::Ones(25, 25);
  const Eigen::MatrixXd C = Eigen::MatrixXd::Zero(25, 25);
  EXPECT_THROW(dewcBruteforce(M, C), std::invalid_argument);
  EXPECT_NO_THROW(dewcBruteforce(M, C, 25));
}

TEST(MsrcBruteforce, NoConstraintsIsWholeSpectrum) {
  clipper::Rng rng(47);
  const Eigen::MatrixXd M = testing_oracles::randomSymmetricNonneg(7, rng);
  const Eigen::MatrixXd C = Eigen::MatrixXd::Zero(7, 7);
  const auto result = msrcBruteforce(M, C);
  EXPECT_EQ(result.clique.size(), 7u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M, Eigen::EigenvaluesOnly);
  EXPECT_NEAR(result.value, eig.eigenvalues()(6), 1e-12);
}

TEST(MsrcBruteforce, CompetingBlocks) {
  const auto graph = fixtures::competingBlocks();
  const auto result = msrcBruteforce(graph.M, graph.C);
  EXPECT_EQ(result.clique, (Selection{0, 1}));
  EXPECT_NEAR(result.value, 2.0, 1e-12);
  EXPECT_NEAR(result.v(0), std::sqrt(0.5), 1e-9);
  EXPECT_NEAR(result.v(1), std::sqrt(0.5), 1e-9);
  EXPECT_NEAR(result.v.norm(), 1.0, 1e-12);
}

TEST(MsrcBruteforce, MatchesSubsetSweepAndBoundsClipper) {
  clipper::Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const auto graph = testing_oracles::randomCoupledGraph(10, 0.5, rng);
    const auto exact = msrcBruteforce(graph.M, graph.C);
    const auto sweep = testing_oracles::sweepMsrc(graph.M, graph.C);
    EXPECT_NEAR(exact.value, sweep.value, 1e-10);

    // feasible support: the clique's Perron vector embedded in R^m
    for (int i = 0; i < 10; ++i) {
      for (int j = i + 1; j < 10; ++j) {
        if (graph.C(i, j) != 0.0) EXPECT_LE(std::min(exact.v(i), exact.v(j)), 1e-12);
      }
    }

    const auto sol = clipper::solveMsrc(graph.M, graph.C);
    EXPECT_GE(exact.value, sol.objective - 1e-9);
  }
}

TEST(MaxCliqueExact, CompleteGraph) {
  const int n = 12;
  Eigen::MatrixXd adj = Eigen::MatrixXd::Ones(n, n);
  adj.diagonal().setZero();
  const auto result = maxCliqueExact(adj);
  EXPECT_TRUE(result.optimal);
  ASSERT_EQ(result.clique.size(), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) EXPECT_EQ(result.clique[i], i);
}

TEST(MaxCliqueExact, TwoTriangleSceneEitherTriangle) {
  const auto scene = fixtures::twoTriangleScene();
  const auto graph = clipper::buildAffinity(scene.source, scene.target, scene.associations,
                                            clipper::ScoreParams(0.15, 0.05));
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i != j && graph.M(i, j) > 0.0) adj(i, j) = 1.0;
    }
  }
  const auto result = maxCliqueExact(adj);
  EXPECT_EQ(result.clique.size(), 3u);
  const Selection correct{0, 1, 3}, competing{0, 2, 4};
  EXPECT_TRUE(result.clique == correct || result.clique == competing);
}

TEST(MaxCliqueExact, MatchesSubsetSweepOnRandomGraphs) {
  clipper::Rng rng(59);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 10 + rng.uniformInt(6);
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.uniform01() < 0.5) adj(i, j) = adj(j, i) = 1.0;
      }
    }
    const auto result = maxCliqueExact(adj);
    const auto sweep = testing_oracles::sweepMaxClique(adj);
    EXPECT_TRUE(result.optimal);
    EXPECT_EQ(result.clique, sweep);  // size and lexicographic tie rule
  }
}

TEST(MaxCliqueExact, EdgelessAndCapAndTimeout) {
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(4, 4);
  const auto result = maxCliqueExact(adj);
  EXPECT_EQ(result.clique, (Selection{0}));

  MaxCliqueOptions options;
  options.max_vertices = 3;
  EXPECT_THROW(maxCliqueExact(adj, options), std::invalid_argument);
}

TEST(DensestSubgraphExact, UnitTriangle) {
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(3, 3);
  W(0, 1) = W(1, 0) = W(0, 2) = W(2, 0) = W(1, 2) = W(2, 1) = 1.0;
  const auto result = densestSubgraphExact(W);
  EXPECT_EQ(result.vertices, (Selection{0, 1, 2}));
  EXPECT_NEAR(result.density, 1.0, 1e-9);
}

TEST(DensestSubgraphExact, MatchesSubsetSweep) {
  clipper::Rng rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 5 + rng.uniformInt(8);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.uniform01() < 0.55) W(i, j) = W(j, i) = rng.uniform01();
      }
    }
    if ((W.array() != 0.0).count() == 0) W(0, 1) = W(1, 0) = 0.5;
    const auto result = densestSubgraphExact(W);
    const auto sweep = testing_oracles::sweepDensestSubgraph(W);
    EXPECT_NEAR(result.density, sweep.value, 1e-7);
    // returned set must actually attain the reported density
    double internal = 0.0;
    for (std::size_t a = 0; a < result.vertices.size(); ++a) {
      for (std::size_t b = a + 1; b < result.vertices.size(); ++b) {
        internal += W(result.vertices[a], result.vertices[b]);
      }
    }
    EXPECT_NEAR(internal / result.vertices.size(), result.density, 1e-12);
  }
}

TEST(DensestSubgraphExact, DiagonalConventionMapping) {
  // On a clique S, the diagonal-inclusive density used by the clique
  // solvers equals 2 * edge density + mean diagonal over S.
  const auto graph = fixtures::competingBlocks();
  Eigen::MatrixXd W = graph.M;
  W.diagonal().setZero();
  for (const Selection& sel : {Selection{0, 1}, Selection{2, 3, 4}, Selection{2, 3}}) {
    double edges = 0.0;
    for (std::size_t a = 0; a < sel.size(); ++a) {
      for (std::size_t b = a + 1; b < sel.size(); ++b) edges += W(sel[a], sel[b]);
    }
    const double edge_density = edges / sel.size();
    double diag = 0.0;
    for (int i : sel) diag += graph.M(i, i);
    EXPECT_NEAR(density(graph.M, sel), 2.0 * edge_density + diag / sel.size(), 1e-12);
  }

  // With unit diagonals the mapping is monotone, so the densest subgraph
  // restricted to cliques picks the same block as the exact DEWC here.
  const auto ds = densestSubgraphExact(W);
  const auto dewc = dewcBruteforce(graph.M, graph.C);
  EXPECT_EQ(ds.vertices, dewc.selection);
}

TEST(DensestSubgraphExact, InputValidation) {
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(2, 2);
  W(0, 1) = -1.0;
  W(1, 0) = -1.0;
  EXPECT_THROW(densestSubgraphExact(W), std::invalid_argument);
}

TEST(RelaxationOrdering, MsrcAtLeastDewc) {
  clipper::Rng rng(67);
  for (int trial = 0; trial < 15; ++trial) {
    const auto graph = testing_oracles::randomCoupledGraph(9 + rng.uniformInt(4), 0.5, rng);
    const auto dewc = dewcBruteforce(graph.M, graph.C);
    const auto msrc = msrcBruteforce(graph.M, graph.C);
    EXPECT_GE(msrc.value, dewc.density - 1e-9);
  }
}
