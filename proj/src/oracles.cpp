#include "clipper/oracles.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include <Eigen/Eigenvalues>

namespace clipper::oracles {

namespace {

/// Fixed-size bitset over graph vertices.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int n) : n_(n), w_((n + 63) / 64, 0) {}

  void set(int i) { w_[i >> 6] |= 1ull << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(1ull << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  bool any() const {
    for (auto w : w_) {
      if (w) return true;
    }
    return false;
  }

  int count() const {
    int c = 0;
    for (auto w : w_) c += __builtin_popcountll(w);
    return c;
  }

  /// First set bit at or after `from`, or -1.
  int next(int from = 0) const {
    if (from >= n_) return -1;
    int block = from >> 6;
    std::uint64_t w = w_[block] & (~0ull << (from & 63));
    while (true) {
      if (w) return (block << 6) + __builtin_ctzll(w);
      if (++block >= static_cast<int>(w_.size())) return -1;
      w = w_[block];
    }
  }

  Bits& operator&=(const Bits& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }

  Bits& andNot(const Bits& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }

  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

std::vector<Bits> adjacencyFromMatrix(const Eigen::MatrixXd& A, bool edge_if_zero) {
  const int n = static_cast<int>(A.rows());
  std::vector<Bits> adj(n, Bits(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool nonzero = A(i, j) != 0.0 || A(j, i) != 0.0;
      if (nonzero != edge_if_zero) {
        adj[i].set(j);
        adj[j].set(i);
      }
    }
  }
  return adj;
}

void requireSquare(const Eigen::MatrixXd& A, const char* who) {
  if (A.rows() != A.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
}

/// Branch-and-bound maximum clique with a greedy-coloring bound
/// (sequential coloring; candidates processed in decreasing color order).
class MaxCliqueSearch {
 public:
  MaxCliqueSearch(std::vector<Bits> adj, double timeout_s)
      : n_(static_cast<int>(adj.size())), adj_(std::move(adj)) {
    if (timeout_s > 0.0) {
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_s));
    }
  }

  bool timedOut() const { return timed_out_; }

  std::vector<int> findMaximum() {
    best_.clear();
    current_.clear();
    Bits all(n_);
    for (int i = 0; i < n_; ++i) all.set(i);
    expand(all);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

  /// Lexicographically smallest clique of size `omega` (assumes one exists).
  std::vector<int> lexSmallest(int omega) {
    std::vector<int> clique;
    Bits P(n_);
    for (int i = 0; i < n_; ++i) P.set(i);
    int need = omega;
    while (need > 0 && !timed_out_) {
      bool advanced = false;
      for (int v = P.next(); v != -1; v = P.next(v + 1)) {
        Bits cand = P & adj_[v];
        // Sorted-set representation: later members must exceed v.
        for (int u = cand.next(); u != -1 && u <= v; u = cand.next(u + 1)) cand.reset(u);
        if (existsClique(cand, need - 1)) {
          clique.push_back(v);
          P = cand;
          --need;
          advanced = true;
          break;
        }
        if (timed_out_) break;
        P.reset(v);
      }
      if (!advanced) break;  // timeout mid-probe
    }
    return clique;
  }

 private:
  bool checkDeadline() {
    if (deadline_ && ++ticks_ % 256 == 0 && std::chrono::steady_clock::now() > *deadline_) {
      timed_out_ = true;
    }
    return timed_out_;
  }

  void colorSort(const Bits& P, std::vector<int>& order, std::vector<int>& bound) const {
    order.clear();
    bound.clear();
    Bits remaining = P;
    int color = 0;
    while (remaining.any()) {
      ++color;
      Bits cand = remaining;
      while (cand.any()) {
        const int v = cand.next();
        remaining.reset(v);
        cand.reset(v);
        cand.andNot(adj_[v]);
        order.push_back(v);
        bound.push_back(color);
      }
    }
  }

  void expand(Bits P) {
    if (checkDeadline()) return;
    std::vector<int> order, bound;
    colorSort(P, order, bound);
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
      if (static_cast<int>(current_.size()) + bound[i] <= static_cast<int>(best_.size())) return;
      const int v = order[i];
      current_.push_back(v);
      Bits P2 = P & adj_[v];
      if (P2.any()) {
        expand(P2);
      } else if (current_.size() > best_.size()) {
        best_ = current_;
      }
      current_.pop_back();
      P.reset(v);
      if (timed_out_) return;
    }
  }

  bool existsClique(Bits P, int k) {
    if (k <= 0) return true;
    if (checkDeadline()) return false;
    if (P.count() < k) return false;
    std::vector<int> order, bound;
    colorSort(P, order, bound);
    if (bound.back() < k) return false;
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
      if (bound[i] < k) return false;
      const int v = order[i];
      if (existsClique(P & adj_[v], k - 1)) return true;
      if (timed_out_) return false;
      P.reset(v);
    }
    return false;
  }

  int n_;
  std::vector<Bits> adj_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint64_t ticks_ = 0;
  bool timed_out_ = false;
  std::vector<int> best_;
  std::vector<int> current_;
};

/// Largest eigenpair of M restricted to `clique`, Perron vector sign-fixed
/// nonnegative and embedded in R^m.
std::pair<double, Eigen::VectorXd> restrictedPerron(const Eigen::MatrixXd& M,
                                                    const std::vector<int>& clique) {
  const int k = static_cast<int>(clique.size());
  Eigen::MatrixXd sub(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) sub(a, b) = M(clique[a], clique[b]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub);
  const double lambda = eig.eigenvalues()(k - 1);
  Eigen::VectorXd u = eig.eigenvectors().col(k - 1);
  if (u.sum() < 0.0) u = -u;
  u = u.cwiseMax(0.0);
  const double norm = u.norm();
  if (norm > 0.0) u /= norm;
  Eigen::VectorXd embedded = Eigen::VectorXd::Zero(M.rows());
  for (int a = 0; a < k; ++a) embedded(clique[a]) = u(a);
  return {lambda, embedded};
}

}  // namespace

double density(const Eigen::MatrixXd& M, const Selection& selection) {
  requireSquare(M, "density");
  if (selection.empty()) throw std::invalid_argument("density: empty selection");
  std::unordered_set<int> seen;
  for (int i : selection) {
    if (i < 0 || i >= M.rows()) throw std::invalid_argument("density: index out of range");
    if (!seen.insert(i).second) throw std::invalid_argument("density: duplicate index");
  }
  double sum = 0.0;
  for (int a : selection) {
    for (int b : selection) sum += M(a, b);
  }
  return sum / static_cast<double>(selection.size());
}

DewcResult dewcBruteforce(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C, int max_m) {
  requireSquare(M, "dewcBruteforce");
  const int m = static_cast<int>(M.rows());
  if (m > max_m) {
    throw std::invalid_argument("dewcBruteforce: m exceeds the enumeration cap");
  }
  const std::vector<Bits> adj = adjacencyFromMatrix(C, /*edge_if_zero=*/true);

  DewcResult best;
  best.density = -std::numeric_limits<double>::infinity();
  std::vector<int> clique;

  auto consider = [&](const std::vector<int>& sel, double num) {
    const double dens = num / static_cast<double>(sel.size());
    if (dens > best.density ||
        (dens == best.density &&
         (sel.size() > best.selection.size() ||
          (sel.size() == best.selection.size() && sel < best.selection)))) {
      best.density = dens;
      best.selection = sel;
    }
  };

  // Depth-first enumeration of every clique in ascending-index form;
  // `num` carries the full quadratic sum including the diagonal.
  auto extend = [&](auto&& self, double num, const Bits& candidates) -> void {
    for (int v = candidates.next(); v != -1; v = candidates.next(v + 1)) {
      double num2 = num + M(v, v);
      for (int u : clique) num2 += 2.0 * M(u, v);
      clique.push_back(v);
      consider(clique, num2);
      Bits further = candidates & adj[v];
      for (int u = further.next(); u != -1 && u <= v; u = further.next(u + 1)) further.reset(u);
      self(self, num2, further);
      clique.pop_back();
    }
  };

  Bits all(m);
  for (int i = 0; i < m; ++i) all.set(i);
  extend(extend, 0.0, all);
  return best;
}

MsrcResult msrcBruteforce(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C, int max_m) {
  requireSquare(M, "msrcBruteforce");
  const int m = static_cast<int>(M.rows());
  if (m > max_m) {
    throw std::invalid_argument("msrcBruteforce: m exceeds the enumeration cap");
  }
  const std::vector<Bits> adj = adjacencyFromMatrix(C, /*edge_if_zero=*/true);

  MsrcResult best;
  best.value = -std::numeric_limits<double>::infinity();

  // The optimum over clique supports is attained on a maximal clique
  // (the top eigenvalue only grows with the principal submatrix), so
  // Bron-Kerbosch with pivoting is enough.
  std::vector<int> R;
  auto visit = [&](const std::vector<int>& maximal) {
    std::vector<int> sorted = maximal;
    std::sort(sorted.begin(), sorted.end());
    const auto [lambda, v] = restrictedPerron(M, sorted);
    if (lambda > best.value ||
        (lambda == best.value &&
         (sorted.size() > best.clique.size() ||
          (sorted.size() == best.clique.size() && sorted < best.clique)))) {
      best.value = lambda;
      best.clique = sorted;
      best.v = v;
    }
  };

  auto bk = [&](auto&& self, Bits P, Bits X) -> void {
    if (!P.any() && !X.any()) {
      visit(R);
      return;
    }
    // Pivot on the vertex covering most of P.
    int pivot = -1, cover = -1;
    for (const Bits* side : {&P, &X}) {
      for (int u = side->next(); u != -1; u = side->next(u + 1)) {
        const int c = (P & adj[u]).count();
        if (c > cover) {
          cover = c;
          pivot = u;
        }
      }
    }
    Bits ext = P;
    if (pivot != -1) ext.andNot(adj[pivot]);
    for (int v = ext.next(); v != -1; v = ext.next(v + 1)) {
      R.push_back(v);
      self(self, P & adj[v], X & adj[v]);
      R.pop_back();
      P.reset(v);
      X.set(v);
    }
  };

  Bits P(m), X(m);
  for (int i = 0; i < m; ++i) P.set(i);
  bk(bk, P, X);
  return best;
}

MaxCliqueResult maxCliqueExact(const Eigen::MatrixXd& adjacency, const MaxCliqueOptions& options) {
  requireSquare(adjacency, "maxCliqueExact");
  const int n = static_cast<int>(adjacency.rows());
  if (n > options.max_vertices) {
    throw std::invalid_argument("maxCliqueExact: vertex count exceeds the configured cap");
  }
  MaxCliqueResult result;
  if (n == 0) return result;

  MaxCliqueSearch search(adjacencyFromMatrix(adjacency, /*edge_if_zero=*/false),
                         options.timeout_s);
  result.clique = search.findMaximum();
  result.optimal = !search.timedOut();
  if (result.optimal && !result.clique.empty()) {
    // Deterministic tie rule: the lexicographically smallest maximum clique.
    const auto lex = search.lexSmallest(static_cast<int>(result.clique.size()));
    if (!search.timedOut() && lex.size() == result.clique.size()) result.clique = lex;
  }
  return result;
}

DensestSubgraphResult densestSubgraphExact(const Eigen::MatrixXd& weights) {
  requireSquare(weights, "densestSubgraphExact");
  const int n = static_cast<int>(weights.rows());
  if (n == 0) throw std::invalid_argument("densestSubgraphExact: empty graph");

  struct Edge {
    int u, v;
    double w;
  };
  std::vector<Edge> edges;
  double total = 0.0, maxw = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = weights(i, j);
      if (w < 0.0 || weights(j, i) < 0.0) {
        throw std::invalid_argument("densestSubgraphExact: negative edge weight");
      }
      if (w != weights(j, i)) {
        throw std::invalid_argument("densestSubgraphExact: asymmetric weights");
      }
      if (w > 0.0) {
        edges.push_back({i, j, w});
        total += w;
        maxw = std::max(maxw, w);
      }
    }
  }

  DensestSubgraphResult result;
  if (edges.empty()) {
    result.vertices = {0};  // edgeless graph: every subset has density 0
    result.density = 0.0;
    return result;
  }

  std::vector<double> degree(n, 0.0);
  for (const auto& e : edges) {
    degree[e.u] += e.w;
    degree[e.v] += e.w;
  }

  // Dinic max-flow on the Goldberg network; rebuilt per density guess.
  struct Arc {
    int to;
    double cap;
    int rev;
  };
  const int s = n, t = n + 1, nodes = n + 2;
  const double eps = 1e-12 * std::max(1.0, maxw);

  auto feasibleSet = [&](double g) -> std::vector<int> {
    std::vector<std::vector<Arc>> net(nodes);
    auto addArc = [&](int a, int b, double cap) {
      net[a].push_back({b, cap, static_cast<int>(net[b].size())});
      net[b].push_back({a, 0.0, static_cast<int>(net[a].size()) - 1});
    };
    for (int v = 0; v < n; ++v) {
      if (degree[v] > 0.0) addArc(s, v, degree[v]);
      addArc(v, t, 2.0 * g);
    }
    for (const auto& e : edges) {
      addArc(e.u, e.v, e.w);
      addArc(e.v, e.u, e.w);
    }

    std::vector<int> level(nodes), it(nodes);
    auto bfs = [&]() {
      std::fill(level.begin(), level.end(), -1);
      std::vector<int> queue{s};
      level[s] = 0;
      for (std::size_t h = 0; h < queue.size(); ++h) {
        const int u = queue[h];
        for (const auto& a : net[u]) {
          if (a.cap > eps && level[a.to] < 0) {
            level[a.to] = level[u] + 1;
            queue.push_back(a.to);
          }
        }
      }
      return level[t] >= 0;
    };
    auto dfs = [&](auto&& self, int u, double pushed) -> double {
      if (u == t) return pushed;
      for (int& i = it[u]; i < static_cast<int>(net[u].size()); ++i) {
        Arc& a = net[u][i];
        if (a.cap > eps && level[a.to] == level[u] + 1) {
          const double got = self(self, a.to, std::min(pushed, a.cap));
          if (got > 0.0) {
            a.cap -= got;
            net[a.to][a.rev].cap += got;
            return got;
          }
        }
      }
      return 0.0;
    };
    while (bfs()) {
      std::fill(it.begin(), it.end(), 0);
      while (dfs(dfs, s, std::numeric_limits<double>::infinity()) > 0.0) {
      }
    }

    // Source side of the min cut, minus the source itself.
    std::vector<char> reach(nodes, 0);
    std::vector<int> queue{s};
    reach[s] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (const auto& a : net[queue[h]]) {
        if (a.cap > eps && !reach[a.to]) {
          reach[a.to] = 1;
          queue.push_back(a.to);
        }
      }
    }
    std::vector<int> side;
    for (int v = 0; v < n; ++v) {
      if (reach[v]) side.push_back(v);
    }
    return side;
  };

  double lo = 0.0, hi = total;
  std::vector<int> best;
  while (hi - lo >= 1e-9 * maxw) {
    const double g = 0.5 * (lo + hi);
    auto side = feasibleSet(g);
    if (!side.empty()) {
      best = std::move(side);
      lo = g;
    } else {
      hi = g;
    }
  }
  if (best.empty()) {
    // Cannot happen for positive weights (a single edge already has
    // density w/2 >> the search tolerance); kept as a safe fallback.
    const auto& e = *std::max_element(edges.begin(), edges.end(),
                                      [](const Edge& a, const Edge& b) { return a.w < b.w; });
    best = {e.u, e.v};
  }

  double internal = 0.0;
  std::vector<char> in(n, 0);
  for (int v : best) in[v] = 1;
  for (const auto& e : edges) {
    if (in[e.u] && in[e.v]) internal += e.w;
  }
  result.vertices = best;
  result.density = internal / static_cast<double>(best.size());
  return result;
}

}  // namespace clipper::oracles
