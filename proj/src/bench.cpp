#include "clipper/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <Eigen/Eigenvalues>

#include <json.hpp>

#include "clipper/affinity.h"
#include "clipper/baselines.h"
#include "clipper/oracles.h"
#include "clipper/random.h"

namespace clipper::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds(std::chrono::steady_clock::time_point from,
               std::chrono::steady_clock::time_point to) {
  return std::chrono::duration<double>(to - from).count();
}

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

std::string formatDouble(double value) {
  if (!std::isfinite(value)) return "";  // NaN serializes as an empty cell
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

/// Sign-fixed top eigenvector, used when the SDP output fails the rank-1
/// check but a selection is still wanted for bookkeeping.
Eigen::VectorXd bestRank1Direction(const Eigen::MatrixXd& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (X + X.transpose()));
  Eigen::VectorXd v = eig.eigenvectors().col(X.rows() - 1);
  if (v.sum() < 0.0) v = -v;
  v = v.cwiseMax(0.0);
  const double norm = v.norm();
  return norm > 0.0 ? Eigen::VectorXd(v / norm)
                    : Eigen::VectorXd(Eigen::VectorXd::Unit(X.rows(), 0));
}

struct TaskContext {
  const RunConfig* config;
  double rate;
  int trial;
  int m;
  std::uint64_t seed;
};

std::vector<TrialRow> runTask(const TaskContext& ctx) {
  const RunConfig& config = *ctx.config;
  std::vector<TrialRow> rows;

  auto baseRow = [&](Method method) {
    TrialRow row;
    row.method = methodName(method);
    row.rate = ctx.rate;
    row.trial = ctx.trial;
    row.seed = ctx.seed;
    row.m = ctx.m;
    return row;
  };

  geometry::SyntheticParams sp = config.synth;
  sp.outlier_rate = ctx.rate;
  sp.m_putative = ctx.m;
  sp.seed = ctx.seed;
  const int needed_inliers = static_cast<int>(std::lround((1.0 - ctx.rate) * ctx.m));
  if (sp.n_points < 2 * needed_inliers) sp.n_points = 2 * needed_inliers;

  geometry::BenchmarkInstance instance;
  ConsistencyGraph graph;
  double affinity_time = kNaN;
  try {
    instance = geometry::generateSynthetic(sp);
    const double epsilon = config.epsilon.value_or(2.0 * sp.beta());
    const ScoreParams score =
        config.sigma ? ScoreParams(epsilon, *config.sigma) : ScoreParams(epsilon);
    const auto t0 = std::chrono::steady_clock::now();
    graph = buildAffinity(instance.source, instance.target, instance.putative, score);
    affinity_time = seconds(t0, std::chrono::steady_clock::now());
  } catch (const std::exception& e) {
    for (Method method : config.methods) {
      TrialRow row = baseRow(method);
      row.status = "error:" + sanitize(e.what());
      rows.push_back(std::move(row));
    }
    return rows;
  }

  int n_inliers = 0;
  for (auto flag : instance.inlier_mask) n_inliers += flag != 0;

  const bool wants_sm =
      std::find(config.methods.begin(), config.methods.end(), Method::SM) != config.methods.end();
  Eigen::MatrixXd conflicts;
  if (wants_sm) conflicts = oneToOneConflicts(instance.putative);

  // One exact reference per trial, reused by the dewc* row and for
  // suboptimality gaps of every method.
  bool have_reference = false;
  double reference_density = kNaN;
  double reference_time = kNaN;
  Selection reference_selection;
  std::string reference_error;
  if (ctx.m <= config.oracle_cap) {
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const auto dewc = oracles::dewcBruteforce(graph.M, graph.C, config.oracle_cap);
      reference_time = seconds(t0, std::chrono::steady_clock::now());
      reference_density = dewc.density;
      reference_selection = dewc.selection;
      have_reference = true;
    } catch (const std::exception& e) {
      reference_error = sanitize(e.what());
    }
  }

  for (Method method : config.methods) {
    TrialRow row = baseRow(method);
    row.n_inliers = n_inliers;
    row.affinity_time_s = affinity_time;

    MethodOutput out;
    if (method == Method::DewcStar) {
      if (ctx.m > config.oracle_cap) {
        out.status = "early_stopped";
      } else if (have_reference) {
        out.selection = reference_selection;
        row.solver_time_s = reference_time;
      } else {
        out.status = "error:" + reference_error;
      }
    } else {
      const auto t0 = std::chrono::steady_clock::now();
      out = runMethod(method, graph, conflicts, config);
      row.solver_time_s = seconds(t0, std::chrono::steady_clock::now());
    }

    row.status = out.status;
    row.note = out.note;
    if (out.status == "early_stopped" || out.status.rfind("error:", 0) == 0) {
      row.solver_time_s = kNaN;
      rows.push_back(std::move(row));
      continue;
    }

    row.n_selected = static_cast<int>(out.selection.size());
    const auto pr = geometry::precisionRecall(out.selection, instance.inlier_mask);
    row.precision = pr.precision;
    row.recall = pr.recall;
    if (pr.empty_selection) {
      row.note += row.note.empty() ? "empty_selection" : ";empty_selection";
    } else {
      row.density = oracles::density(graph.M, out.selection);
      if (have_reference) row.subopt_gap = reference_density - row.density;
    }

    if (out.selection.size() >= 3) {
      try {
        const auto estimate = geometry::arunLeastSquares(instance.source, instance.target,
                                                         instance.putative, out.selection);
        row.rot_err_rad = geometry::rotationError(estimate.R, instance.ground_truth.R);
        row.trans_err = geometry::translationError(estimate.t, instance.ground_truth.t);
      } catch (const std::exception&) {
        row.note += row.note.empty() ? "registration_degenerate" : ";registration_degenerate";
      }
    } else {
      row.note += row.note.empty() ? "too_few_for_registration" : ";too_few_for_registration";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TrialRow> runTasks(std::vector<TaskContext> tasks, int threads) {
  std::vector<std::vector<TrialRow>> slots(tasks.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= tasks.size()) return;
      slots[k] = runTask(tasks[k]);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int count = std::min<int>(threads, static_cast<int>(tasks.size()));
    pool.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<TrialRow> rows;
  for (auto& slot : slots) {
    for (auto& row : slot) rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const TrialRow& a, const TrialRow& b) {
    return std::tie(a.method, a.rate, a.m, a.trial) < std::tie(b.method, b.rate, b.m, b.trial);
  });
  return rows;
}

}  // namespace

TrialRow::TrialRow()
    : precision(kNaN),
      recall(kNaN),
      rot_err_rad(kNaN),
      trans_err(kNaN),
      density(kNaN),
      subopt_gap(kNaN),
      solver_time_s(kNaN),
      affinity_time_s(kNaN) {}

const char* const kRowHeader =
    "method,rate,trial,seed,m,n_inliers,n_selected,precision,recall,rot_err_rad,trans_err,"
    "density,subopt_gap,solver_time_s,affinity_time_s,status,note";

const char* const kSummaryHeader =
    "method,rate,m,n_rows,n_ok,mean_precision,mean_recall,mean_rot_err_rad,mean_trans_err,"
    "mean_density,mean_solver_time_s,mean_affinity_time_s";

std::string methodName(Method method) {
  switch (method) {
    case Method::Clipper: return "clipper";
    case Method::SM: return "sm";
    case Method::MC: return "mc";
    case Method::DewcStar: return "dewc*";
    case Method::MsrcStar: return "msrc*";
    case Method::Sdr: return "sdr";
    case Method::DsStar: return "ds*";
  }
  return "?";
}

Method parseMethod(const std::string& name) {
  for (Method method : allMethods()) {
    if (name == methodName(method)) return method;
  }
  // star-less aliases for shell friendliness
  if (name == "dewc") return Method::DewcStar;
  if (name == "msrc") return Method::MsrcStar;
  if (name == "ds") return Method::DsStar;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected clipper|sm|mc|dewc*|msrc*|sdr|ds*)");
}

std::vector<Method> allMethods() {
  return {Method::Clipper, Method::SM,  Method::MC,    Method::DewcStar,
          Method::MsrcStar, Method::Sdr, Method::DsStar};
}

void RunConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("RunConfig: no methods");
  if (outlier_rates.empty()) throw std::invalid_argument("RunConfig: no outlier rates");
  for (double rate : outlier_rates) {
    if (!(rate >= 0.0) || !(rate < 1.0)) {
      throw std::invalid_argument("RunConfig: outlier rates must be in [0,1)");
    }
  }
  if (trials < 1) throw std::invalid_argument("RunConfig: trials must be >= 1");
  if (threads < 1) throw std::invalid_argument("RunConfig: threads must be >= 1");
  if (oracle_cap < 1) throw std::invalid_argument("RunConfig: oracle_cap must be >= 1");
  if (epsilon && !(*epsilon > 0.0)) throw std::invalid_argument("RunConfig: epsilon must be > 0");
  if (sigma && !(*sigma > 0.0)) throw std::invalid_argument("RunConfig: sigma must be > 0");
  synth.validate();
  solver.validate();
}

MethodOutput runMethod(Method method, const ConsistencyGraph& graph,
                       const Eigen::MatrixXd& one_to_one_conflicts, const RunConfig& config) {
  const int m = graph.size();
  MethodOutput out;
  try {
    switch (method) {
      case Method::Clipper: {
        out.selection = findDensestClique(graph, config.solver).selected;
        break;
      }
      case Method::SM: {
        if (one_to_one_conflicts.rows() == m) {
          out.selection = baselines::spectralMatching(graph.M, one_to_one_conflicts);
        } else {
          out.selection = baselines::spectralMatching(graph.M);
        }
        break;
      }
      case Method::MC: {
        oracles::MaxCliqueOptions options;
        options.timeout_s = config.mc_timeout_s;
        if (m > options.max_vertices) {
          out.status = "early_stopped";
          break;
        }
        Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
          for (int j = i + 1; j < m; ++j) {
            if (graph.M(i, j) >= config.mc_threshold) adjacency(i, j) = adjacency(j, i) = 1.0;
          }
        }
        const auto result = oracles::maxCliqueExact(adjacency, options);
        out.selection = result.clique;
        if (!result.optimal) {
          out.status = "timeout";
          out.note = "best_found";
        }
        break;
      }
      case Method::DewcStar: {
        if (m > config.oracle_cap) {
          out.status = "early_stopped";
          break;
        }
        out.selection = oracles::dewcBruteforce(graph.M, graph.C, config.oracle_cap).selection;
        break;
      }
      case Method::MsrcStar: {
        if (m > config.oracle_cap) {
          out.status = "early_stopped";
          break;
        }
        const auto msrc = oracles::msrcBruteforce(graph.M, graph.C, config.oracle_cap);
        out.selection = roundSolution(msrc.v, graph.M, config.solver.zero_tol).selected;
        break;
      }
      case Method::Sdr: {
        if (m > config.sdp.size_cap) {
          out.status = "early_stopped";
          break;
        }
        const auto sol = sdp::solveMsrcSdr(graph.M, graph.C, config.sdp);
        if (!sol.converged) out.note = "sdp_not_converged";
        Eigen::VectorXd v;
        if (sdp::checkRank1(sol.X)) {
          v = sdp::extract(sol.X);
        } else {
          out.note += out.note.empty() ? "rank1_failed" : ";rank1_failed";
          v = bestRank1Direction(sol.X);
        }
        out.selection = roundSolution(v, graph.M, config.solver.zero_tol).selected;
        break;
      }
      case Method::DsStar: {
        Eigen::MatrixXd weights = graph.M;
        weights.diagonal().setZero();
        out.selection = oracles::densestSubgraphExact(weights).vertices;
        break;
      }
    }
  } catch (const std::exception& e) {
    out.selection.clear();
    out.status = "error:" + sanitize(e.what());
  }
  return out;
}

SweepResult runSweep(const RunConfig& config) {
  config.validate();
  std::vector<TaskContext> tasks;
  for (std::size_t rate_idx = 0; rate_idx < config.outlier_rates.size(); ++rate_idx) {
    for (int trial = 0; trial < config.trials; ++trial) {
      TaskContext ctx;
      ctx.config = &config;
      ctx.rate = config.outlier_rates[rate_idx];
      ctx.trial = trial;
      ctx.m = config.synth.m_putative;
      ctx.seed = Rng::derive(config.synth.seed,
                             (static_cast<std::uint64_t>(rate_idx) << 20) |
                                 static_cast<std::uint64_t>(trial));
      tasks.push_back(ctx);
    }
  }
  return {runTasks(std::move(tasks), config.threads)};
}

SweepResult runScalability(const RunConfig& config, const std::vector<int>& m_grid) {
  config.validate();
  if (m_grid.empty()) throw std::invalid_argument("runScalability: empty m grid");
  for (int m : m_grid) {
    if (m < 1) throw std::invalid_argument("runScalability: m must be >= 1");
  }
  const double rate = config.outlier_rates.front();
  std::vector<TaskContext> tasks;
  for (std::size_t m_idx = 0; m_idx < m_grid.size(); ++m_idx) {
    for (int trial = 0; trial < config.trials; ++trial) {
      TaskContext ctx;
      ctx.config = &config;
      ctx.rate = rate;
      ctx.trial = trial;
      ctx.m = m_grid[m_idx];
      ctx.seed = Rng::derive(config.synth.seed,
                             (1ull << 40) | (static_cast<std::uint64_t>(m_idx) << 20) |
                                 static_cast<std::uint64_t>(trial));
      tasks.push_back(ctx);
    }
  }
  return {runTasks(std::move(tasks), config.threads)};
}

std::vector<SummaryRow> summarize(const std::vector<TrialRow>& rows) {
  struct Accumulator {
    int n_rows = 0;
    int n_ok = 0;
    double sums[7] = {0, 0, 0, 0, 0, 0, 0};
    int counts[7] = {0, 0, 0, 0, 0, 0, 0};
  };
  std::map<std::tuple<std::string, double, int>, Accumulator> groups;
  for (const auto& row : rows) {
    auto& acc = groups[{row.method, row.rate, row.m}];
    ++acc.n_rows;
    if (row.status != "ok") continue;
    ++acc.n_ok;
    const double values[7] = {row.precision,    row.recall,       row.rot_err_rad,
                              row.trans_err,    row.density,      row.solver_time_s,
                              row.affinity_time_s};
    for (int k = 0; k < 7; ++k) {
      if (std::isfinite(values[k])) {
        acc.sums[k] += values[k];
        ++acc.counts[k];
      }
    }
  }

  std::vector<SummaryRow> summary;
  for (const auto& [key, acc] : groups) {
    SummaryRow srow;
    srow.method = std::get<0>(key);
    srow.rate = std::get<1>(key);
    srow.m = std::get<2>(key);
    srow.n_rows = acc.n_rows;
    srow.n_ok = acc.n_ok;
    double* fields[7] = {&srow.mean_precision, &srow.mean_recall,        &srow.mean_rot_err_rad,
                         &srow.mean_trans_err, &srow.mean_density,       &srow.mean_solver_time_s,
                         &srow.mean_affinity_time_s};
    for (int k = 0; k < 7; ++k) {
      *fields[k] = acc.counts[k] > 0 ? acc.sums[k] / acc.counts[k] : kNaN;
    }
    summary.push_back(std::move(srow));
  }
  return summary;
}

std::string toCsv(const std::vector<TrialRow>& rows) {
  std::ostringstream out;
  out << kRowHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << formatDouble(r.rate) << ',' << r.trial << ',' << r.seed << ','
        << r.m << ',' << r.n_inliers << ',' << r.n_selected << ',' << formatDouble(r.precision)
        << ',' << formatDouble(r.recall) << ',' << formatDouble(r.rot_err_rad) << ','
        << formatDouble(r.trans_err) << ',' << formatDouble(r.density) << ','
        << formatDouble(r.subopt_gap) << ',' << formatDouble(r.solver_time_s) << ','
        << formatDouble(r.affinity_time_s) << ',' << r.status << ',' << r.note << '\n';
  }
  return out.str();
}

std::string toCsv(const std::vector<SummaryRow>& summary) {
  std::ostringstream out;
  out << kSummaryHeader << '\n';
  for (const auto& s : summary) {
    out << s.method << ',' << formatDouble(s.rate) << ',' << s.m << ',' << s.n_rows << ','
        << s.n_ok << ',' << formatDouble(s.mean_precision) << ',' << formatDouble(s.mean_recall)
        << ',' << formatDouble(s.mean_rot_err_rad) << ',' << formatDouble(s.mean_trans_err) << ','
        << formatDouble(s.mean_density) << ',' << formatDouble(s.mean_solver_time_s) << ','
        << formatDouble(s.mean_affinity_time_s) << '\n';
  }
  return out.str();
}

void writeCsv(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("writeCsv: cannot open " + path);
  out << contents;
}

std::string configEchoJson(const RunConfig& config, const std::string& command,
                           const std::vector<int>& m_grid) {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = kVersion;
  std::vector<std::string> names;
  for (Method method : config.methods) names.push_back(methodName(method));
  j["methods"] = names;
  j["outlier_rates"] = config.outlier_rates;
  j["trials"] = config.trials;
  j["m_putative"] = config.synth.m_putative;
  j["n_points"] = config.synth.n_points;
  j["gamma"] = config.synth.gamma;
  j["beta_factor"] = config.synth.beta_factor;
  j["seed"] = config.synth.seed;
  j["epsilon"] = config.epsilon ? nlohmann::json(*config.epsilon) : nlohmann::json();
  j["sigma"] = config.sigma ? nlohmann::json(*config.sigma) : nlohmann::json();
  j["oracle_cap"] = config.oracle_cap;
  j["mc_threshold"] = config.mc_threshold;
  j["mc_timeout_s"] = config.mc_timeout_s;
  j["threads"] = config.threads;
  j["hardware_threads"] = std::thread::hardware_concurrency();
  j["solver"] = {{"inner_tol", config.solver.inner_tol},
                 {"max_inner_iters", config.solver.max_inner_iters},
                 {"max_outer_iters", config.solver.max_outer_iters},
                 {"zero_tol", config.solver.zero_tol},
                 {"line_search_shrink", config.solver.line_search_shrink},
                 {"min_step", config.solver.min_step}};
  j["sdp"] = {{"tol", config.sdp.tol},
              {"max_iters", config.sdp.max_iters},
              {"rho", config.sdp.rho},
              {"size_cap", config.sdp.size_cap}};
  if (!m_grid.empty()) j["m_grid"] = m_grid;
  return j.dump(2);
}

}  // namespace clipper::bench
