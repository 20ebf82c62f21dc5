/**
 * @file bench.h
 * @brief Monte Carlo benchmark harness: outlier-rate sweeps and scalability
 *        timings with machine-readable CSV output
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clipper/geometry.h"
#include "clipper/sdp.h"
#include "clipper/solver.h"
#include "clipper/types.h"

namespace clipper::bench {

inline constexpr const char* kVersion = "0.1.0";

enum class Method { Clipper, SM, MC, DewcStar, MsrcStar, Sdr, DsStar };

/// CLI names: clipper, sm, mc, dewc*, msrc*, sdr, ds*.
std::string methodName(Method method);

/// Accepts the starred CLI names and their star-less aliases. Throws
/// std::invalid_argument on anything else.
Method parseMethod(const std::string& name);

std::vector<Method> allMethods();

struct RunConfig {
  std::vector<Method> methods{Method::Clipper};
  std::vector<double> outlier_rates{0.8};
  int trials = 1;
  geometry::SyntheticParams synth;  ///< outlier_rate is overridden per grid point

  std::optional<double> epsilon;  ///< default: 2 * synth.beta()
  std::optional<double> sigma;    ///< default: epsilon / 3

  SolverParams solver;
  sdp::SdpParams sdp;
  int oracle_cap = 20;        ///< run dewc*/msrc* (and the suboptimality
                              ///< reference) only when m <= this
  double mc_threshold = 1e-9; ///< binarization threshold for the mc method
  double mc_timeout_s = 30.0;
  int threads = 1;            ///< worker pool size; each trial stays single-threaded

  void validate() const;  ///< throws std::invalid_argument
};

/// One CSV row per (method, rate-or-m grid point, trial). Unavailable
/// numeric fields are NaN and serialize as empty cells.
struct TrialRow {
  std::string method;
  double rate = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  int m = 0;
  int n_inliers = 0;
  int n_selected = 0;
  double precision;
  double recall;
  double rot_err_rad;
  double trans_err;
  double density;      ///< selection density u'Mu/u'u
  double subopt_gap;   ///< dewc* density minus this method's density
  double solver_time_s;
  double affinity_time_s;
  std::string status;  ///< ok | early_stopped | timeout | error:<what>
  std::string note;

  TrialRow();
};

/// Fixed, documented column set; first line of every rows CSV.
extern const char* const kRowHeader;

struct SummaryRow {
  std::string method;
  double rate = 0.0;
  int m = 0;
  int n_rows = 0;
  int n_ok = 0;
  double mean_precision;
  double mean_recall;
  double mean_rot_err_rad;
  double mean_trans_err;
  double mean_density;
  double mean_solver_time_s;
  double mean_affinity_time_s;
};

extern const char* const kSummaryHeader;

struct SweepResult {
  std::vector<TrialRow> rows;  ///< sorted by (method, rate, m, trial)
};

/// Per-method selection on one prepared instance, with status/note
/// bookkeeping (used by both drivers and the file-driven CLI).
struct MethodOutput {
  Selection selection;
  std::string status = "ok";
  std::string note;
};

MethodOutput runMethod(Method method, const ConsistencyGraph& graph,
                       const Eigen::MatrixXd& one_to_one_conflicts, const RunConfig& config);

/// Monte Carlo sweep over outlier rates. Per-trial failures become rows
/// with an error status; the sweep itself always completes. Trial seeds:
/// Rng::derive(config seed, rate_index << 20 | trial).
SweepResult runSweep(const RunConfig& config);

/// Runtime scaling over a grid of association counts at a fixed outlier
/// rate (config.outlier_rates[0]). Methods whose exact-solver caps are
/// exceeded produce rows with status "early_stopped". The model size
/// n_points is raised to 2x the required inliers when too small. Trial
/// seeds: Rng::derive(config seed, 1<<40 | m_index << 20 | trial).
SweepResult runScalability(const RunConfig& config, const std::vector<int>& m_grid);

/// Means over rows with status "ok", skipping non-finite fields; grouped by
/// (method, rate, m).
std::vector<SummaryRow> summarize(const std::vector<TrialRow>& rows);

std::string toCsv(const std::vector<TrialRow>& rows);
std::string toCsv(const std::vector<SummaryRow>& summary);
void writeCsv(const std::string& path, const std::string& contents);

/// JSON echo of the fully resolved configuration plus environment capture
/// (version, thread counts, grids), so results are regenerable.
std::string configEchoJson(const RunConfig& config, const std::string& command,
                           const std::vector<int>& m_grid = {});

}  // namespace clipper::bench
