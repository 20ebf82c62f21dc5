/**
 * @file serialization.h
 * @brief JSON views of solver and SDP diagnostics
 */

#pragma once

#include <json.hpp>

#include "clipper/sdp.h"
#include "clipper/solver.h"

namespace clipper {

inline nlohmann::json toJson(const DenseSolution& sol, bool include_trace = false) {
  nlohmann::json j;
  j["penalty"] = sol.penalty;
  j["objective"] = sol.objective;
  j["outer_iters"] = sol.outer_iters;
  j["inner_iters"] = sol.inner_iters;
  j["constraints_satisfied"] = sol.constraints_satisfied;
  j["forced_feasible"] = sol.forced_feasible;
  j["inner_cap_hit"] = sol.inner_cap_hit;
  if (include_trace) {
    auto& trace = j["trace"] = nlohmann::json::array();
    for (const auto& [d, f] : sol.trace) trace.push_back({d, f});
  }
  return j;
}

inline nlohmann::json toJson(const CliqueEstimate& estimate) {
  return {{"selected", estimate.selected},
          {"omega_hat", estimate.omega_hat},
          {"density", estimate.density}};
}

namespace sdp {

inline nlohmann::json toJson(const SdpSolution& sol, double rank_ratio_tol = 1e-3) {
  return {{"objective", sol.objective},
          {"primal_residual", sol.primal_residual},
          {"dual_residual", sol.dual_residual},
          {"iterations", sol.iterations},
          {"converged", sol.converged},
          {"rank1", checkRank1(sol.X, rank_ratio_tol)}};
}

}  // namespace sdp

}  // namespace clipper
