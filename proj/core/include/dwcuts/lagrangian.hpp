// SPDX-License-Identifier: Apache-2.0
//
// Wolfe-dual computation of the DW bound:
//
//   max  sum_j D_j(pi^j) + b'beta
//   s.t. sum_{j: i in I(j)} pi^j_i + beta'A_i = c_i  for every variable i,
//        beta >= 0,
//
// solved either by the level method (cutting-plane model plus a projection
// QP onto the level set {model >= 0.7 UB + 0.3 LB}) or by Kelley's method
// (next iterate = model argmax). Multi-cut model: one theta_j per block.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dwcuts/dual_point.hpp"
#include "dwcuts/model.hpp"

namespace dwcuts {

enum class DualStatus { Converged, QpFailure, IterationLimit };

struct DualTracePoint {
  int iteration = 0;
  double lower = -kInfinity;
  double upper = kInfinity;
  double seconds = 0.0;
};

struct DualResult {
  DualStatus status = DualStatus::IterationLimit;
  double lb = -kInfinity;  // best Lagrangian bound
  double ub = kInfinity;   // best cutting-plane model bound
  DualPoint best_dual;
  std::vector<DualTracePoint> trace;
  int iterations = 0;
  // Best few multipliers seen, by bound value, strongest first.
  std::vector<std::pair<double, DualPoint>> retained;
};

struct DualSolveOptions {
  int max_iter = 1000;
  double rel_tol = 1e-6;
  // Level set: level = level_upper_weight * UB + (1 - weight) * LB.
  double level_upper_weight = 0.7;
  std::optional<double> upper_bound_init;  // overrides the rounding-based z-bar
  int retain_top_k = 5;
};

// Checks Wolfe feasibility (equalities within 1e-7, beta >= -1e-9) and
// returns sum_j D_j(pi^j) + b'beta; -infinity when some block prices
// unbounded. Throws DualInfeasibleError when the multiplier is infeasible.
double evaluate_dual(const BlockStructuredMip& model, const DualPoint& dual);

// Feasible objective from rounding the natural LP point, or a Big-M
// fallback; used to initialize the model cap z-bar.
double default_dual_upper_bound(const BlockStructuredMip& model);

DualResult solve_dual_level(const BlockStructuredMip& model, const DualSolveOptions& options = {});
DualResult solve_dual_kelley(const BlockStructuredMip& model, const DualSolveOptions& options = {});

// CSV: iteration, lower, upper, seconds.
void write_dual_trace_csv(const DualResult& result, const std::string& path);

}  // namespace dwcuts
