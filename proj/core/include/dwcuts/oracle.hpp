// SPDX-License-Identifier: Apache-2.0
//
// Exact branch-and-bound MIP solving over the dense simplex. Used for the
// block pricing subproblems D_j(pi) = min{pi'v : v in Q^j}, for the cut
// strengthening subproblems, and as the ground-truth optimum in tests and
// benchmarks. Pricing calls run in exact mode: a node is pruned only when
// its LP bound is within 1e-9 of the incumbent.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dwcuts/lp.hpp"
#include "dwcuts/model.hpp"

namespace dwcuts {

enum class OracleStatus { Optimal, Infeasible, Unbounded, LimitReached };

struct OracleLimits {
  double time_limit = kInfinity;  // seconds
  long node_limit = 100000000L;
  // Known upper bound on the optimum; nodes at or above it are pruned.
  double cutoff = kInfinity;
};

struct BoundTracePoint {
  long nodes = 0;
  double seconds = 0.0;
  double lower = -kInfinity;  // best bound
  double upper = kInfinity;   // incumbent
};

struct OracleResult {
  OracleStatus status = OracleStatus::Infeasible;
  double value = kInfinity;       // incumbent objective
  double best_bound = -kInfinity;
  Eigen::VectorXd argmin;         // empty when no incumbent exists
  Eigen::VectorXd ray;            // set when Unbounded
  long node_count = 0;
  std::vector<BoundTracePoint> trace;

  bool has_incumbent() const { return argmin.size() > 0; }
  double gap() const {
    if (status == OracleStatus::Optimal) return 0.0;
    if (!std::isfinite(value) || !std::isfinite(best_bound)) return kInfinity;
    return (value - best_bound) / std::max(1e-12, std::abs(value));
  }
};

// Generic engine: LP relaxation plus per-column integrality flags.
OracleResult branch_and_bound(const LpProblem& relaxation, const std::vector<bool>& integer_cols,
                              const OracleLimits& limits = {});

// min weights'y over Q^j (block rows + global bounds + integrality).
OracleResult minimize_over_block(const BlockStructuredMip& model, const Block& block,
                                 const Eigen::VectorXd& weights, const OracleLimits& limits = {});

OracleResult solve_mip(const BlockStructuredMip& model, const OracleLimits& limits = {});

// LP relaxation of the whole model: linking rows, all block rows mapped to
// global indices, and the variable bounds.
LpProblem natural_lp_relaxation(const BlockStructuredMip& model);

// LP over one block's rows and bounds with the given objective.
LpProblem block_lp(const BlockStructuredMip& model, const Block& block,
                   const Eigen::VectorXd& weights);

}  // namespace dwcuts
