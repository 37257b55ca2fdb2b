// SPDX-License-Identifier: Apache-2.0
//
// Dense LP solving: two-phase revised simplex over bounded variables
// (free variables allowed), Dantzig pricing with a Bland fallback on
// degenerate streaks. Returns a *basic* dual solution: row duals are zero
// wherever the row's slack is basic, which the degeneracy analytics rely
// on. Sign convention: in a minimization, >=-row duals are nonnegative
// and <=-row duals nonpositive.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dwcuts/types.hpp"

namespace dwcuts {

struct LpColumn {
  double objective = 0.0;
  double lower = 0.0;
  double upper = kInfinity;
  std::string name;
};

struct LpProblem {
  std::vector<LpColumn> cols;
  std::vector<SparseRow> rows;

  int num_cols() const { return static_cast<int>(cols.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_col(double objective, double lower, double upper, std::string name = {}) {
    cols.push_back({objective, lower, upper, std::move(name)});
    return num_cols() - 1;
  }
  int add_free_col(double objective, std::string name = {}) {
    return add_col(objective, -kInfinity, kInfinity, std::move(name));
  }
  void add_row(SparseRow row) { rows.push_back(std::move(row)); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  // One dual per row (basic dual solution) and one reduced cost per column.
  Eigen::VectorXd row_duals;
  Eigen::VectorXd reduced_costs;
  std::vector<bool> col_basic;
  std::vector<bool> row_basic;  // true iff the row's slack is basic (row dual 0)
  // Improving feasible direction when Unbounded (structural part).
  Eigen::VectorXd ray;
  double max_primal_violation = 0.0;
  int iterations = 0;
};

struct SimplexOptions {
  int max_iter = 50000;
  double pivot_tol = 1e-10;
  double cost_tol = 1e-9;
  // Consecutive near-zero steps before switching to Bland's rule.
  int degenerate_streak = 40;
};

// Solves the LP, throwing NumericalFailure if the pivot budget is exhausted
// even under the Bland fallback.
LpSolution solve_lp(const LpProblem& lp, const SimplexOptions& options = {});

// Max violation of rows and bounds at x.
double lp_infeasibility(const LpProblem& lp, const Eigen::VectorXd& x);

}  // namespace dwcuts
