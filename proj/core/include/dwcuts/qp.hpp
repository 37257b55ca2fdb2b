// SPDX-License-Identifier: Apache-2.0
//
// Convex projection QP: minimize 0.5 * sum_k weights_k (x_k - anchor_k)^2
// over the rows and bounds of an LpProblem. Solved by a primal active-set
// method started from a phase-1 simplex vertex (or from the anchor itself
// when it is already feasible). Zero-weight columns ride along free of
// charge, which is how the level-method model variables are handled.

#pragma once

#include <Eigen/Dense>

#include "dwcuts/lp.hpp"
#include "dwcuts/types.hpp"

namespace dwcuts {

enum class QpStatus { Optimal, Infeasible };

struct QpResult {
  QpStatus status = QpStatus::Infeasible;
  Eigen::VectorXd x;
  int iterations = 0;
};

struct QpOptions {
  int max_iter = 2000;
  double active_tol = 1e-9;
  double multiplier_tol = 1e-9;
};

// Throws NumericalFailure when the active-set loop exceeds its budget.
QpResult project_onto_polyhedron(const LpProblem& constraints, const Eigen::VectorXd& anchor,
                                 const Eigen::VectorXd& weights, const QpOptions& options = {});

// Uniform-weight convenience overload.
QpResult project_onto_polyhedron(const LpProblem& constraints, const Eigen::VectorXd& anchor,
                                 const QpOptions& options = {});

}  // namespace dwcuts
