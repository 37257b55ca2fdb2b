// SPDX-License-Identifier: Apache-2.0
//
// Degeneracy and bound analytics. The degeneracy level of a basic dual
// solution w of an n-variable inequality-form LP is n - ||w||_0, entries
// snapped to zero below 1e-8; it upper-bounds the dimension of the primal
// optimal face. Face dimensions are computed by brute-force vertex
// enumeration for small LPs.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "dwcuts/lp.hpp"

namespace dwcuts {

struct DegeneracyReport {
  int n = 0;
  int support = 0;  // ||w||_0 after zero-snapping
  int level = 0;    // n - support
  double relative = 0.0;
};

DegeneracyReport degeneracy_level(const Eigen::VectorXd& w, int n, double zero_tol = kZeroSnapTol);

// Full inequality-dual vector of an optimal solution: one entry per row
// plus one per finite bound constraint (reduced-cost split).
Eigen::VectorXd inequality_duals(const LpProblem& lp, const LpSolution& sol);

struct GapReport {
  double z_d = 0.0;
  double z_l = 0.0;
  std::optional<double> z_r;
  double r_l = 0.0;  // (z_d - z_l) / |z_d|
  std::optional<double> r_r;
};

// Throws ZeroDenominatorError when z_d == 0.
GapReport gap_report(double z_d, double z_l, std::optional<double> z_r = std::nullopt);

// Affine dimension of the LP's optimal face, by enumerating basic feasible
// points (plus recession directions when the face is unbounded). Requires
// at most max_vars variables; throws SizeLimitError beyond that and Error
// when the LP is not solvable to optimality.
int optimal_face_dim(const LpProblem& lp, int max_vars = 8);

// Dimension of the whole feasible set (optimal face under a zero objective).
int polyhedron_dim(const LpProblem& lp, int max_vars = 8);

// Checks dim(P intersect {c'x = v}) == dim(P) - 1 after verifying that
// neither c'x <= v nor c'x >= v is valid for P; PreconditionViolated when
// one of them is.
bool check_prop2_slice(const LpProblem& lp, double v);

}  // namespace dwcuts
