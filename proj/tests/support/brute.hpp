// Test-only brute-force oracles. These deliberately avoid the solver code
// paths they are used to check: enumeration does the work, and where an LP
// must be solved the model is built from scratch here.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "dwcuts/lp.hpp"
#include "dwcuts/model.hpp"

namespace dwcuts::testsupport {

// All integer points of Q^j = block rows + global bounds + integrality,
// restricted to the support. Requires finite bounds on all integer locals
// and at most `cap` candidate points.
std::vector<Eigen::VectorXd> enumerate_block_points(const BlockStructuredMip& model,
                                                    const Block& block, long cap = 2000000);

// Minimum of w'y over the enumerated block points.
std::optional<double> brute_block_min(const BlockStructuredMip& model, const Block& block,
                                      const Eigen::VectorXd& weights);

// All vertices of the polyhedron {rows, bounds}: every nonsingular choice
// of n active constraints among rows and finite bounds, filtered for
// feasibility, deduplicated.
std::vector<Eigen::VectorXd> enumerate_vertices(const LpProblem& lp, double feas_tol = 1e-7);

// Minimum objective over enumerated vertices (nullopt when none exist).
std::optional<double> brute_vertex_min(const LpProblem& lp);

// Optimum of a pure-integer model by full enumeration over the bound box.
std::optional<double> brute_mip_min(const BlockStructuredMip& model, long cap = 4000000);
std::vector<Eigen::VectorXd> enumerate_feasible_points(const BlockStructuredMip& model,
                                                       long cap = 4000000);

// Independent Dantzig-Wolfe bound: enumerate every point of every block's
// feasible set, write the convex-hull reformulation explicitly, and solve
// that single LP. Returns nullopt when the LP is infeasible.
std::optional<double> hull_lp_bound(const BlockStructuredMip& model);

// Affine dimension of a point set (rank of differences), -1 for empty.
int affine_dimension(const std::vector<Eigen::VectorXd>& points, double tol = 1e-7);

// Exact weighted projection of anchor onto {rows, bounds} by enumerating
// candidate active sets. Returns the optimal weighted squared distance and
// one minimizer; nullopt when infeasible. Intended for <= ~12 constraints.
struct BruteProjection {
  Eigen::VectorXd x;
  double weighted_sq_distance = 0.0;
};
std::optional<BruteProjection> brute_projection(const LpProblem& lp, const Eigen::VectorXd& anchor,
                                                const Eigen::VectorXd& weights);

}  // namespace dwcuts::testsupport
