// Small hand-built models with independently verified optima, reused across
// the suites.

#pragma once

#include "dwcuts/dual_point.hpp"
#include "dwcuts/lp.hpp"
#include "dwcuts/model.hpp"

namespace dwcuts::testsupport {

// Two integer-box blocks {1,2}^2 coupled by two >= rows, asymmetric
// objective. Natural LP bound 7, DW bound 8, MIP optimum 8.
BlockStructuredMip coupled_boxes_model();

// Wolfe-feasible multipliers for coupled_boxes_model with Lagrangian values
// 27/4 and 78/11; the cut LPs they induce have optima 125/16 and 149/19.
DualPoint coupled_boxes_dual_a();
DualPoint coupled_boxes_dual_b();

// min x1 - x2 over three >= rows with free variables: the primal optimum
// (0,1) is unique, the unique dual basic solution is w = (1, 0, 2).
LpProblem degenerate_corner_lp();

}  // namespace dwcuts::testsupport
