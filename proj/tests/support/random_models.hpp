// Seeded random model generators for the property suites. Every generated
// model is feasible by construction: rows are anchored at a random integer
// point that stays feasible.

#pragma once

#include <cstdint>

#include "dwcuts/lp.hpp"
#include "dwcuts/model.hpp"

namespace dwcuts::testsupport {

// Loosely coupled pure-integer model: q <= 3 disjoint blocks of at most 4
// variables over small integer boxes, a couple of block rows each, 1..3
// linking rows.
BlockStructuredMip random_loosely_coupled(std::uint64_t seed);

// Bounded LP with every constraint written as a row (no native bounds),
// at most max_vars free variables. Feasible and bounded by construction.
LpProblem random_row_form_lp(std::uint64_t seed, int max_vars = 6);

// Bounded LP with native bounds, for simplex-vs-vertex-enumeration checks.
LpProblem random_box_lp(std::uint64_t seed, int max_vars = 6);

// Single-block all-binary knapsack model (2..4 variables, one <= row),
// no linking rows. Never empty: the zero point is always feasible.
BlockStructuredMip random_binary_knapsack(std::uint64_t seed);

}  // namespace dwcuts::testsupport
