// SPDX-License-Identifier: Apache-2.0
//
// Block-structured MIP data model:
//
//   min c'x   s.t.   x_I(j) in P^j for every block j,  Ax >= b,  x in X,
//
// where P^j is the polyhedron of block j's rows, X the integrality
// restrictions, and the supports I(j) may overlap. Variable bounds are
// stored once, globally, and injected into every block subproblem and
// every master LP built from the model. All rows are normalized to >=.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dwcuts/types.hpp"

namespace dwcuts {

// One block: an ordered support I(j) of global variable indices plus the
// rows G^j y >= g^j written over local indices 0..|I(j)|-1. The local
// integrality flags are inherited from the model's global flags.
struct Block {
  std::vector<int> support;
  std::vector<SparseRow> rows;
  std::vector<bool> integrality;

  int size() const { return static_cast<int>(support.size()); }

  // Local index of a global variable, or -1 when not in the support.
  int local_of(int global) const {
    for (int l = 0; l < size(); ++l)
      if (support[static_cast<std::size_t>(l)] == global) return l;
    return -1;
  }

  void add_row(const SparseRow& row) {
    for (const auto& ge : to_greater_equal(row)) rows.push_back(ge);
  }
};

struct BlockStructuredMip {
  int n = 0;
  std::vector<double> objective;
  std::vector<SparseRow> linking;  // A x >= b, global indices
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integrality;
  std::vector<Block> blocks;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int num_linking() const { return static_cast<int>(linking.size()); }

  void add_linking(const SparseRow& row) {
    for (const auto& ge : to_greater_equal(row)) linking.push_back(ge);
  }

  // Block with the model's integrality flags filled in over the support.
  void add_block(std::vector<int> support, std::vector<SparseRow> rows = {}) {
    Block b;
    b.support = std::move(support);
    for (const auto& row : rows) b.add_row(row);
    b.integrality.reserve(b.support.size());
    for (int g : b.support) b.integrality.push_back(in_range(g) && integrality[static_cast<std::size_t>(g)]);
    blocks.push_back(std::move(b));
  }

  bool in_range(int var) const { return var >= 0 && var < n; }

  double objective_value(std::span<const double> x) const {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += objective[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    return v;
  }
};

// Convenience constructor for a model with uniform bounds.
BlockStructuredMip make_model(int n, std::vector<double> objective,
                              std::vector<double> lower, std::vector<double> upper,
                              std::vector<bool> integrality);

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

// Report-only structural validation: index ranges, empty blocks, NaN/inf
// coefficients, duplicate supports, integrality inheritance.
ValidationReport validate_model(const BlockStructuredMip& model);

struct Violation {
  std::string constraint;
  double amount = 0.0;
};

struct SolutionReport {
  double objective = 0.0;
  bool feasible = false;
  std::vector<Violation> violated;
};

// Evaluates c'x and checks x against linking rows, block rows, bounds and
// integrality (|x_i - round(x_i)| <= int_tol). Throws DimensionError when
// |x| != n.
SolutionReport evaluate_solution(const BlockStructuredMip& model, std::span<const double> x,
                                 double feas_tol = kFeasTol, double int_tol = kIntTol);

}  // namespace dwcuts
