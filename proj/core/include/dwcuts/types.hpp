// SPDX-License-Identifier: Apache-2.0
//
// Shared primitives: tolerances, error types, sparse rows.

#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dwcuts {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Absolute feasibility / integrality / dual tolerances used across the
// library. Cut validity checks use kCutTol, zero-snapping of dual vectors
// uses kZeroSnapTol.
inline constexpr double kFeasTol = 1e-6;
inline constexpr double kIntTol = 1e-6;
inline constexpr double kDualTol = 1e-6;
inline constexpr double kCutTol = 1e-7;
inline constexpr double kZeroSnapTol = 1e-8;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct NumericalFailure : Error {
  using Error::Error;
};

// Wolfe-dual feasibility violated: z(pi, beta) = -inf for this multiplier.
struct DualInfeasibleError : Error {
  using Error::Error;
};

struct PreconditionViolated : Error {
  using Error::Error;
};

struct SizeLimitError : Error {
  using Error::Error;
};

struct ZeroDenominatorError : Error {
  using Error::Error;
};

struct InvalidBoundsError : Error {
  using Error::Error;
};

// Pricing subproblem unbounded: no finite-rhs cut exists for the requested
// direction.
struct UnboundedDirectionError : Error {
  using Error::Error;
};

struct MissingDualError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

enum class RowSense { GreaterEqual, LessEqual, Equal };

// One sparse linear constraint. Term indices refer to whatever variable
// space the owner defines (global for linking rows, local for block rows).
struct SparseRow {
  std::vector<std::pair<int, double>> terms;
  RowSense sense = RowSense::GreaterEqual;
  double rhs = 0.0;
  std::string name;

  double activity(std::span<const double> x) const {
    double a = 0.0;
    for (const auto& [idx, coef] : terms) a += coef * x[static_cast<std::size_t>(idx)];
    return a;
  }

  // Signed violation: positive means the row is violated by that amount.
  double violation(std::span<const double> x) const {
    const double a = activity(x);
    switch (sense) {
      case RowSense::GreaterEqual:
        return rhs - a;
      case RowSense::LessEqual:
        return a - rhs;
      case RowSense::Equal:
        return std::abs(a - rhs);
    }
    return 0.0;
  }
};

// Normalizes a row to >= sense: <= rows are negated, = rows are split in two.
inline std::vector<SparseRow> to_greater_equal(const SparseRow& row) {
  switch (row.sense) {
    case RowSense::GreaterEqual:
      return {row};
    case RowSense::LessEqual: {
      SparseRow flipped = row;
      flipped.sense = RowSense::GreaterEqual;
      flipped.rhs = -row.rhs;
      for (auto& [idx, coef] : flipped.terms) coef = -coef;
      return {flipped};
    }
    case RowSense::Equal: {
      SparseRow ge = row;
      ge.sense = RowSense::GreaterEqual;
      if (!ge.name.empty()) ge.name += "+";
      SparseRow le = row;
      le.sense = RowSense::LessEqual;
      if (!le.name.empty()) le.name += "-";
      auto negated = to_greater_equal(le);
      negated.insert(negated.begin(), ge);
      return negated;
    }
  }
  return {};
}

}  // namespace dwcuts
