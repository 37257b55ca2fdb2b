// SPDX-License-Identifier: Apache-2.0

#include "dwcuts/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace dwcuts {
namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  // Sparse bound overrides accumulated down the branch.
  std::vector<std::pair<int, double>> lower_overrides;
  std::vector<std::pair<int, double>> upper_overrides;
  double bound = -kInfinity;  // parent LP bound
};

constexpr double kPruneTol = 1e-9;

int most_fractional(const Eigen::VectorXd& x, const std::vector<bool>& integer_cols,
                    double int_tol) {
  int best = -1;
  double best_dist = 0.5;
  for (int j = 0; j < x.size(); ++j) {
    if (!integer_cols[static_cast<std::size_t>(j)]) continue;
    const double frac = x[j] - std::floor(x[j]);
    const double away = std::min(frac, 1.0 - frac);
    if (away <= int_tol) continue;
    const double dist = std::abs(frac - 0.5);
    if (best < 0 || dist < best_dist - 1e-12) {
      best = j;
      best_dist = dist;
    }
  }
  return best;
}

}  // namespace

OracleResult branch_and_bound(const LpProblem& relaxation, const std::vector<bool>& integer_cols,
                              const OracleLimits& limits) {
  if (integer_cols.size() != static_cast<std::size_t>(relaxation.num_cols()))
    throw DimensionError("branch_and_bound: integrality flag count mismatch");

  const auto t0 = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  OracleResult result;
  result.value = limits.cutoff;

  std::vector<Node> open;
  open.push_back({});
  bool hit_limit = false;

  auto record_trace = [&] {
    double lb = result.has_incumbent() && open.empty() ? result.value : kInfinity;
    for (const auto& node : open) lb = std::min(lb, node.bound);
    if (open.empty() && !result.has_incumbent()) lb = result.value;
    result.trace.push_back({result.node_count, elapsed(), lb, result.value});
  };

  LpProblem scratch = relaxation;
  while (!open.empty()) {
    if (result.node_count >= limits.node_limit || elapsed() > limits.time_limit) {
      hit_limit = true;
      break;
    }
    // Depth-first with a best-bound restart every 1000 nodes.
    std::size_t pick = open.size() - 1;
    if (result.node_count > 0 && result.node_count % 1000 == 0) {
      for (std::size_t i = 0; i < open.size(); ++i)
        if (open[i].bound < open[pick].bound) pick = i;
      record_trace();
    }
    Node node = open[pick];
    open.erase(open.begin() + static_cast<long>(pick));
    ++result.node_count;

    if (node.bound >= result.value - kPruneTol * (1.0 + std::abs(result.value))) continue;

    for (int j = 0; j < scratch.num_cols(); ++j) {
      scratch.cols[static_cast<std::size_t>(j)].lower = relaxation.cols[static_cast<std::size_t>(j)].lower;
      scratch.cols[static_cast<std::size_t>(j)].upper = relaxation.cols[static_cast<std::size_t>(j)].upper;
    }
    for (const auto& [j, v] : node.lower_overrides)
      scratch.cols[static_cast<std::size_t>(j)].lower =
          std::max(scratch.cols[static_cast<std::size_t>(j)].lower, v);
    for (const auto& [j, v] : node.upper_overrides)
      scratch.cols[static_cast<std::size_t>(j)].upper =
          std::min(scratch.cols[static_cast<std::size_t>(j)].upper, v);

    LpSolution lp = solve_lp(scratch);
    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status == LpStatus::Unbounded) {
      // Only the root relaxation can be unbounded (children are subsets).
      result.status = OracleStatus::Unbounded;
      result.value = -kInfinity;
      result.best_bound = -kInfinity;
      result.ray = lp.ray;
      result.argmin.resize(0);
      record_trace();
      return result;
    }
    if (lp.objective >= result.value - kPruneTol * (1.0 + std::abs(result.value))) continue;

    const int branch_var = most_fractional(lp.x, integer_cols, kIntTol);
    if (branch_var < 0) {
      // Integer feasible: snap the integer coordinates clean.
      Eigen::VectorXd point = lp.x;
      for (int j = 0; j < point.size(); ++j)
        if (integer_cols[static_cast<std::size_t>(j)]) point[j] = std::round(point[j]);
      double value = 0.0;
      for (int j = 0; j < point.size(); ++j)
        value += scratch.cols[static_cast<std::size_t>(j)].objective * point[j];
      if (lp_infeasibility(relaxation, point) > kFeasTol) {
        // Snapping broke a row; keep the raw LP value conservatively.
        point = lp.x;
        value = lp.objective;
      }
      if (value < result.value - kPruneTol) {
        result.value = value;
        result.argmin = point;
        record_trace();
      }
      continue;
    }

    // Rounding heuristic on the LP point. Integer columns clamp onto the
    // integer grid inside their bounds, not onto the raw bounds.
    {
      Eigen::VectorXd rounded = lp.x;
      bool roundable = true;
      for (int j = 0; j < rounded.size() && roundable; ++j) {
        const auto& col = relaxation.cols[static_cast<std::size_t>(j)];
        if (integer_cols[static_cast<std::size_t>(j)]) {
          const double lo = std::ceil(col.lower - kIntTol);
          const double hi = std::floor(col.upper + kIntTol);
          if (lo > hi) {
            roundable = false;
            break;
          }
          rounded[j] = std::clamp(std::round(rounded[j]), lo, hi);
        } else {
          rounded[j] = std::clamp(rounded[j], col.lower, col.upper);
        }
      }
      if (roundable && lp_infeasibility(relaxation, rounded) <= kFeasTol) {
        double value = 0.0;
        for (int j = 0; j < rounded.size(); ++j)
          value += relaxation.cols[static_cast<std::size_t>(j)].objective * rounded[j];
        if (value < result.value - kPruneTol) {
          result.value = value;
          result.argmin = rounded;
          record_trace();
        }
      }
    }

    const double v = lp.x[branch_var];
    Node up = node;
    up.bound = lp.objective;
    up.lower_overrides.emplace_back(branch_var, std::ceil(v));
    Node down = node;
    down.bound = lp.objective;
    down.upper_overrides.emplace_back(branch_var, std::floor(v));
    open.push_back(std::move(up));
    open.push_back(std::move(down));  // processed first (LIFO)
  }

  if (hit_limit) {
    result.status = OracleStatus::LimitReached;
    result.best_bound = result.value;
    for (const auto& node : open) result.best_bound = std::min(result.best_bound, node.bound);
    record_trace();
    return result;
  }
  if (!result.has_incumbent() && !std::isfinite(result.value)) {
    result.status = OracleStatus::Infeasible;
    result.best_bound = kInfinity;
    return result;
  }
  result.status = OracleStatus::Optimal;
  result.best_bound = result.value;
  record_trace();
  return result;
}

LpProblem natural_lp_relaxation(const BlockStructuredMip& model) {
  LpProblem lp;
  for (int i = 0; i < model.n; ++i)
    lp.add_col(model.objective[static_cast<std::size_t>(i)], model.lower[static_cast<std::size_t>(i)],
               model.upper[static_cast<std::size_t>(i)], "x" + std::to_string(i));
  for (const auto& row : model.linking) lp.add_row(row);
  for (int j = 0; j < model.num_blocks(); ++j) {
    const Block& block = model.blocks[static_cast<std::size_t>(j)];
    for (const auto& row : block.rows) {
      SparseRow mapped;
      mapped.sense = row.sense;
      mapped.rhs = row.rhs;
      mapped.name = row.name;
      for (const auto& [local, coef] : row.terms)
        mapped.terms.emplace_back(block.support[static_cast<std::size_t>(local)], coef);
      lp.add_row(mapped);
    }
  }
  return lp;
}

LpProblem block_lp(const BlockStructuredMip& model, const Block& block,
                   const Eigen::VectorXd& weights) {
  if (weights.size() != block.size())
    throw DimensionError("block_lp: weight vector does not match the support size");
  LpProblem lp;
  for (int l = 0; l < block.size(); ++l) {
    const auto g = static_cast<std::size_t>(block.support[static_cast<std::size_t>(l)]);
    lp.add_col(weights[l], model.lower[g], model.upper[g]);
  }
  for (const auto& row : block.rows) lp.add_row(row);
  return lp;
}

OracleResult minimize_over_block(const BlockStructuredMip& model, const Block& block,
                                 const Eigen::VectorXd& weights, const OracleLimits& limits) {
  const LpProblem lp = block_lp(model, block, weights);
  return branch_and_bound(lp, block.integrality, limits);
}

OracleResult solve_mip(const BlockStructuredMip& model, const OracleLimits& limits) {
  return branch_and_bound(natural_lp_relaxation(model), model.integrality, limits);
}

}  // namespace dwcuts
