// SPDX-License-Identifier: Apache-2.0

#include "dwcuts/lagrangian.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "dwcuts/dw.hpp"
#include "dwcuts/oracle.hpp"
#include "dwcuts/qp.hpp"

namespace dwcuts {
namespace {

using Clock = std::chrono::steady_clock;

// Column layout of the cutting-plane master: pi blocks, then beta, then
// theta.
struct MasterColumns {
  std::vector<int> pi_begin;  // per block
  int beta_begin = 0;
  int theta_begin = 0;
  int total = 0;
};

MasterColumns layout_of(const BlockStructuredMip& model) {
  MasterColumns cols;
  int at = 0;
  for (int j = 0; j < model.num_blocks(); ++j) {
    cols.pi_begin.push_back(at);
    at += model.blocks[static_cast<std::size_t>(j)].size();
  }
  cols.beta_begin = at;
  at += model.num_linking();
  cols.theta_begin = at;
  at += model.num_blocks();
  cols.total = at;
  return cols;
}

// Cutting-plane model rows over (pi, beta, theta):
//   v'pi^j - theta_j >= 0      for every stored point v of block j,
//   r'pi^j >= 0                for every stored ray,
//   sum theta + b'beta <= zbar,
//   sum_{j: i in I(j)} pi^j_i + beta'A_i = c_i,
//   beta >= 0 (column bound).
// Objective (for the LP master): maximize sum theta + b'beta.
LpProblem build_dual_master(const BlockStructuredMip& model, const ColumnPool& pool,
                            const MasterColumns& cols, double zbar) {
  LpProblem lp;
  for (int j = 0; j < model.num_blocks(); ++j)
    for (int l = 0; l < model.blocks[static_cast<std::size_t>(j)].size(); ++l)
      lp.add_free_col(0.0, "pi" + std::to_string(j) + "_" + std::to_string(l));
  for (int r = 0; r < model.num_linking(); ++r)
    lp.add_col(-model.linking[static_cast<std::size_t>(r)].rhs, 0.0, kInfinity,
               "beta" + std::to_string(r));
  for (int j = 0; j < model.num_blocks(); ++j)
    lp.add_free_col(-1.0, "theta" + std::to_string(j));

  for (int j = 0; j < model.num_blocks(); ++j) {
    for (const auto& v : pool.points(j)) {
      SparseRow row;
      row.sense = RowSense::GreaterEqual;
      row.rhs = 0.0;
      for (int l = 0; l < v.size(); ++l)
        if (v[l] != 0.0) row.terms.emplace_back(cols.pi_begin[static_cast<std::size_t>(j)] + l, v[l]);
      row.terms.emplace_back(cols.theta_begin + j, -1.0);
      lp.add_row(row);
    }
    for (const auto& r : pool.rays(j)) {
      SparseRow row;
      row.sense = RowSense::GreaterEqual;
      row.rhs = 0.0;
      for (int l = 0; l < r.size(); ++l)
        if (r[l] != 0.0) row.terms.emplace_back(cols.pi_begin[static_cast<std::size_t>(j)] + l, r[l]);
      lp.add_row(row);
    }
  }

  // Cap row keeping the dual problem bounded before any cuts exist.
  {
    SparseRow cap;
    cap.sense = RowSense::LessEqual;
    cap.rhs = zbar;
    for (int j = 0; j < model.num_blocks(); ++j) cap.terms.emplace_back(cols.theta_begin + j, 1.0);
    for (int r = 0; r < model.num_linking(); ++r)
      cap.terms.emplace_back(cols.beta_begin + r, model.linking[static_cast<std::size_t>(r)].rhs);
    lp.add_row(cap);
  }

  // Zero-reduced-cost equalities.
  for (int i = 0; i < model.n; ++i) {
    SparseRow row;
    row.sense = RowSense::Equal;
    row.rhs = model.objective[static_cast<std::size_t>(i)];
    for (int j = 0; j < model.num_blocks(); ++j) {
      const int l = model.blocks[static_cast<std::size_t>(j)].local_of(i);
      if (l >= 0) row.terms.emplace_back(cols.pi_begin[static_cast<std::size_t>(j)] + l, 1.0);
    }
    for (int r = 0; r < model.num_linking(); ++r) {
      for (const auto& [idx, coef] : model.linking[static_cast<std::size_t>(r)].terms)
        if (idx == i && coef != 0.0) row.terms.emplace_back(cols.beta_begin + r, coef);
    }
    lp.add_row(row);
  }
  return lp;
}

DualPoint unpack_dual(const BlockStructuredMip& model, const MasterColumns& cols,
                      const Eigen::VectorXd& z) {
  DualPoint dual;
  dual.pi.resize(static_cast<std::size_t>(model.num_blocks()));
  for (int j = 0; j < model.num_blocks(); ++j) {
    const int size = model.blocks[static_cast<std::size_t>(j)].size();
    dual.pi[static_cast<std::size_t>(j)] =
        z.segment(cols.pi_begin[static_cast<std::size_t>(j)], size);
  }
  dual.beta = z.segment(cols.beta_begin, model.num_linking()).cwiseMax(0.0);
  return dual;
}

struct SweepOutcome {
  double value = 0.0;
  bool finite = true;
};

// Evaluates z(pi, beta) at the candidate and feeds the pool.
SweepOutcome oracle_sweep(const BlockStructuredMip& model, const DualPoint& dual,
                          ColumnPool& pool, Eigen::VectorXd* block_values) {
  SweepOutcome out;
  for (int r = 0; r < model.num_linking(); ++r)
    out.value += model.linking[static_cast<std::size_t>(r)].rhs * dual.beta[r];
  for (int j = 0; j < model.num_blocks(); ++j) {
    const OracleResult priced = minimize_over_block(model, model.blocks[static_cast<std::size_t>(j)],
                                                    dual.pi[static_cast<std::size_t>(j)]);
    if (priced.status == OracleStatus::Unbounded) {
      pool.add_ray(j, priced.ray);
      out.finite = false;
      continue;
    }
    if (priced.status == OracleStatus::Infeasible)
      throw Error("block " + std::to_string(j) + " is infeasible (Q^j empty)");
    pool.add_point(j, priced.argmin);
    if (block_values) (*block_values)[j] = priced.value;
    out.value += priced.value;
  }
  return out;
}

void retain_dual(DualResult& result, double value, const DualPoint& dual, int top_k) {
  result.retained.emplace_back(value, dual);
  std::sort(result.retained.begin(), result.retained.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  if (static_cast<int>(result.retained.size()) > top_k)
    result.retained.resize(static_cast<std::size_t>(top_k));
}

DualResult solve_dual(const BlockStructuredMip& model, const DualSolveOptions& options,
                      bool use_level) {
  const auto t0 = Clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  const MasterColumns cols = layout_of(model);
  const double zbar =
      options.upper_bound_init ? *options.upper_bound_init : default_dual_upper_bound(model);

  ColumnPool pool(model.num_blocks());
  DualResult result;
  Eigen::VectorXd anchor;  // full master-column vector of the last candidate

  Eigen::VectorXd weights = Eigen::VectorXd::Zero(cols.total);
  weights.head(cols.theta_begin).setOnes();  // pi and beta carry weight, theta rides

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    result.iterations = iter;
    const LpProblem master = build_dual_master(model, pool, cols, zbar);
    const LpSolution sol = solve_lp(master);
    if (sol.status == LpStatus::Infeasible)
      throw Error("Wolfe dual system is infeasible for this model");
    if (sol.status != LpStatus::Optimal)
      throw NumericalFailure("cutting-plane master did not solve to optimality");
    result.ub = -sol.objective;

    DualPoint candidate;
    if (!std::isfinite(result.lb) || !use_level) {
      candidate = unpack_dual(model, cols, sol.x);
      anchor = sol.x;
    } else {
      const double level =
          options.level_upper_weight * result.ub + (1.0 - options.level_upper_weight) * result.lb;
      LpProblem qp_model = master;
      SparseRow level_row;
      level_row.sense = RowSense::GreaterEqual;
      level_row.rhs = level;
      for (int j = 0; j < model.num_blocks(); ++j)
        level_row.terms.emplace_back(cols.theta_begin + j, 1.0);
      for (int r = 0; r < model.num_linking(); ++r)
        level_row.terms.emplace_back(cols.beta_begin + r,
                                     model.linking[static_cast<std::size_t>(r)].rhs);
      qp_model.add_row(level_row);
      QpResult projected;
      try {
        projected = project_onto_polyhedron(qp_model, anchor, weights);
      } catch (const NumericalFailure&) {
        result.status = DualStatus::QpFailure;
        return result;
      }
      if (projected.status != QpStatus::Optimal) {
        result.status = DualStatus::QpFailure;
        return result;
      }
      anchor = projected.x;
      candidate = unpack_dual(model, cols, anchor);
    }

    Eigen::VectorXd block_values = Eigen::VectorXd::Zero(model.num_blocks());
    const SweepOutcome sweep = oracle_sweep(model, candidate, pool, &block_values);
    if (sweep.finite) {
      retain_dual(result, sweep.value, candidate, options.retain_top_k);
      if (sweep.value > result.lb) {
        result.lb = sweep.value;
        candidate.theta = block_values;
        result.best_dual = candidate;
      }
    }

    result.trace.push_back({iter, result.lb, result.ub, seconds()});
    if (std::isfinite(result.lb) &&
        result.ub - result.lb <= options.rel_tol * (1.0 + std::abs(result.ub))) {
      result.status = DualStatus::Converged;
      return result;
    }
  }
  result.status = DualStatus::IterationLimit;
  return result;
}

}  // namespace

double evaluate_dual(const BlockStructuredMip& model, const DualPoint& dual) {
  if (static_cast<int>(dual.pi.size()) != model.num_blocks())
    throw DimensionError("evaluate_dual: pi has wrong block count");
  for (int j = 0; j < model.num_blocks(); ++j)
    if (dual.pi[static_cast<std::size_t>(j)].size() != model.blocks[static_cast<std::size_t>(j)].size())
      throw DimensionError("evaluate_dual: pi^" + std::to_string(j) + " has wrong length");
  if (dual.beta.size() != model.num_linking())
    throw DimensionError("evaluate_dual: beta has wrong length");

  for (int r = 0; r < model.num_linking(); ++r)
    if (dual.beta[r] < -1e-9)
      throw DualInfeasibleError("beta[" + std::to_string(r) + "] is negative");
  for (int i = 0; i < model.n; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < model.num_blocks(); ++j) {
      const int l = model.blocks[static_cast<std::size_t>(j)].local_of(i);
      if (l >= 0) lhs += dual.pi[static_cast<std::size_t>(j)][l];
    }
    for (int r = 0; r < model.num_linking(); ++r)
      for (const auto& [idx, coef] : model.linking[static_cast<std::size_t>(r)].terms)
        if (idx == i) lhs += coef * dual.beta[r];
    if (std::abs(lhs - model.objective[static_cast<std::size_t>(i)]) > 1e-7)
      throw DualInfeasibleError("zero-reduced-cost equality violated at variable " +
                                std::to_string(i));
  }

  double value = 0.0;
  for (int r = 0; r < model.num_linking(); ++r)
    value += model.linking[static_cast<std::size_t>(r)].rhs * dual.beta[r];
  for (int j = 0; j < model.num_blocks(); ++j) {
    const OracleResult priced = minimize_over_block(model, model.blocks[static_cast<std::size_t>(j)],
                                                    dual.pi[static_cast<std::size_t>(j)]);
    if (priced.status == OracleStatus::Unbounded) return -kInfinity;
    if (priced.status == OracleStatus::Infeasible)
      throw Error("block " + std::to_string(j) + " is infeasible (Q^j empty)");
    value += priced.value;
  }
  return value;
}

double default_dual_upper_bound(const BlockStructuredMip& model) {
  double c_norm = 0.0;
  for (double c : model.objective) c_norm = std::max(c_norm, std::abs(c));
  const double big_m = 1e7 * (1.0 + c_norm);

  LpSolution lp;
  try {
    lp = solve_lp(natural_lp_relaxation(model));
  } catch (const NumericalFailure&) {
    return big_m;
  }
  if (lp.status != LpStatus::Optimal) return big_m;

  // Greedy roundings of the LP point (nearest, floor, ceiling), plus the
  // all-lower-bounds point when it exists.
  double best = big_m;
  for (int mode = 0; mode < 4; ++mode) {
    std::vector<double> x(static_cast<std::size_t>(model.n));
    bool usable = true;
    for (int i = 0; i < model.n; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      double v = 0.0;
      if (mode == 3) {
        if (!std::isfinite(model.lower[iu])) {
          usable = false;
          break;
        }
        v = model.lower[iu];
      } else {
        v = lp.x[i];
        if (model.integrality[iu]) {
          const double lo = std::ceil(model.lower[iu] - kIntTol);
          const double hi = std::floor(model.upper[iu] + kIntTol);
          if (lo > hi) {
            usable = false;
            break;
          }
          v = mode == 0 ? std::round(v) : mode == 1 ? std::floor(v) : std::ceil(v);
          v = std::clamp(v, lo, hi);
        }
      }
      x[iu] = v;
    }
    if (!usable) continue;
    const SolutionReport report = evaluate_solution(model, x);
    if (report.feasible) best = std::min(best, report.objective);
  }
  return best;
}

DualResult solve_dual_level(const BlockStructuredMip& model, const DualSolveOptions& options) {
  return solve_dual(model, options, /*use_level=*/true);
}

DualResult solve_dual_kelley(const BlockStructuredMip& model, const DualSolveOptions& options) {
  return solve_dual(model, options, /*use_level=*/false);
}

void write_dual_trace_csv(const DualResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "iteration,lower,upper,seconds\n";
  for (const auto& p : result.trace)
    out << p.iteration << ',' << p.lower << ',' << p.upper << ',' << p.seconds << '\n';
}

}  // namespace dwcuts
