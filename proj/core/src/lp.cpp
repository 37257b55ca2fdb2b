// SPDX-License-Identifier: Apache-2.0

#include "dwcuts/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dwcuts {
namespace {

enum class VarStatus : unsigned char { Basic, AtLower, AtUpper, FreeAtZero };

// Working tableau over the augmented system [A | -I](x, s) = 0 with row
// right-hand sides folded into slack bounds. Phase-1 artificials are
// appended as extra columns.
struct Workspace {
  int n = 0;      // structural columns
  int m = 0;      // rows
  int total = 0;  // structural + slack + artificial columns
  Eigen::MatrixXd A;
  Eigen::VectorXd lower, upper;
  Eigen::VectorXd cost;
  Eigen::VectorXd z;  // current value of every column
  std::vector<VarStatus> status;
  std::vector<int> basic;  // column basic in each row position
  Eigen::MatrixXd binv;
  Eigen::VectorXd y;  // binv' * c_B
  int iterations = 0;
  bool bland = false;
  int degenerate_run = 0;
  // Set when a phase ends Unbounded.
  int unbounded_entering = -1;
  double unbounded_dir = 0.0;

  bool is_fixed(int j) const { return upper[j] - lower[j] < 1e-14; }

  double bound_value(int j) const {
    switch (status[static_cast<std::size_t>(j)]) {
      case VarStatus::AtLower:
        return lower[j];
      case VarStatus::AtUpper:
        return upper[j];
      case VarStatus::FreeAtZero:
        return 0.0;
      case VarStatus::Basic:
        return z[j];
    }
    return 0.0;
  }

  void refresh_basis() {
    Eigen::MatrixXd B(m, m);
    for (int k = 0; k < m; ++k) B.col(k) = A.col(basic[static_cast<std::size_t>(k)]);
    binv = B.partialPivLu().inverse();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < total; ++j) {
      if (status[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
      const double v = bound_value(j);
      z[j] = v;
      if (v != 0.0) rhs -= A.col(j) * v;
    }
    const Eigen::VectorXd xb = binv * rhs;
    for (int k = 0; k < m; ++k) z[basic[static_cast<std::size_t>(k)]] = xb[k];
    Eigen::VectorXd cb(m);
    for (int k = 0; k < m; ++k) cb[k] = cost[basic[static_cast<std::size_t>(k)]];
    y = binv.transpose() * cb;
  }

  double reduced_cost(int j) const { return cost[j] - y.dot(A.col(j)); }

  // Violation of the optimality condition for a nonbasic column, 0 if none.
  double pricing_violation(int j, double cost_tol) const {
    const VarStatus st = status[static_cast<std::size_t>(j)];
    if (st == VarStatus::Basic || is_fixed(j)) return 0.0;
    const double d = reduced_cost(j);
    if (st == VarStatus::AtLower && d < -cost_tol) return -d;
    if (st == VarStatus::AtUpper && d > cost_tol) return d;
    if (st == VarStatus::FreeAtZero && std::abs(d) > cost_tol) return std::abs(d);
    return 0.0;
  }
};

enum class PhaseOutcome { Optimal, Unbounded, IterLimit };

PhaseOutcome run_simplex(Workspace& ws, const SimplexOptions& opt, bool phase_one) {
  while (true) {
    if (ws.iterations >= opt.max_iter) return PhaseOutcome::IterLimit;
    ws.refresh_basis();

    int entering = -1;
    double best_violation = 0.0;
    for (int j = 0; j < ws.total; ++j) {
      const double violation = ws.pricing_violation(j, opt.cost_tol);
      if (violation <= 0.0) continue;
      if (ws.bland) {
        entering = j;
        break;
      }
      if (violation > best_violation) {
        best_violation = violation;
        entering = j;
      }
    }
    if (entering < 0) return PhaseOutcome::Optimal;

    const double d_e = ws.reduced_cost(entering);
    const VarStatus st_e = ws.status[static_cast<std::size_t>(entering)];
    const double dir = st_e == VarStatus::AtLower  ? 1.0
                       : st_e == VarStatus::AtUpper ? -1.0
                                                    : (d_e < 0.0 ? 1.0 : -1.0);

    const Eigen::VectorXd w = ws.binv * ws.A.col(entering);

    // Ratio test: basics move as x_B(t) = x_B - dir * t * w, t >= 0.
    double step = kInfinity;
    if (std::isfinite(ws.lower[entering]) && std::isfinite(ws.upper[entering]))
      step = ws.upper[entering] - ws.lower[entering];
    int leave_pos = -1;  // -1 means bound flip of the entering column
    bool leave_to_upper = false;
    double best_pivot_mag = 0.0;
    for (int k = 0; k < ws.m; ++k) {
      const int col = ws.basic[static_cast<std::size_t>(k)];
      const double rate = dir * w[k];  // positive: basic value decreases
      double limit = kInfinity;
      bool to_upper = false;
      if (rate > opt.pivot_tol) {
        if (std::isfinite(ws.lower[col])) limit = std::max(0.0, (ws.z[col] - ws.lower[col]) / rate);
      } else if (rate < -opt.pivot_tol) {
        if (std::isfinite(ws.upper[col])) {
          limit = std::max(0.0, (ws.upper[col] - ws.z[col]) / (-rate));
          to_upper = true;
        }
      }
      if (!std::isfinite(limit)) continue;
      bool take = false;
      if (limit < step - 1e-12) {
        take = true;
      } else if (limit <= step + 1e-12 && leave_pos >= 0) {
        // Tie between blocking basics: Bland picks the smallest column
        // index, the default rule the largest pivot magnitude.
        take = ws.bland ? col < ws.basic[static_cast<std::size_t>(leave_pos)]
                        : std::abs(w[k]) > best_pivot_mag;
      }
      if (take) {
        step = std::min(step, limit);
        leave_pos = k;
        leave_to_upper = to_upper;
        best_pivot_mag = std::abs(w[k]);
      }
    }

    if (!std::isfinite(step)) {
      if (phase_one) throw NumericalFailure("phase-1 objective unbounded");
      ws.unbounded_entering = entering;
      ws.unbounded_dir = dir;
      return PhaseOutcome::Unbounded;
    }

    ++ws.iterations;
    if (step < 1e-11) {
      if (++ws.degenerate_run >= opt.degenerate_streak) ws.bland = true;
    } else {
      ws.degenerate_run = 0;
      ws.bland = false;
    }

    if (leave_pos < 0) {
      ws.status[static_cast<std::size_t>(entering)] =
          dir > 0.0 ? VarStatus::AtUpper : VarStatus::AtLower;
      continue;
    }

    const int leaving = ws.basic[static_cast<std::size_t>(leave_pos)];
    ws.basic[static_cast<std::size_t>(leave_pos)] = entering;
    ws.z[entering] = ws.bound_value(entering) + dir * step;
    ws.status[static_cast<std::size_t>(entering)] = VarStatus::Basic;
    ws.status[static_cast<std::size_t>(leaving)] =
        leave_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
  }
}

LpSolution minimize_over_bounds_only(const LpProblem& lp) {
  const int n = lp.num_cols();
  LpSolution sol;
  sol.x = Eigen::VectorXd::Zero(n);
  sol.reduced_costs = Eigen::VectorXd::Zero(n);
  sol.row_duals = Eigen::VectorXd::Zero(0);
  sol.col_basic.assign(static_cast<std::size_t>(n), false);
  for (int j = 0; j < n; ++j) {
    const auto& col = lp.cols[static_cast<std::size_t>(j)];
    sol.reduced_costs[j] = col.objective;
    if (col.objective > 0.0) {
      if (!std::isfinite(col.lower)) {
        sol.status = LpStatus::Unbounded;
        sol.ray = Eigen::VectorXd::Zero(n);
        sol.ray[j] = -1.0;
        return sol;
      }
      sol.x[j] = col.lower;
    } else if (col.objective < 0.0) {
      if (!std::isfinite(col.upper)) {
        sol.status = LpStatus::Unbounded;
        sol.ray = Eigen::VectorXd::Zero(n);
        sol.ray[j] = 1.0;
        return sol;
      }
      sol.x[j] = col.upper;
    } else {
      sol.x[j] = std::isfinite(col.lower) ? col.lower : (std::isfinite(col.upper) ? col.upper : 0.0);
    }
    sol.objective += col.objective * sol.x[j];
  }
  sol.status = LpStatus::Optimal;
  return sol;
}

}  // namespace

double lp_infeasibility(const LpProblem& lp, const Eigen::VectorXd& x) {
  double worst = 0.0;
  std::vector<double> xv(x.data(), x.data() + x.size());
  for (const auto& row : lp.rows) worst = std::max(worst, row.violation(xv));
  for (int j = 0; j < lp.num_cols(); ++j) {
    worst = std::max(worst, lp.cols[static_cast<std::size_t>(j)].lower - x[j]);
    worst = std::max(worst, x[j] - lp.cols[static_cast<std::size_t>(j)].upper);
  }
  return worst;
}

LpSolution solve_lp(const LpProblem& lp, const SimplexOptions& options) {
  const int n = lp.num_cols();
  const int m = lp.num_rows();
  for (const auto& col : lp.cols) {
    if (col.lower > col.upper) {
      LpSolution sol;
      sol.status = LpStatus::Infeasible;
      return sol;
    }
  }
  if (m == 0) return minimize_over_bounds_only(lp);

  Workspace ws;
  ws.n = n;
  ws.m = m;

  std::vector<double> lo(static_cast<std::size_t>(n + m)), hi(static_cast<std::size_t>(n + m));
  for (int j = 0; j < n; ++j) {
    lo[static_cast<std::size_t>(j)] = lp.cols[static_cast<std::size_t>(j)].lower;
    hi[static_cast<std::size_t>(j)] = lp.cols[static_cast<std::size_t>(j)].upper;
  }
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[static_cast<std::size_t>(i)];
    double l = -kInfinity, u = kInfinity;
    switch (row.sense) {
      case RowSense::GreaterEqual:
        l = row.rhs;
        break;
      case RowSense::LessEqual:
        u = row.rhs;
        break;
      case RowSense::Equal:
        l = u = row.rhs;
        break;
    }
    lo[static_cast<std::size_t>(n + i)] = l;
    hi[static_cast<std::size_t>(n + i)] = u;
  }

  // Nonbasic start: every structural column at its finite bound nearest
  // zero, free columns at zero.
  std::vector<VarStatus> start(static_cast<std::size_t>(n));
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const double l = lo[static_cast<std::size_t>(j)], u = hi[static_cast<std::size_t>(j)];
    if (std::isfinite(l) && std::isfinite(u)) {
      const bool pick_lower = std::abs(l) <= std::abs(u);
      start[static_cast<std::size_t>(j)] = pick_lower ? VarStatus::AtLower : VarStatus::AtUpper;
      x0[j] = pick_lower ? l : u;
    } else if (std::isfinite(l)) {
      start[static_cast<std::size_t>(j)] = VarStatus::AtLower;
      x0[j] = l;
    } else if (std::isfinite(u)) {
      start[static_cast<std::size_t>(j)] = VarStatus::AtUpper;
      x0[j] = u;
    } else {
      start[static_cast<std::size_t>(j)] = VarStatus::FreeAtZero;
      x0[j] = 0.0;
    }
  }

  Eigen::VectorXd activity = Eigen::VectorXd::Zero(m);
  {
    std::vector<double> xv(x0.data(), x0.data() + n);
    for (int i = 0; i < m; ++i) activity[i] = lp.rows[static_cast<std::size_t>(i)].activity(xv);
  }

  std::vector<int> artificial_row;
  std::vector<double> artificial_sign;
  std::vector<double> slack_start(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double l = lo[static_cast<std::size_t>(n + i)], u = hi[static_cast<std::size_t>(n + i)];
    const double s = std::clamp(activity[i], l, u);
    slack_start[static_cast<std::size_t>(i)] = s;
    if (std::abs(activity[i] - s) > 1e-11) {
      artificial_row.push_back(i);
      artificial_sign.push_back(activity[i] - s > 0.0 ? 1.0 : -1.0);
    }
  }
  const int p = static_cast<int>(artificial_row.size());
  ws.total = n + m + p;

  ws.A = Eigen::MatrixXd::Zero(m, ws.total);
  for (int i = 0; i < m; ++i) {
    for (const auto& [idx, coef] : lp.rows[static_cast<std::size_t>(i)].terms) ws.A(i, idx) += coef;
    ws.A(i, n + i) = -1.0;
  }
  for (int a = 0; a < p; ++a)
    ws.A(artificial_row[static_cast<std::size_t>(a)], n + m + a) = -artificial_sign[static_cast<std::size_t>(a)];

  ws.lower = Eigen::VectorXd::Zero(ws.total);
  ws.upper = Eigen::VectorXd::Constant(ws.total, kInfinity);
  for (int j = 0; j < n + m; ++j) {
    ws.lower[j] = lo[static_cast<std::size_t>(j)];
    ws.upper[j] = hi[static_cast<std::size_t>(j)];
  }

  ws.z = Eigen::VectorXd::Zero(ws.total);
  ws.status.assign(static_cast<std::size_t>(ws.total), VarStatus::AtLower);
  for (int j = 0; j < n; ++j) {
    ws.status[static_cast<std::size_t>(j)] = start[static_cast<std::size_t>(j)];
    ws.z[j] = x0[j];
  }

  ws.basic.assign(static_cast<std::size_t>(m), -1);
  std::vector<bool> row_has_artificial(static_cast<std::size_t>(m), false);
  for (int a = 0; a < p; ++a) {
    const int i = artificial_row[static_cast<std::size_t>(a)];
    row_has_artificial[static_cast<std::size_t>(i)] = true;
    ws.basic[static_cast<std::size_t>(i)] = n + m + a;
    ws.status[static_cast<std::size_t>(n + m + a)] = VarStatus::Basic;
    ws.z[n + m + a] = std::abs(activity[i] - slack_start[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < m; ++i) {
    const int s = n + i;
    const double sv = slack_start[static_cast<std::size_t>(i)];
    if (row_has_artificial[static_cast<std::size_t>(i)]) {
      if (std::isfinite(ws.lower[s]) && std::abs(sv - ws.lower[s]) < 1e-12)
        ws.status[static_cast<std::size_t>(s)] = VarStatus::AtLower;
      else if (std::isfinite(ws.upper[s]))
        ws.status[static_cast<std::size_t>(s)] = VarStatus::AtUpper;
      else
        ws.status[static_cast<std::size_t>(s)] = VarStatus::AtLower;
    } else {
      ws.basic[static_cast<std::size_t>(i)] = s;
      ws.status[static_cast<std::size_t>(s)] = VarStatus::Basic;
    }
    ws.z[s] = sv;
  }

  LpSolution sol;

  if (p > 0) {
    ws.cost = Eigen::VectorXd::Zero(ws.total);
    for (int a = 0; a < p; ++a) ws.cost[n + m + a] = 1.0;
    const PhaseOutcome out = run_simplex(ws, options, /*phase_one=*/true);
    if (out == PhaseOutcome::IterLimit)
      throw NumericalFailure("simplex iteration limit exhausted in phase 1");
    ws.refresh_basis();
    double infeas = 0.0;
    for (int a = 0; a < p; ++a) infeas += std::abs(ws.z[n + m + a]);
    if (infeas > 1e-7) {
      sol.status = LpStatus::Infeasible;
      sol.iterations = ws.iterations;
      return sol;
    }
    for (int a = 0; a < p; ++a) {
      ws.lower[n + m + a] = 0.0;
      ws.upper[n + m + a] = 0.0;
    }
    // Pivot out artificials stuck basic at zero; a row where none of the
    // real columns can replace them is redundant and keeps its artificial.
    for (int k = 0; k < m; ++k) {
      const int col = ws.basic[static_cast<std::size_t>(k)];
      if (col < n + m) continue;
      int replacement = -1;
      for (int j = 0; j < n + m; ++j) {
        if (ws.status[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
        if (std::abs(ws.binv.row(k).dot(ws.A.col(j))) > 1e-7) {
          replacement = j;
          break;
        }
      }
      if (replacement >= 0) {
        ws.basic[static_cast<std::size_t>(k)] = replacement;
        ws.status[static_cast<std::size_t>(replacement)] = VarStatus::Basic;
        ws.status[static_cast<std::size_t>(col)] = VarStatus::AtLower;
        ws.refresh_basis();
      }
    }
  }

  ws.cost = Eigen::VectorXd::Zero(ws.total);
  for (int j = 0; j < n; ++j) ws.cost[j] = lp.cols[static_cast<std::size_t>(j)].objective;
  ws.bland = false;
  ws.degenerate_run = 0;
  const PhaseOutcome out = run_simplex(ws, options, /*phase_one=*/false);
  if (out == PhaseOutcome::IterLimit)
    throw NumericalFailure("simplex iteration limit exhausted in phase 2");
  ws.refresh_basis();

  sol.iterations = ws.iterations;
  sol.x = ws.z.head(n);
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += lp.cols[static_cast<std::size_t>(j)].objective * sol.x[j];
  sol.col_basic.assign(static_cast<std::size_t>(n), false);
  sol.row_basic.assign(static_cast<std::size_t>(m), false);
  for (int k = 0; k < m; ++k) {
    const int col = ws.basic[static_cast<std::size_t>(k)];
    if (col < n)
      sol.col_basic[static_cast<std::size_t>(col)] = true;
    else if (col < n + m)
      sol.row_basic[static_cast<std::size_t>(col - n)] = true;
  }
  sol.row_duals = ws.y;
  sol.reduced_costs = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) sol.reduced_costs[j] = ws.reduced_cost(j);
  sol.max_primal_violation = lp_infeasibility(lp, sol.x);

  if (out == PhaseOutcome::Unbounded) {
    sol.status = LpStatus::Unbounded;
    sol.ray = Eigen::VectorXd::Zero(n);
    const int e = ws.unbounded_entering;
    const double dir = ws.unbounded_dir;
    if (e >= 0) {
      const Eigen::VectorXd w = ws.binv * ws.A.col(e);
      if (e < n) sol.ray[e] = dir;
      for (int k = 0; k < m; ++k) {
        const int col = ws.basic[static_cast<std::size_t>(k)];
        if (col < n) sol.ray[col] = -dir * w[k];
      }
    }
    return sol;
  }

  sol.status = LpStatus::Optimal;
  return sol;
}

}  // namespace dwcuts
