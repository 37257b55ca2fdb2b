// SPDX-License-Identifier: Apache-2.0

#include "dwcuts/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace dwcuts {

DegeneracyReport degeneracy_level(const Eigen::VectorXd& w, int n, double zero_tol) {
  DegeneracyReport report;
  report.n = n;
  for (long k = 0; k < w.size(); ++k)
    if (std::abs(w[k]) > zero_tol) ++report.support;
  report.level = n - report.support;
  report.relative = n > 0 ? 1.0 - static_cast<double>(report.support) / n : 0.0;
  return report;
}

Eigen::VectorXd inequality_duals(const LpProblem& lp, const LpSolution& sol) {
  std::vector<double> duals;
  for (int i = 0; i < lp.num_rows(); ++i) duals.push_back(sol.row_duals[i]);
  for (int j = 0; j < lp.num_cols(); ++j) {
    const auto& col = lp.cols[static_cast<std::size_t>(j)];
    const double d = sol.reduced_costs[j];
    if (std::isfinite(col.lower)) duals.push_back(std::max(d, 0.0));
    if (std::isfinite(col.upper)) duals.push_back(std::max(-d, 0.0));
  }
  return Eigen::Map<Eigen::VectorXd>(duals.data(), static_cast<long>(duals.size()));
}

GapReport gap_report(double z_d, double z_l, std::optional<double> z_r) {
  if (std::abs(z_d) < 1e-12) throw ZeroDenominatorError("gap_report: z_D is zero");
  GapReport report;
  report.z_d = z_d;
  report.z_l = z_l;
  report.z_r = z_r;
  report.r_l = (z_d - z_l) / std::abs(z_d);
  if (z_r) report.r_r = (z_d - *z_r) / std::abs(z_d);
  return report;
}

namespace {

struct ConstraintList {
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> offsets;
  std::vector<RowSense> senses;  // GreaterEqual or Equal (LessEqual negated)
};

ConstraintList collect_constraints(const LpProblem& lp) {
  const int n = lp.num_cols();
  ConstraintList out;
  auto push = [&](const Eigen::VectorXd& a, double b, RowSense sense) {
    out.normals.push_back(a);
    out.offsets.push_back(b);
    out.senses.push_back(sense);
  };
  for (const auto& row : lp.rows) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (const auto& [idx, coef] : row.terms) a[idx] += coef;
    if (row.sense == RowSense::LessEqual)
      push(-a, -row.rhs, RowSense::GreaterEqual);
    else
      push(a, row.rhs, row.sense);
  }
  for (int j = 0; j < n; ++j) {
    const auto& col = lp.cols[static_cast<std::size_t>(j)];
    if (std::isfinite(col.lower)) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      a[j] = 1.0;
      push(a, col.lower, RowSense::GreaterEqual);
    }
    if (std::isfinite(col.upper)) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      a[j] = -1.0;
      push(a, -col.upper, RowSense::GreaterEqual);
    }
  }
  return out;
}

bool constraints_satisfied(const ConstraintList& cons, const Eigen::VectorXd& x, double tol) {
  for (std::size_t k = 0; k < cons.normals.size(); ++k) {
    const double slack = cons.normals[k].dot(x) - cons.offsets[k];
    if (cons.senses[k] == RowSense::Equal ? std::abs(slack) > tol : slack < -tol) return false;
  }
  return true;
}

std::vector<Eigen::VectorXd> enumerate_basic_points(const LpProblem& lp, int max_vars) {
  const int n = lp.num_cols();
  if (n > max_vars)
    throw SizeLimitError("face enumeration supports at most " + std::to_string(max_vars) +
                         " variables");
  const ConstraintList cons = collect_constraints(lp);
  const int total = static_cast<int>(cons.normals.size());
  std::vector<Eigen::VectorXd> points;
  if (n == 0) return points;
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::function<void(int, int)> choose = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd M(n, n);
      Eigen::VectorXd rhs(n);
      for (int r = 0; r < n; ++r) {
        M.row(r) = cons.normals[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])];
        rhs[r] = cons.offsets[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      lu.setThreshold(1e-10);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd x = lu.solve(rhs);
      if (!constraints_satisfied(cons, x, 1e-7)) return;
      for (const auto& seen : points)
        if ((seen - x).lpNorm<Eigen::Infinity>() < 1e-7) return;
      points.push_back(x);
      return;
    }
    for (int c = start; c < total; ++c) {
      pick[static_cast<std::size_t>(depth)] = c;
      choose(c + 1, depth + 1);
    }
  };
  choose(0, 0);
  return points;
}

int affine_dim_with_directions(const std::vector<Eigen::VectorXd>& points,
                               const std::vector<Eigen::VectorXd>& directions) {
  if (points.empty()) return -1;
  const long n = points.front().size();
  Eigen::MatrixXd span(static_cast<long>(points.size() - 1 + directions.size()), n);
  long r = 0;
  for (std::size_t k = 1; k < points.size(); ++k) span.row(r++) = (points[k] - points[0]).transpose();
  for (const auto& d : directions) span.row(r++) = d.transpose();
  if (span.rows() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(span);
  qr.setThreshold(1e-7);
  return static_cast<int>(qr.rank());
}

bool all_bounds_finite(const LpProblem& lp) {
  for (const auto& col : lp.cols)
    if (!std::isfinite(col.lower) || !std::isfinite(col.upper)) return false;
  return true;
}

// Span of the recession cone of the optimal face, computed as the vertex
// set of the cone clipped to the unit box.
std::vector<Eigen::VectorXd> face_recession_directions(const LpProblem& lp, int max_vars) {
  LpProblem cone;
  for (int j = 0; j < lp.num_cols(); ++j) {
    const auto& col = lp.cols[static_cast<std::size_t>(j)];
    const double lo = std::isfinite(col.lower) ? 0.0 : -1.0;
    const double hi = std::isfinite(col.upper) ? 0.0 : 1.0;
    cone.add_col(0.0, lo, hi);
  }
  for (const auto& row : lp.rows) {
    SparseRow hom = row;
    hom.rhs = 0.0;
    cone.add_row(hom);
  }
  SparseRow level;
  level.sense = RowSense::Equal;
  level.rhs = 0.0;
  for (int j = 0; j < lp.num_cols(); ++j)
    if (lp.cols[static_cast<std::size_t>(j)].objective != 0.0)
      level.terms.emplace_back(j, lp.cols[static_cast<std::size_t>(j)].objective);
  cone.add_row(level);

  std::vector<Eigen::VectorXd> dirs;
  for (const auto& v : enumerate_basic_points(cone, max_vars))
    if (v.lpNorm<Eigen::Infinity>() > 1e-9) dirs.push_back(v);
  return dirs;
}

}  // namespace

int optimal_face_dim(const LpProblem& lp, int max_vars) {
  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible) throw Error("optimal_face_dim: LP is infeasible");
  if (sol.status == LpStatus::Unbounded) throw Error("optimal_face_dim: LP is unbounded");

  const auto points = enumerate_basic_points(lp, max_vars);
  const double vstar = sol.objective;
  std::vector<Eigen::VectorXd> optimal;
  for (const auto& x : points) {
    double obj = 0.0;
    for (int j = 0; j < lp.num_cols(); ++j) obj += lp.cols[static_cast<std::size_t>(j)].objective * x[j];
    if (obj <= vstar + 1e-7 * (1.0 + std::abs(vstar))) optimal.push_back(x);
  }
  if (optimal.empty())
    throw NumericalFailure("optimal_face_dim: no enumerated point attains the optimum");

  std::vector<Eigen::VectorXd> dirs;
  if (!all_bounds_finite(lp)) dirs = face_recession_directions(lp, max_vars);
  return affine_dim_with_directions(optimal, dirs);
}

int polyhedron_dim(const LpProblem& lp, int max_vars) {
  LpProblem flat = lp;
  for (auto& col : flat.cols) col.objective = 0.0;
  return optimal_face_dim(flat, max_vars);
}

bool check_prop2_slice(const LpProblem& lp, double v) {
  LpProblem lo = lp;
  const LpSolution min_sol = solve_lp(lo);
  if (min_sol.status == LpStatus::Infeasible) throw Error("check_prop2_slice: LP infeasible");
  if (min_sol.status == LpStatus::Optimal && min_sol.objective >= v - 1e-9)
    throw PreconditionViolated("c'x >= v is valid for the polyhedron");

  LpProblem hi = lp;
  for (auto& col : hi.cols) col.objective = -col.objective;
  const LpSolution max_sol = solve_lp(hi);
  if (max_sol.status == LpStatus::Optimal && -max_sol.objective <= v + 1e-9)
    throw PreconditionViolated("c'x <= v is valid for the polyhedron");

  const int dim_p = polyhedron_dim(lp);

  LpProblem sliced = lp;
  SparseRow slice;
  slice.sense = RowSense::Equal;
  slice.rhs = v;
  for (int j = 0; j < lp.num_cols(); ++j)
    if (lp.cols[static_cast<std::size_t>(j)].objective != 0.0)
      slice.terms.emplace_back(j, lp.cols[static_cast<std::size_t>(j)].objective);
  sliced.add_row(slice);
  const int dim_slice = polyhedron_dim(sliced);

  return dim_slice == dim_p - 1;
}

}  // namespace dwcuts
