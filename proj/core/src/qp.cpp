// SPDX-License-Identifier: Apache-2.0

#include "dwcuts/qp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dwcuts {
namespace {

struct DenseConstraints {
  // Equalities first (always active), then inequalities a'x >= b.
  Eigen::MatrixXd eq_a;
  Eigen::VectorXd eq_b;
  Eigen::MatrixXd in_a;
  Eigen::VectorXd in_b;
};

DenseConstraints densify(const LpProblem& lp) {
  const int n = lp.num_cols();
  std::vector<Eigen::VectorXd> eqs, ins;
  std::vector<double> eq_rhs, in_rhs;
  auto dense_row = [&](const SparseRow& row) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (const auto& [idx, coef] : row.terms) a[idx] += coef;
    return a;
  };
  for (const auto& row : lp.rows) {
    Eigen::VectorXd a = dense_row(row);
    switch (row.sense) {
      case RowSense::Equal:
        eqs.push_back(a);
        eq_rhs.push_back(row.rhs);
        break;
      case RowSense::GreaterEqual:
        ins.push_back(a);
        in_rhs.push_back(row.rhs);
        break;
      case RowSense::LessEqual:
        ins.push_back(-a);
        in_rhs.push_back(-row.rhs);
        break;
    }
  }
  for (int j = 0; j < n; ++j) {
    const auto& col = lp.cols[static_cast<std::size_t>(j)];
    if (std::isfinite(col.lower) && std::isfinite(col.upper) && col.upper - col.lower < 1e-14) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      a[j] = 1.0;
      eqs.push_back(a);
      eq_rhs.push_back(col.lower);
      continue;
    }
    if (std::isfinite(col.lower)) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      a[j] = 1.0;
      ins.push_back(a);
      in_rhs.push_back(col.lower);
    }
    if (std::isfinite(col.upper)) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      a[j] = -1.0;
      ins.push_back(a);
      in_rhs.push_back(-col.upper);
    }
  }
  DenseConstraints out;
  out.eq_a.resize(static_cast<long>(eqs.size()), n);
  out.eq_b.resize(static_cast<long>(eqs.size()));
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    out.eq_a.row(static_cast<long>(i)) = eqs[i].transpose();
    out.eq_b[static_cast<long>(i)] = eq_rhs[i];
  }
  out.in_a.resize(static_cast<long>(ins.size()), n);
  out.in_b.resize(static_cast<long>(ins.size()));
  for (std::size_t i = 0; i < ins.size(); ++i) {
    out.in_a.row(static_cast<long>(i)) = ins[i].transpose();
    out.in_b[static_cast<long>(i)] = in_rhs[i];
  }
  return out;
}

}  // namespace

QpResult project_onto_polyhedron(const LpProblem& constraints, const Eigen::VectorXd& anchor,
                                 const Eigen::VectorXd& weights, const QpOptions& options) {
  const int n = constraints.num_cols();
  if (anchor.size() != n || weights.size() != n)
    throw DimensionError("project_onto_polyhedron: anchor/weights size mismatch");

  const DenseConstraints cons = densify(constraints);
  const long n_eq = cons.eq_a.rows();
  const long n_in = cons.in_a.rows();

  auto feasible = [&](const Eigen::VectorXd& v, double tol) {
    if (n_eq > 0 && (cons.eq_a * v - cons.eq_b).lpNorm<Eigen::Infinity>() > tol) return false;
    if (n_in > 0 && (cons.in_a * v - cons.in_b).minCoeff() < -tol) return false;
    return true;
  };

  QpResult result;
  if (feasible(anchor, 1e-9)) {
    result.status = QpStatus::Optimal;
    result.x = anchor;
    return result;
  }

  // Phase 1 through the simplex: any feasible vertex will do.
  LpProblem phase1 = constraints;
  for (auto& col : phase1.cols) col.objective = 0.0;
  const LpSolution start = solve_lp(phase1);
  if (start.status == LpStatus::Infeasible) {
    result.status = QpStatus::Infeasible;
    return result;
  }
  Eigen::VectorXd x = start.x;

  const Eigen::VectorXd sqrt_w = weights.cwiseMax(0.0).cwiseSqrt();

  // Initial working set: tight inequalities at the vertex, pruned so the
  // stacked [equalities; working] matrix keeps full row rank. Constraints
  // added later always increase the rank, so only the seed needs pruning.
  std::vector<bool> active(static_cast<std::size_t>(n_in), false);
  if (n_in > 0) {
    const Eigen::VectorXd slack = cons.in_a * x - cons.in_b;
    Eigen::MatrixXd stacked(n_eq, n);
    if (n_eq > 0) stacked = cons.eq_a;
    long rank = 0;
    if (stacked.rows() > 0) {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked);
      qr.setThreshold(1e-10);
      rank = qr.rank();
    }
    for (long i = 0; i < n_in; ++i) {
      if (slack[i] > options.active_tol) continue;
      Eigen::MatrixXd grown(stacked.rows() + 1, n);
      if (stacked.rows() > 0) grown.topRows(stacked.rows()) = stacked;
      grown.row(stacked.rows()) = cons.in_a.row(i);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(grown);
      qr.setThreshold(1e-10);
      if (qr.rank() > rank) {
        active[static_cast<std::size_t>(i)] = true;
        stacked = grown;
        rank = qr.rank();
      }
    }
  }

  bool converged = false;
  while (result.iterations < options.max_iter) {
    ++result.iterations;
    std::vector<long> working;
    for (long i = 0; i < n_in; ++i)
      if (active[static_cast<std::size_t>(i)]) working.push_back(i);
    const long rows = n_eq + static_cast<long>(working.size());
    Eigen::MatrixXd W(rows, n);
    if (n_eq > 0) W.topRows(n_eq) = cons.eq_a;
    for (std::size_t k = 0; k < working.size(); ++k)
      W.row(n_eq + static_cast<long>(k)) = cons.in_a.row(working[k]);

    // Null-space step: p = Z q with W p = 0, minimizing the weighted
    // distance to the anchor; a plain least-squares problem in q.
    Eigen::MatrixXd Z;
    if (rows == 0) {
      Z = Eigen::MatrixXd::Identity(n, n);
    } else {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(W);
      lu.setThreshold(1e-10);
      Z = lu.kernel();
      if (lu.rank() == n || Z.cols() == 0) Z = Eigen::MatrixXd::Zero(n, 0);
    }

    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    if (Z.cols() > 0) {
      const Eigen::MatrixXd M = sqrt_w.asDiagonal() * Z;
      const Eigen::VectorXd r = sqrt_w.asDiagonal() * (x - anchor);
      const Eigen::VectorXd q = M.completeOrthogonalDecomposition().solve(-r);
      p = Z * q;
    }

    if (p.lpNorm<Eigen::Infinity>() > 1e-10) {
      double alpha = 1.0;
      long blocking = -1;
      for (long i = 0; i < n_in; ++i) {
        if (active[static_cast<std::size_t>(i)]) continue;
        const double rate = cons.in_a.row(i).dot(p);
        if (rate >= -1e-12) continue;
        const double slack = cons.in_a.row(i).dot(x) - cons.in_b[i];
        const double limit = std::max(0.0, slack / (-rate));
        if (limit < alpha - 1e-12) {
          alpha = limit;
          blocking = i;
        }
      }
      x += alpha * p;
      if (blocking >= 0) active[static_cast<std::size_t>(blocking)] = true;
      continue;
    }

    // Stationary on the working set; inspect inequality multipliers.
    if (rows == 0) {
      converged = true;
      break;
    }
    const Eigen::VectorXd gradient = weights.asDiagonal() * (x - anchor);
    const Eigen::VectorXd lambda =
        W.transpose().completeOrthogonalDecomposition().solve(gradient);
    long drop = -1;
    double most_negative = -options.multiplier_tol;
    for (std::size_t k = 0; k < working.size(); ++k) {
      const double l = lambda[n_eq + static_cast<long>(k)];
      if (l < most_negative) {
        most_negative = l;
        drop = working[k];
      }
    }
    if (drop < 0) {
      converged = true;
      break;
    }
    active[static_cast<std::size_t>(drop)] = false;
  }

  if (!converged) throw NumericalFailure("projection active-set iteration limit");

  result.status = QpStatus::Optimal;
  result.x = x;
  return result;
}

QpResult project_onto_polyhedron(const LpProblem& constraints, const Eigen::VectorXd& anchor,
                                 const QpOptions& options) {
  return project_onto_polyhedron(constraints, anchor,
                                 Eigen::VectorXd::Ones(constraints.num_cols()), options);
}

}  // namespace dwcuts
