// SPDX-License-Identifier: Apache-2.0

#include "dwcuts/dw.hpp"

#include <cmath>
#include <fstream>

#include "dwcuts/oracle.hpp"

namespace dwcuts {

bool ColumnPool::add_point(int block, const Eigen::VectorXd& v) {
  auto& cols = blocks_[static_cast<std::size_t>(block)];
  for (const auto& p : cols.points)
    if ((p - v).lpNorm<Eigen::Infinity>() < 1e-9) return false;
  cols.points.push_back(v);
  return true;
}

bool ColumnPool::add_ray(int block, const Eigen::VectorXd& r) {
  auto& cols = blocks_[static_cast<std::size_t>(block)];
  // Rays are scale-free; normalize before deduplication.
  Eigen::VectorXd unit = r;
  const double norm = unit.lpNorm<Eigen::Infinity>();
  if (norm < 1e-12) return false;
  unit /= norm;
  for (const auto& q : cols.rays)
    if ((q - unit).lpNorm<Eigen::Infinity>() < 1e-9) return false;
  cols.rays.push_back(unit);
  return true;
}

int ColumnPool::total_columns() const {
  int count = 0;
  for (const auto& b : blocks_) count += static_cast<int>(b.points.size() + b.rays.size());
  return count;
}

namespace {

struct MasterLayout {
  std::vector<int> x_rows_begin;  // per block
  int linking_begin = 0;
  int convexity_begin = 0;
};

// Builds the restricted master. When big_m > 0, artificials are appended:
// one per convexity row and one surplus per linking row.
LpProblem build_master(const BlockStructuredMip& model, const ColumnPool& pool, double big_m,
                       MasterLayout& layout) {
  LpProblem lp;
  for (int i = 0; i < model.n; ++i)
    lp.add_free_col(model.objective[static_cast<std::size_t>(i)], "x" + std::to_string(i));

  std::vector<std::vector<int>> lambda(static_cast<std::size_t>(model.num_blocks()));
  std::vector<std::vector<int>> mu(static_cast<std::size_t>(model.num_blocks()));
  std::vector<int> convex_art(static_cast<std::size_t>(model.num_blocks()), -1);
  for (int j = 0; j < model.num_blocks(); ++j) {
    for (std::size_t v = 0; v < pool.points(j).size(); ++v)
      lambda[static_cast<std::size_t>(j)].push_back(lp.add_col(0.0, 0.0, kInfinity));
    for (std::size_t r = 0; r < pool.rays(j).size(); ++r)
      mu[static_cast<std::size_t>(j)].push_back(lp.add_col(0.0, 0.0, kInfinity));
    if (big_m > 0.0) convex_art[static_cast<std::size_t>(j)] = lp.add_col(big_m, 0.0, kInfinity);
  }

  layout.x_rows_begin.assign(static_cast<std::size_t>(model.num_blocks()), 0);
  for (int j = 0; j < model.num_blocks(); ++j) {
    const Block& block = model.blocks[static_cast<std::size_t>(j)];
    layout.x_rows_begin[static_cast<std::size_t>(j)] = lp.num_rows();
    for (int l = 0; l < block.size(); ++l) {
      SparseRow row;
      row.sense = RowSense::Equal;
      row.rhs = 0.0;
      row.terms.emplace_back(block.support[static_cast<std::size_t>(l)], 1.0);
      for (std::size_t v = 0; v < pool.points(j).size(); ++v)
        row.terms.emplace_back(lambda[static_cast<std::size_t>(j)][v], -pool.points(j)[v][l]);
      for (std::size_t r = 0; r < pool.rays(j).size(); ++r)
        row.terms.emplace_back(mu[static_cast<std::size_t>(j)][r], -pool.rays(j)[r][l]);
      lp.add_row(row);
    }
  }

  layout.linking_begin = lp.num_rows();
  for (const auto& linking : model.linking) {
    SparseRow row = linking;
    if (big_m > 0.0) {
      const int art = lp.add_col(big_m, 0.0, kInfinity);
      row.terms.emplace_back(art, 1.0);
    }
    lp.add_row(row);
  }

  layout.convexity_begin = lp.num_rows();
  for (int j = 0; j < model.num_blocks(); ++j) {
    SparseRow row;
    row.sense = RowSense::Equal;
    row.rhs = 1.0;
    for (int col : lambda[static_cast<std::size_t>(j)]) row.terms.emplace_back(col, 1.0);
    if (convex_art[static_cast<std::size_t>(j)] >= 0)
      row.terms.emplace_back(convex_art[static_cast<std::size_t>(j)], 1.0);
    lp.add_row(row);
  }
  return lp;
}

double artificial_mass(const LpProblem& master, const LpSolution& sol, int n_model) {
  // Artificial columns are exactly the Big-M priced ones past the x block.
  double mass = 0.0;
  for (int j = n_model; j < master.num_cols(); ++j)
    if (master.cols[static_cast<std::size_t>(j)].objective > 0.0) mass += sol.x[j];
  return mass;
}

}  // namespace

DwResult run_dw(const BlockStructuredMip& model, const DwOptions& options) {
  double c_norm = 0.0;
  for (double c : model.objective) c_norm = std::max(c_norm, std::abs(c));
  const double big_m = options.big_m_scale * (1.0 + c_norm);

  DwResult result;
  result.pool = ColumnPool(model.num_blocks());
  result.final_reduced_costs = Eigen::VectorXd::Zero(model.num_blocks());

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    MasterLayout layout;
    const LpProblem master = build_master(model, result.pool, big_m, layout);
    const LpSolution sol = solve_lp(master);
    if (sol.status != LpStatus::Optimal)
      throw NumericalFailure("restricted master did not solve to optimality");

    result.iterations = iter;
    result.trace.push_back({iter, sol.objective, result.pool.total_columns()});

    DualPoint dual;
    dual.pi.resize(static_cast<std::size_t>(model.num_blocks()));
    for (int j = 0; j < model.num_blocks(); ++j) {
      const Block& block = model.blocks[static_cast<std::size_t>(j)];
      Eigen::VectorXd pi(block.size());
      for (int l = 0; l < block.size(); ++l)
        pi[l] = sol.row_duals[layout.x_rows_begin[static_cast<std::size_t>(j)] + l];
      dual.pi[static_cast<std::size_t>(j)] = pi;
    }
    dual.beta = Eigen::VectorXd::Zero(model.num_linking());
    for (int r = 0; r < model.num_linking(); ++r)
      dual.beta[r] = sol.row_duals[layout.linking_begin + r];
    Eigen::VectorXd theta(model.num_blocks());
    for (int j = 0; j < model.num_blocks(); ++j)
      theta[j] = sol.row_duals[layout.convexity_begin + j];
    dual.theta = theta;

    bool added = false;
    for (int j = 0; j < model.num_blocks(); ++j) {
      const Block& block = model.blocks[static_cast<std::size_t>(j)];
      const OracleResult priced =
          minimize_over_block(model, block, dual.pi[static_cast<std::size_t>(j)]);
      if (priced.status == OracleStatus::Unbounded) {
        result.final_reduced_costs[j] = -kInfinity;
        if (!result.pool.add_ray(j, priced.ray))
          throw NumericalFailure("pricing returned a duplicate ray; master is stalled");
        added = true;
        continue;
      }
      if (priced.status == OracleStatus::Infeasible)
        throw Error("block " + std::to_string(j) + " is infeasible (Q^j empty)");
      const double zeta = priced.value - theta[j];
      result.final_reduced_costs[j] = zeta;
      if (zeta < -options.tol) {
        if (result.pool.add_point(j, priced.argmin)) added = true;
      }
    }

    if (!added) {
      if (artificial_mass(master, sol, model.n) > 1e-7)
        throw Error(
            "Dantzig-Wolfe master kept artificial columns active; "
            "the relaxation is infeasible or Big-M is too small");
      result.status = DwStatus::Converged;
      result.dw_bound = sol.objective;
      result.dual = dual;
      result.x = sol.x.head(model.n);
      return result;
    }
    if (iter == options.max_iter) {
      result.status = DwStatus::IterationLimit;
      result.dw_bound = sol.objective;
      result.dual = dual;
      result.x = sol.x.head(model.n);
      return result;
    }
  }
  throw Error("unreachable");
}

LpProblem extended_formulation(const BlockStructuredMip& model, const ColumnPool& pool) {
  MasterLayout layout;
  return build_master(model, pool, /*big_m=*/0.0, layout);
}

void write_dw_trace_csv(const DwResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "iteration,master_objective,columns\n";
  for (const auto& it : result.trace)
    out << it.iteration << ',' << it.master_objective << ',' << it.columns << '\n';
}

}  // namespace dwcuts
