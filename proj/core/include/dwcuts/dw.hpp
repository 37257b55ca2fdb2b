// SPDX-License-Identifier: Apache-2.0
//
// Dantzig-Wolfe column generation. The restricted master keeps the x
// variables explicitly (free; their bounds live inside the block hulls),
// one lambda column per generated block point, one mu column per block ray,
// plus Big-M artificials that make the master feasible from an empty pool:
// one artificial per convexity row and one surplus artificial per linking
// row. Pricing solves min{pi'v : v in Q^j} exactly per block; the run
// terminates when every reduced cost D_j(pi^j) - theta_j clears -tol.

#pragma once

#include <string>
#include <vector>

#include "dwcuts/dual_point.hpp"
#include "dwcuts/lp.hpp"
#include "dwcuts/model.hpp"

namespace dwcuts {

class ColumnPool {
 public:
  ColumnPool() = default;
  explicit ColumnPool(int num_blocks) : blocks_(static_cast<std::size_t>(num_blocks)) {}

  // Deduplicates within 1e-9 infinity norm; returns whether inserted.
  bool add_point(int block, const Eigen::VectorXd& v);
  bool add_ray(int block, const Eigen::VectorXd& r);

  const std::vector<Eigen::VectorXd>& points(int block) const {
    return blocks_[static_cast<std::size_t>(block)].points;
  }
  const std::vector<Eigen::VectorXd>& rays(int block) const {
    return blocks_[static_cast<std::size_t>(block)].rays;
  }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int total_columns() const;

 private:
  struct BlockColumns {
    std::vector<Eigen::VectorXd> points;
    std::vector<Eigen::VectorXd> rays;
  };
  std::vector<BlockColumns> blocks_;
};

struct DwOptions {
  int max_iter = 500;
  double tol = 1e-6;  // reduced-cost acceptance threshold
  double big_m_scale = 1e7;
};

enum class DwStatus { Converged, IterationLimit };

struct DwIterate {
  int iteration = 0;
  double master_objective = 0.0;
  int columns = 0;
};

struct DwResult {
  DwStatus status = DwStatus::IterationLimit;
  double dw_bound = kInfinity;  // z_D
  DualPoint dual;               // exact optimal dual of the final restricted master
  Eigen::VectorXd x;            // optimal x of the final master
  ColumnPool pool;
  std::vector<DwIterate> trace;
  int iterations = 0;
  Eigen::VectorXd final_reduced_costs;  // zeta_j per block at termination
};

DwResult run_dw(const BlockStructuredMip& model, const DwOptions& options = {});

// The pool-restricted hull reformulation without artificials: x free,
// x_I(j) = sum lambda_v v + sum mu_r r, convexity rows, linking rows.
LpProblem extended_formulation(const BlockStructuredMip& model, const ColumnPool& pool);

// CSV: iteration, master objective, column count.
void write_dw_trace_csv(const DwResult& result, const std::string& path);

}  // namespace dwcuts
