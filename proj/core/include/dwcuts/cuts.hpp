// SPDX-License-Identifier: Apache-2.0
//
// Cut generation and strengthening.
//
// A Dantzig-Wolfe block cut for block j is pi'x_I(j) >= D_j(pi) with
// D_j(pi) = min{pi'v : v in Q^j} solved exactly. The last-iteration cuts
// (one per block, from an optimal dual) together with the linking rows and
// the variable bounds have LP value exactly z_D. Two strengthenings are
// provided: per-binary disjunctive coefficient strengthening, and recursive
// tilting around the cut's known tight set, at most 2^d leaves for depth d.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "dwcuts/dual_point.hpp"
#include "dwcuts/lp.hpp"
#include "dwcuts/model.hpp"

namespace dwcuts {

enum class CutOrigin { Dwb, Objective, Strengthened, Tilted };

std::string to_string(CutOrigin origin);

struct Cut {
  std::optional<int> block;                    // none for the objective cut
  std::vector<std::pair<int, double>> coeffs;  // global variable ids
  double rhs = 0.0;
  CutOrigin origin = CutOrigin::Dwb;
  int tilt_depth = 0;
  int id = -1;
  int parent = -1;
  bool zero = false;  // pi == 0: trivially satisfied

  // Dense coefficients over a block's support. Throws when the cut touches
  // variables outside the support.
  Eigen::VectorXd local_coeffs(const Block& block_ref) const;
  SparseRow as_row() const;
};

// Feasible block points seen so far, plus tight-set queries against a cut.
class PointCache {
 public:
  bool insert(const Eigen::VectorXd& p);
  const std::vector<Eigen::VectorXd>& points() const { return points_; }
  std::vector<int> tight_set(const Eigen::VectorXd& coeffs, double rhs,
                             double tol = kCutTol) const;

 private:
  std::vector<Eigen::VectorXd> points_;
};

struct StrengthenResult {
  Cut cut;
  // Variables proven fixed while strengthening: (global id, value).
  std::vector<std::pair<int, double>> fixings;
};

struct LastIterationCuts {
  std::vector<Cut> cuts;  // zero cuts are dropped from this list
  int zero_cuts = 0;
};

class CutFactory {
 public:
  explicit CutFactory(const BlockStructuredMip& model);

  // pi'x >= D_j(pi); the pricing argmin lands in the block's cache.
  // Throws UnboundedDirectionError when the pricing problem is unbounded.
  Cut dwb_cut(int block_id, const Eigen::VectorXd& pi_local);

  // One cut per block from a Wolfe-feasible dual (checked to 1e-7).
  LastIterationCuts last_iteration_cuts(const DualPoint& dual);

  Cut objective_cut(double dw_bound);

  // Single left-to-right pass of disjunctive coefficient strengthening over
  // the binary variables, default order = support order.
  StrengthenResult strengthen_coefficients(const Cut& cut,
                                           std::optional<std::vector<int>> order = std::nullopt);

  // Depth-d tilting tree; leaves are returned. When the oracle budget runs
  // out the frontier collected so far is returned (every cut is valid).
  std::vector<Cut> tilt(const Cut& cut, int depth);

  // min over Q^j of the cut's coefficients >= rhs - 1e-7 (objective cuts
  // are checked against the full model optimum).
  bool oracle_validity_check(const Cut& cut);

  PointCache& cache(int block_id) { return caches_[static_cast<std::size_t>(block_id)]; }
  const BlockStructuredMip& model() const { return model_; }
  long oracle_calls() const { return oracle_calls_; }
  void set_tilt_oracle_budget(long budget) { tilt_oracle_budget_ = budget; }

  // Blocks whose hull could not be certified full-dimensional by the cache.
  const std::vector<int>& degenerate_blocks() const { return degenerate_blocks_; }

 private:
  Eigen::VectorXd price(int block_id, const Block& working, const Eigen::VectorXd& weights,
                        double& value, bool& unbounded, Eigen::VectorXd* ray = nullptr);
  bool checked_cache_insert(int block_id, const Eigen::VectorXd& p);
  bool ensure_full_dim_witness(int block_id);
  int next_id() { return id_counter_++; }

  const BlockStructuredMip& model_;
  std::vector<PointCache> caches_;
  std::vector<int> degenerate_blocks_;
  long oracle_calls_ = 0;
  long tilt_oracle_budget_ = 20000;
  int id_counter_ = 0;
};

// {min c'x : cuts, Ax >= b, bounds} - the LP whose optimum recovers the
// bound the cuts encode. Zero cuts are skipped.
LpProblem make_cut_lp(const BlockStructuredMip& model, const std::vector<Cut>& cuts);

}  // namespace dwcuts
