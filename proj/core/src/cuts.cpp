// SPDX-License-Identifier: Apache-2.0

#include "dwcuts/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "dwcuts/oracle.hpp"

namespace dwcuts {

std::string to_string(CutOrigin origin) {
  switch (origin) {
    case CutOrigin::Dwb:
      return "dwb";
    case CutOrigin::Objective:
      return "objective";
    case CutOrigin::Strengthened:
      return "strengthened";
    case CutOrigin::Tilted:
      return "tilted";
  }
  return "?";
}

Eigen::VectorXd Cut::local_coeffs(const Block& block_ref) const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(block_ref.size());
  for (const auto& [global, coef] : coeffs) {
    const int l = block_ref.local_of(global);
    if (l < 0)
      throw DimensionError("cut references variable " + std::to_string(global) +
                           " outside the block support");
    a[l] += coef;
  }
  return a;
}

SparseRow Cut::as_row() const {
  SparseRow row;
  row.sense = RowSense::GreaterEqual;
  row.rhs = rhs;
  row.terms = coeffs;
  row.name = to_string(origin) + std::to_string(id);
  return row;
}

bool PointCache::insert(const Eigen::VectorXd& p) {
  for (const auto& q : points_)
    if ((q - p).lpNorm<Eigen::Infinity>() < 1e-9) return false;
  points_.push_back(p);
  return true;
}

std::vector<int> PointCache::tight_set(const Eigen::VectorXd& coeffs, double rhs,
                                       double tol) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < points_.size(); ++k)
    if (std::abs(coeffs.dot(points_[k]) - rhs) <= tol) out.push_back(static_cast<int>(k));
  return out;
}

namespace {

// Rank of the affine hull spanned by the given cache points.
int affine_rank(const std::vector<Eigen::VectorXd>& points, const std::vector<int>& subset) {
  if (subset.empty()) return 0;
  const long dim = points[static_cast<std::size_t>(subset.front())].size();
  Eigen::MatrixXd diffs(static_cast<long>(subset.size()) - 1, dim);
  for (std::size_t k = 1; k < subset.size(); ++k)
    diffs.row(static_cast<long>(k - 1)) =
        (points[static_cast<std::size_t>(subset[k])] - points[static_cast<std::size_t>(subset[0])])
            .transpose();
  if (diffs.rows() == 0) return 1;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(diffs);
  qr.setThreshold(1e-7);
  return static_cast<int>(qr.rank()) + 1;  // points spanning an r-dim space: r+1 aff. indep.
}

Cut make_block_cut(int id, int block_id, const Block& block, const Eigen::VectorXd& a, double rhs,
                   CutOrigin origin, int parent, int depth) {
  Cut cut;
  cut.block = block_id;
  cut.rhs = rhs;
  cut.origin = origin;
  cut.id = id;
  cut.parent = parent;
  cut.tilt_depth = depth;
  for (int l = 0; l < block.size(); ++l)
    if (a[l] != 0.0) cut.coeffs.emplace_back(block.support[static_cast<std::size_t>(l)], a[l]);
  cut.zero = a.lpNorm<Eigen::Infinity>() <= 1e-12;
  return cut;
}

SparseRow fix_row(int local, double value, bool at_one) {
  SparseRow row;
  row.sense = at_one ? RowSense::GreaterEqual : RowSense::LessEqual;
  row.rhs = value;
  row.terms.emplace_back(local, 1.0);
  return row;
}

}  // namespace

CutFactory::CutFactory(const BlockStructuredMip& model)
    : model_(model), caches_(static_cast<std::size_t>(model.num_blocks())) {}

bool CutFactory::checked_cache_insert(int block_id, const Eigen::VectorXd& p) {
  const Block& block = model_.blocks[static_cast<std::size_t>(block_id)];
  std::vector<double> xv(p.data(), p.data() + p.size());
  for (const auto& row : block.rows)
    if (row.violation(xv) > kCutTol)
      throw Error("cache insert: point violates block row " + row.name);
  for (int l = 0; l < block.size(); ++l) {
    const auto g = static_cast<std::size_t>(block.support[static_cast<std::size_t>(l)]);
    if (p[l] < model_.lower[g] - kCutTol || p[l] > model_.upper[g] + kCutTol)
      throw Error("cache insert: point violates bounds");
    if (block.integrality[static_cast<std::size_t>(l)] &&
        std::abs(p[l] - std::round(p[l])) > kIntTol)
      throw Error("cache insert: point violates integrality");
  }
  return caches_[static_cast<std::size_t>(block_id)].insert(p);
}

Eigen::VectorXd CutFactory::price(int block_id, const Block& working,
                                  const Eigen::VectorXd& weights, double& value, bool& unbounded,
                                  Eigen::VectorXd* ray) {
  ++oracle_calls_;
  const OracleResult r = minimize_over_block(model_, working, weights);
  if (r.status == OracleStatus::Unbounded) {
    unbounded = true;
    value = -kInfinity;
    if (ray) *ray = r.ray;
    return {};
  }
  if (r.status == OracleStatus::Infeasible) {
    unbounded = false;
    value = kInfinity;
    return {};
  }
  unbounded = false;
  value = r.value;
  checked_cache_insert(block_id, r.argmin);
  return r.argmin;
}

Cut CutFactory::dwb_cut(int block_id, const Eigen::VectorXd& pi_local) {
  const Block& block = model_.blocks[static_cast<std::size_t>(block_id)];
  if (pi_local.size() != block.size())
    throw DimensionError("dwb_cut: pi length differs from the block support");
  double value = 0.0;
  bool unbounded = false;
  price(block_id, block, pi_local, value, unbounded);
  if (unbounded)
    throw UnboundedDirectionError("pricing unbounded for block " + std::to_string(block_id) +
                                  ": no cut exists for this direction");
  if (!std::isfinite(value)) throw Error("block " + std::to_string(block_id) + " is infeasible");
  return make_block_cut(next_id(), block_id, block, pi_local, value, CutOrigin::Dwb, -1, 0);
}

LastIterationCuts CutFactory::last_iteration_cuts(const DualPoint& dual) {
  if (static_cast<int>(dual.pi.size()) != model_.num_blocks())
    throw DimensionError("last_iteration_cuts: dual block count mismatch");
  if (dual.beta.size() != model_.num_linking())
    throw DimensionError("last_iteration_cuts: beta length mismatch");

  // Wolfe feasibility to 1e-7, same conditions evaluate_dual enforces.
  for (int r = 0; r < model_.num_linking(); ++r)
    if (dual.beta[r] < -1e-9) throw DualInfeasibleError("beta has a negative entry");
  for (int i = 0; i < model_.n; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < model_.num_blocks(); ++j) {
      const int l = model_.blocks[static_cast<std::size_t>(j)].local_of(i);
      if (l >= 0) lhs += dual.pi[static_cast<std::size_t>(j)][l];
    }
    for (int r = 0; r < model_.num_linking(); ++r)
      for (const auto& [idx, coef] : model_.linking[static_cast<std::size_t>(r)].terms)
        if (idx == i) lhs += coef * dual.beta[r];
    if (std::abs(lhs - model_.objective[static_cast<std::size_t>(i)]) > 1e-7)
      throw DualInfeasibleError("dual violates the zero-reduced-cost equality at variable " +
                                std::to_string(i));
  }

  LastIterationCuts out;
  for (int j = 0; j < model_.num_blocks(); ++j) {
    Cut cut = dwb_cut(j, dual.pi[static_cast<std::size_t>(j)]);
    if (cut.zero) {
      ++out.zero_cuts;
      continue;
    }
    out.cuts.push_back(std::move(cut));
  }
  return out;
}

Cut CutFactory::objective_cut(double dw_bound) {
  if (!std::isfinite(dw_bound)) throw Error("objective cut needs a finite bound");
  Cut cut;
  cut.block = std::nullopt;
  cut.rhs = dw_bound;
  cut.origin = CutOrigin::Objective;
  cut.id = next_id();
  for (int i = 0; i < model_.n; ++i)
    if (model_.objective[static_cast<std::size_t>(i)] != 0.0)
      cut.coeffs.emplace_back(i, model_.objective[static_cast<std::size_t>(i)]);
  cut.zero = cut.coeffs.empty();
  return cut;
}

StrengthenResult CutFactory::strengthen_coefficients(const Cut& cut,
                                                     std::optional<std::vector<int>> order) {
  StrengthenResult result;
  result.cut = cut;
  if (!cut.block) return result;  // nothing to do for the objective cut
  const int block_id = *cut.block;
  const Block& block = model_.blocks[static_cast<std::size_t>(block_id)];
  PointCache& cache = caches_[static_cast<std::size_t>(block_id)];

  Eigen::VectorXd a = cut.local_coeffs(block);
  double f = cut.rhs;
  Block working = block;  // fixings accumulate as rows on this copy

  std::vector<int> visit;
  if (order) {
    visit = *order;
  } else {
    for (int l = 0; l < block.size(); ++l) visit.push_back(l);
  }

  std::vector<bool> fixed(static_cast<std::size_t>(block.size()), false);
  bool changed = false;
  for (int l : visit) {
    if (l < 0 || l >= block.size())
      throw DimensionError("strengthening order references local index " + std::to_string(l));
    if (fixed[static_cast<std::size_t>(l)]) continue;
    const auto g = static_cast<std::size_t>(block.support[static_cast<std::size_t>(l)]);
    const bool binary = block.integrality[static_cast<std::size_t>(l)] &&
                        std::abs(model_.lower[g]) <= kIntTol &&
                        std::abs(model_.upper[g] - 1.0) <= kIntTol;
    if (!binary) continue;

    // Known tight points on both sides of the disjunction: skip the oracle.
    bool tight0 = false, tight1 = false;
    for (int k : cache.tight_set(a, f)) {
      const double v = cache.points()[static_cast<std::size_t>(k)][l];
      tight0 |= std::abs(v) <= kIntTol;
      tight1 |= std::abs(v - 1.0) <= kIntTol;
    }
    if (tight0 && tight1) continue;

    // Branch x_l = 1.
    Block probe = working;
    probe.rows.push_back(fix_row(l, 1.0, /*at_one=*/true));
    double fbar = 0.0;
    bool unbounded = false;
    price(block_id, probe, a, fbar, unbounded, nullptr);
    if (unbounded) continue;  // no strengthening possible along an unbounded branch
    if (!std::isfinite(fbar)) {
      // x_l = 1 infeasible in the block: fix to 0 downstream.
      working.rows.push_back(fix_row(l, 0.0, /*at_one=*/false));
      fixed[static_cast<std::size_t>(l)] = true;
      result.fixings.emplace_back(block.support[static_cast<std::size_t>(l)], 0.0);
      continue;
    }
    if (fbar > f + 1e-9) {
      // a'x >= f + (fbar - f) x_l.
      a[l] -= fbar - f;
      changed = true;
      continue;
    }

    // Branch x_l = 0.
    probe = working;
    probe.rows.push_back(fix_row(l, 0.0, /*at_one=*/false));
    price(block_id, probe, a, fbar, unbounded, nullptr);
    if (unbounded) continue;
    if (!std::isfinite(fbar)) {
      working.rows.push_back(fix_row(l, 1.0, /*at_one=*/true));
      fixed[static_cast<std::size_t>(l)] = true;
      result.fixings.emplace_back(block.support[static_cast<std::size_t>(l)], 1.0);
      continue;
    }
    if (fbar > f + 1e-9) {
      // a'x >= f + (fbar - f)(1 - x_l).
      a[l] += fbar - f;
      f = fbar;
      changed = true;
    }
  }

  if (changed || !result.fixings.empty()) {
    result.cut = make_block_cut(next_id(), block_id, block, a, f, CutOrigin::Strengthened, cut.id,
                                cut.tilt_depth);
  }
  return result;
}

bool CutFactory::ensure_full_dim_witness(int block_id) {
  const Block& block = model_.blocks[static_cast<std::size_t>(block_id)];
  PointCache& cache = caches_[static_cast<std::size_t>(block_id)];
  const int need = block.size() + 1;

  auto current_rank = [&] {
    std::vector<int> all(cache.points().size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
    return affine_rank(cache.points(), all);
  };
  if (current_rank() >= need) return true;

  // Deterministic probes along the coordinate directions.
  for (int l = 0; l < block.size() && current_rank() < need; ++l) {
    for (const double sign : {1.0, -1.0}) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(block.size());
      w[l] = sign;
      double value = 0.0;
      bool unbounded = false;
      price(block_id, block, w, value, unbounded);
      (void)value;
    }
  }
  if (current_rank() >= need) return true;
  if (std::find(degenerate_blocks_.begin(), degenerate_blocks_.end(), block_id) ==
      degenerate_blocks_.end())
    degenerate_blocks_.push_back(block_id);
  return false;
}

std::vector<Cut> CutFactory::tilt(const Cut& cut, int depth) {
  if (depth <= 0 || !cut.block) return {cut};
  const int block_id = *cut.block;
  const Block& block = model_.blocks[static_cast<std::size_t>(block_id)];
  PointCache& cache = caches_[static_cast<std::size_t>(block_id)];
  const long budget_start = oracle_calls_;
  auto budget_left = [&] { return oracle_calls_ - budget_start < tilt_oracle_budget_; };

  Eigen::VectorXd a0 = cut.local_coeffs(block);
  double f0 = cut.rhs;

  // Support the cut: lift the rhs to the exact block minimum, which also
  // guarantees a cached tight point.
  {
    double value = 0.0;
    bool unbounded = false;
    price(block_id, block, a0, value, unbounded);
    if (unbounded)
      throw Error("tilt: input cut is not valid (pricing unbounded)");
    if (!std::isfinite(value)) throw Error("tilt: block is infeasible");
    if (value > f0 + 1e-9) f0 = value;
  }

  if (!ensure_full_dim_witness(block_id)) return {cut};

  struct NodeCut {
    Eigen::VectorXd a;
    double f;
    int remaining;
  };
  std::deque<NodeCut> frontier;
  frontier.push_back({a0, f0, depth});
  std::vector<NodeCut> leaves;

  while (!frontier.empty()) {
    NodeCut node = frontier.front();
    frontier.pop_front();
    if (node.remaining == 0 || !budget_left()) {
      leaves.push_back(node);
      continue;
    }

    const std::vector<int> tights = cache.tight_set(node.a, node.f);
    if (affine_rank(cache.points(), tights) >= block.size()) {
      // Already facet-defining within the cache: nothing to rotate about.
      leaves.push_back(node);
      continue;
    }

    // Pick x-bar: a cached point strictly above the cut, smallest slack,
    // lexicographic tie-break; fall back to maximizing a'x by oracle.
    int xbar_idx = -1;
    double best_slack = kInfinity;
    for (std::size_t k = 0; k < cache.points().size(); ++k) {
      const double slack = node.a.dot(cache.points()[k]) - node.f;
      if (slack <= kCutTol) continue;
      const bool better =
          slack < best_slack - 1e-12 ||
          (slack <= best_slack + 1e-12 && xbar_idx >= 0 &&
           std::lexicographical_compare(
               cache.points()[k].data(), cache.points()[k].data() + cache.points()[k].size(),
               cache.points()[static_cast<std::size_t>(xbar_idx)].data(),
               cache.points()[static_cast<std::size_t>(xbar_idx)].data() +
                   cache.points()[static_cast<std::size_t>(xbar_idx)].size()));
      if (better) {
        best_slack = slack;
        xbar_idx = static_cast<int>(k);
      }
    }
    Eigen::VectorXd xbar;
    if (xbar_idx >= 0) {
      xbar = cache.points()[static_cast<std::size_t>(xbar_idx)];
    } else {
      double value = 0.0;
      bool unbounded = false;
      const Eigen::VectorXd argmax = price(block_id, block, Eigen::VectorXd(-node.a), value,
                                           unbounded);
      if (unbounded || !std::isfinite(value) || -value <= node.f + kCutTol) {
        // Every feasible point is tight: implicit equality, nothing to do.
        leaves.push_back(node);
        continue;
      }
      xbar = argmax;
    }

    // Fit (v, w) with v'x = w on the tight set plus x-bar: least-norm null
    // vector of the affine system, oriented first-nonzero-positive.
    Eigen::MatrixXd system(static_cast<long>(tights.size()) + 1, block.size() + 1);
    for (std::size_t k = 0; k < tights.size(); ++k) {
      system.row(static_cast<long>(k)).head(block.size()) =
          cache.points()[static_cast<std::size_t>(tights[k])].transpose();
      system(static_cast<long>(k), block.size()) = -1.0;
    }
    system.row(static_cast<long>(tights.size())).head(block.size()) = xbar.transpose();
    system(static_cast<long>(tights.size()), block.size()) = -1.0;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeFullV);
    const Eigen::VectorXd vw = svd.matrixV().col(block.size());
    Eigen::VectorXd v = vw.head(block.size());
    double w = vw[block.size()];
    for (long k = 0; k < vw.size(); ++k) {
      if (std::abs(vw[k]) > 1e-9) {
        if (vw[k] < 0.0) {
          v = -v;
          w = -w;
        }
        break;
      }
    }
    if (v.lpNorm<Eigen::Infinity>() <= 1e-9) {
      leaves.push_back(node);  // no usable direction
      continue;
    }

    // Two sides: (sv, sw) = (v, w) and (-v, -w). Each side yields either
    // the direction itself (when valid for Q) or the tilted inequality with
    // the largest verified lambda, seeded from the cache.
    struct SideChild {
      Eigen::VectorXd a;
      double f = 0.0;
      bool direction_valid = false;
      bool verified = false;
    };
    auto tilt_side = [&](double side) {
      SideChild child;
      const Eigen::VectorXd sv = side * v;
      const double sw = side * w;

      double side_min = 0.0;
      bool side_unbounded = false;
      Eigen::VectorXd side_ray;
      price(block_id, block, sv, side_min, side_unbounded, &side_ray);
      if (!side_unbounded && side_min >= sw - 1e-9) {
        child.a = sv;
        child.f = sw;
        child.direction_valid = true;
        child.verified = true;
        return child;
      }

      auto cache_bound = [&] {
        double bound = kInfinity;
        for (const auto& p : cache.points()) {
          const double denom = sw - sv.dot(p);
          if (denom > 1e-9) bound = std::min(bound, (node.a.dot(p) - node.f) / denom);
        }
        return bound;
      };
      double lambda = cache_bound();
      if (side_unbounded && side_ray.size() > 0) {
        const double denom = -sv.dot(side_ray);
        if (denom > 1e-9) lambda = std::min(lambda, node.a.dot(side_ray) / denom);
      }
      if (!std::isfinite(lambda)) lambda = 0.0;
      lambda = std::max(lambda, 0.0);

      while (budget_left()) {
        double check = 0.0;
        bool check_unbounded = false;
        Eigen::VectorXd check_ray;
        price(block_id, block, Eigen::VectorXd(node.a + lambda * sv), check, check_unbounded,
              &check_ray);
        if (check_unbounded) {
          const double denom = -sv.dot(check_ray);
          const double shrunk = denom > 1e-9 ? node.a.dot(check_ray) / denom : lambda * 0.5;
          lambda = std::max(0.0, std::min(lambda * 0.999999, shrunk));
          continue;
        }
        if (check >= node.f + lambda * sw - 1e-9) {
          child.verified = true;
          break;
        }
        double shrunk = std::min(lambda, cache_bound());
        if (shrunk >= lambda - 1e-15) shrunk = lambda * 0.5;  // force progress
        lambda = std::max(0.0, shrunk);
      }
      child.a = node.a + lambda * sv;
      child.f = node.f + lambda * sw;
      return child;
    };

    const SideChild plus = tilt_side(1.0);
    const SideChild minus = tilt_side(-1.0);
    if (plus.direction_valid && minus.direction_valid) {
      // Both sides valid means the hull is not full-dimensional after all;
      // keep the node untouched.
      leaves.push_back(node);
      continue;
    }
    for (const SideChild* child : {&plus, &minus}) {
      if (child->verified)
        frontier.push_back({child->a, child->f, node.remaining - 1});
      else
        leaves.push_back(node);  // budget ran out mid-verification
    }
  }

  // Deduplicate identical leaves; up to 2^depth cuts remain.
  std::vector<Cut> out;
  for (const auto& leaf : leaves) {
    bool duplicate = false;
    for (const auto& seen : out) {
      const Eigen::VectorXd sa = seen.block ? seen.local_coeffs(block) : Eigen::VectorXd();
      if (sa.size() == leaf.a.size() && (sa - leaf.a).lpNorm<Eigen::Infinity>() < 1e-9 &&
          std::abs(seen.rhs - leaf.f) < 1e-9) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    out.push_back(
        make_block_cut(next_id(), block_id, block, leaf.a, leaf.f, CutOrigin::Tilted, cut.id, depth));
  }
  return out;
}

bool CutFactory::oracle_validity_check(const Cut& cut) {
  if (cut.block) {
    const Block& block = model_.blocks[static_cast<std::size_t>(*cut.block)];
    double value = 0.0;
    bool unbounded = false;
    price(*cut.block, block, cut.local_coeffs(block), value, unbounded);
    if (unbounded) return false;
    return value >= cut.rhs - kCutTol;
  }
  const OracleResult r = solve_mip(model_);
  if (r.status != OracleStatus::Optimal) return false;
  return r.value >= cut.rhs - kCutTol;
}

LpProblem make_cut_lp(const BlockStructuredMip& model, const std::vector<Cut>& cuts) {
  LpProblem lp;
  for (int i = 0; i < model.n; ++i)
    lp.add_col(model.objective[static_cast<std::size_t>(i)], model.lower[static_cast<std::size_t>(i)],
               model.upper[static_cast<std::size_t>(i)], "x" + std::to_string(i));
  for (const auto& row : model.linking) lp.add_row(row);
  for (const auto& cut : cuts) {
    if (cut.zero) continue;
    lp.add_row(cut.as_row());
  }
  return lp;
}

}  // namespace dwcuts
