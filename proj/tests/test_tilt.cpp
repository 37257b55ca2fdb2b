#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dwcuts/cuts.hpp"
#include "dwcuts/rng.hpp"
#include "support/random_models.hpp"

using namespace dwcuts;
using namespace dwcuts::testsupport;

namespace {

BlockStructuredMip unit_square_model() {
  BlockStructuredMip m = make_model(2, {0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}, {true, true});
  m.add_block({0, 1});
  return m;
}

Eigen::VectorXd dense(const Cut& cut, int n) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  for (const auto& [idx, coef] : cut.coeffs) a[idx] += coef;
  return a;
}

bool matches(const Cut& cut, const Eigen::VectorXd& coeffs, double rhs) {
  return (dense(cut, static_cast<int>(coeffs.size())) - coeffs).lpNorm<Eigen::Infinity>() <= 1e-9 &&
         std::abs(cut.rhs - rhs) <= 1e-9;
}

}  // namespace

TEST_CASE("depth-1 tilt of x1 + x2 >= 0 on the unit square") {
  const auto m = unit_square_model();
  CutFactory factory(m);
  Cut cut;
  cut.block = 0;
  cut.coeffs = {{0, 1.0}, {1, 1.0}};
  cut.rhs = 0.0;
  cut.id = 5;

  const auto leaves = factory.tilt(cut, 1);
  REQUIRE(leaves.size() == 2);
  const bool found_x1 = matches(leaves[0], Eigen::Vector2d(1, 0), 0.0) ||
                        matches(leaves[1], Eigen::Vector2d(1, 0), 0.0);
  const bool found_x2 = matches(leaves[0], Eigen::Vector2d(0, 1), 0.0) ||
                        matches(leaves[1], Eigen::Vector2d(0, 1), 0.0);
  CHECK(found_x1);
  CHECK(found_x2);
  for (const auto& leaf : leaves) {
    CHECK(leaf.origin == CutOrigin::Tilted);
    CHECK(leaf.parent == 5);
    CHECK(leaf.tilt_depth == 1);
  }
}

TEST_CASE("depth 0 returns the input unchanged") {
  const auto m = unit_square_model();
  CutFactory factory(m);
  Cut cut;
  cut.block = 0;
  cut.coeffs = {{0, 1.0}, {1, 1.0}};
  cut.rhs = 0.0;
  const auto leaves = factory.tilt(cut, 0);
  REQUIRE(leaves.size() == 1);
  CHECK(matches(leaves[0], Eigen::Vector2d(1, 1), 0.0));
}

TEST_CASE("facet-defining cuts are returned unchanged") {
  const auto m = unit_square_model();
  CutFactory factory(m);
  Cut cut;
  cut.block = 0;
  cut.coeffs = {{0, 1.0}};
  cut.rhs = 0.0;  // x1 >= 0 is a facet of [0,1]^2
  const auto leaves = factory.tilt(cut, 2);
  REQUIRE(leaves.size() == 1);
  CHECK(matches(leaves[0], Eigen::Vector2d(1, 0), 0.0));
}

TEST_CASE("leaves are valid, bounded in count, and imply the parent") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto m = random_binary_knapsack(seed + 20);
    for (int depth = 1; depth <= 3; ++depth) {
      CutFactory factory(m);
      Rng rng(seed * 13 + static_cast<std::uint64_t>(depth));
      Eigen::VectorXd pi(m.blocks[0].size());
      for (int l = 0; l < pi.size(); ++l) pi[l] = static_cast<double>(rng.uniform_int(-3, 3));
      const Cut parent = factory.dwb_cut(0, pi);
      const auto leaves = factory.tilt(parent, depth);
      CHECK(leaves.size() <= (1u << depth));
      for (const auto& leaf : leaves) CHECK(factory.oracle_validity_check(leaf));

      // Conic implication: no point satisfying all leaves can violate the
      // parent (free variables; boundedness below certifies implication).
      LpProblem lp;
      for (int i = 0; i < m.n; ++i) lp.add_free_col(0.0);
      for (const auto& [idx, coef] : parent.coeffs)
        lp.cols[static_cast<std::size_t>(idx)].objective = coef;
      for (const auto& leaf : leaves) lp.add_row(leaf.as_row());
      const auto sol = solve_lp(lp);
      if (sol.status == LpStatus::Optimal)
        CHECK_MESSAGE(sol.objective >= parent.rhs - 1e-6, "seed ", seed, " depth ", depth);
      else
        CHECK_MESSAGE(false, "implication LP unbounded: leaves do not imply the parent (seed ",
                      seed, ", depth ", depth, ")");
    }
  }
}

TEST_CASE("child tight sets grow by at least one cached point") {
  for (std::uint64_t seed = 3; seed <= 9; seed += 3) {
    const auto m = random_binary_knapsack(seed + 60);
    CutFactory factory(m);
    Rng rng(seed);
    Eigen::VectorXd pi(m.blocks[0].size());
    for (int l = 0; l < pi.size(); ++l) pi[l] = static_cast<double>(rng.uniform_int(-3, 3));
    const Cut parent = factory.dwb_cut(0, pi);
    const Eigen::VectorXd pa = parent.local_coeffs(m.blocks[0]);

    const auto leaves = factory.tilt(parent, 1);
    const auto& cache = factory.cache(0);
    // Parent tight set measured on the final cache.
    const auto parent_tight = cache.tight_set(pa, parent.rhs);
    for (const auto& leaf : leaves) {
      const Eigen::VectorXd la = leaf.local_coeffs(m.blocks[0]);
      if ((la - pa).lpNorm<Eigen::Infinity>() <= 1e-9 && std::abs(leaf.rhs - parent.rhs) <= 1e-9)
        continue;  // untouched fallback leaf
      const auto leaf_tight = cache.tight_set(la, leaf.rhs);
      // Every parent-tight point stays tight, and something new appears.
      for (int idx : parent_tight)
        CHECK(std::find(leaf_tight.begin(), leaf_tight.end(), idx) != leaf_tight.end());
      CHECK(leaf_tight.size() >= parent_tight.size() + 1);
    }
  }
}

TEST_CASE("exhausted oracle budget still yields valid cuts") {
  const auto m = random_binary_knapsack(99);
  CutFactory factory(m);
  factory.set_tilt_oracle_budget(3);
  Eigen::VectorXd pi(m.blocks[0].size());
  pi.setConstant(1.0);
  const Cut parent = factory.dwb_cut(0, pi);
  const auto leaves = factory.tilt(parent, 3);
  CHECK(leaves.size() >= 1);
  CutFactory checker(m);
  for (const auto& leaf : leaves) CHECK(checker.oracle_validity_check(leaf));
}
