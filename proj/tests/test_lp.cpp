#include <doctest.h>

#include <cmath>

#include "dwcuts/lp.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/random_models.hpp"

using namespace dwcuts;
using namespace dwcuts::testsupport;

namespace {

double dual_objective(const LpProblem& lp, const LpSolution& sol) {
  // b-weighted row duals plus bound contributions from reduced costs.
  double v = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) v += lp.rows[static_cast<std::size_t>(i)].rhs * sol.row_duals[i];
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double d = sol.reduced_costs[j];
    if (sol.col_basic[static_cast<std::size_t>(j)]) continue;
    const auto& col = lp.cols[static_cast<std::size_t>(j)];
    if (d > 0.0 && std::isfinite(col.lower))
      v += d * col.lower;
    else if (d < 0.0 && std::isfinite(col.upper))
      v += d * col.upper;
  }
  return v;
}

}  // namespace

TEST_CASE("one-variable LP, x >= 3, free above") {
  LpProblem lp;
  lp.add_free_col(1.0, "x");
  lp.add_row({{{0, 1.0}}, RowSense::GreaterEqual, 3.0});
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(3.0));
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(sol.row_duals[0] == doctest::Approx(1.0));
}

TEST_CASE("degenerate corner LP has the unique basic dual (1, 0, 2)") {
  const auto lp = degenerate_corner_lp();
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.x[1] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(-1.0));
  CHECK(sol.row_duals[0] == doctest::Approx(1.0));
  CHECK(sol.row_duals[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.row_duals[2] == doctest::Approx(2.0));
}

TEST_CASE("natural LP relaxation of the coupled boxes model is 7") {
  const auto m = coupled_boxes_model();
  LpProblem lp;
  for (int i = 0; i < m.n; ++i)
    lp.add_col(m.objective[static_cast<std::size_t>(i)], m.lower[static_cast<std::size_t>(i)],
               m.upper[static_cast<std::size_t>(i)]);
  for (const auto& row : m.linking) lp.add_row(row);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("infeasible and unbounded statuses") {
  SUBCASE("x >= 1 and x <= 0") {
    LpProblem lp;
    lp.add_free_col(0.0);
    lp.add_row({{{0, 1.0}}, RowSense::GreaterEqual, 1.0});
    lp.add_row({{{0, 1.0}}, RowSense::LessEqual, 0.0});
    CHECK(solve_lp(lp).status == LpStatus::Infeasible);
  }
  SUBCASE("min -x with x >= 0 free above") {
    LpProblem lp;
    lp.add_col(-1.0, 0.0, kInfinity);
    lp.add_row({{{0, 1.0}}, RowSense::GreaterEqual, 0.0});
    const auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Unbounded);
    REQUIRE(sol.ray.size() == 1);
    CHECK(sol.ray[0] > 0.0);
  }
  SUBCASE("unbounded ray is a feasible improving direction") {
    LpProblem lp;
    lp.add_free_col(1.0);
    lp.add_free_col(-2.0);
    lp.add_row({{{0, 1.0}, {1, -1.0}}, RowSense::GreaterEqual, -1.0});
    lp.add_row({{{0, 1.0}}, RowSense::GreaterEqual, 0.0});
    const auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Unbounded);
    const std::vector<double> ray(sol.ray.data(), sol.ray.data() + sol.ray.size());
    for (const auto& row : lp.rows) CHECK(row.activity(ray) >= -1e-9);
    double drift = 0.0;
    for (int j = 0; j < lp.num_cols(); ++j) drift += lp.cols[static_cast<std::size_t>(j)].objective * sol.ray[j];
    CHECK(drift < -1e-9);
  }
}

TEST_CASE("empty-row LP handled via bounds only") {
  LpProblem lp;
  lp.add_col(2.0, -1.0, 4.0);
  lp.add_col(-3.0, 0.0, 2.0);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-8.0));
}

TEST_CASE("equality rows are respected") {
  LpProblem lp;
  lp.add_col(1.0, 0.0, 10.0);
  lp.add_col(1.0, 0.0, 10.0);
  lp.add_row({{{0, 1.0}, {1, 1.0}}, RowSense::Equal, 4.0});
  lp.add_row({{{0, 1.0}, {1, -1.0}}, RowSense::GreaterEqual, 1.0});
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(4.0));
  CHECK(sol.x[0] + sol.x[1] == doctest::Approx(4.0));
}

TEST_CASE("random box LPs agree with vertex enumeration") {
  int optimal_seen = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const LpProblem lp = random_box_lp(seed);
    const auto sol = solve_lp(lp);
    const auto brute = brute_vertex_min(lp);
    if (sol.status == LpStatus::Optimal) {
      ++optimal_seen;
      REQUIRE_MESSAGE(brute.has_value(), "seed ", seed);
      CHECK_MESSAGE(std::abs(sol.objective - *brute) <= 1e-7, "seed ", seed, " got ",
                    sol.objective, " expected ", *brute);
      CHECK(sol.max_primal_violation <= kFeasTol);
    } else {
      // Generated LPs are feasible by construction, box-bounded columns.
      CHECK_MESSAGE(sol.status != LpStatus::Infeasible, "seed ", seed);
    }
  }
  CHECK(optimal_seen >= 50);
}

TEST_CASE("strong duality and complementary slackness on random LPs") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const LpProblem lp = random_box_lp(seed + 1000);
    const auto sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) continue;
    const double dual = dual_objective(lp, sol);
    CHECK_MESSAGE(std::abs(sol.objective - dual) <= 1e-6 * (1.0 + std::abs(sol.objective)),
                  "seed ", seed, " primal ", sol.objective, " dual ", dual);
    // Complementary slackness: positive >=-row dual means the row is tight.
    const std::vector<double> xv(sol.x.data(), sol.x.data() + sol.x.size());
    for (int i = 0; i < lp.num_rows(); ++i) {
      const auto& row = lp.rows[static_cast<std::size_t>(i)];
      if (row.sense == RowSense::GreaterEqual && sol.row_duals[i] > kDualTol)
        CHECK(std::abs(row.activity(xv) - row.rhs) <= kFeasTol);
      if (row.sense == RowSense::LessEqual && sol.row_duals[i] < -kDualTol)
        CHECK(std::abs(row.activity(xv) - row.rhs) <= kFeasTol);
    }
    // Dual sign convention.
    for (int i = 0; i < lp.num_rows(); ++i) {
      const auto& row = lp.rows[static_cast<std::size_t>(i)];
      if (row.sense == RowSense::GreaterEqual) CHECK(sol.row_duals[i] >= -kDualTol);
      if (row.sense == RowSense::LessEqual) CHECK(sol.row_duals[i] <= kDualTol);
    }
    // Basic dual: slack basic means zero row dual.
    for (int i = 0; i < lp.num_rows(); ++i)
      if (sol.row_basic[static_cast<std::size_t>(i)])
        CHECK(std::abs(sol.row_duals[i]) <= 1e-9);
  }
}

TEST_CASE("row-form LPs (free variables) agree with vertex enumeration") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const LpProblem lp = random_row_form_lp(seed);
    const auto sol = solve_lp(lp);
    REQUIRE_MESSAGE(sol.status == LpStatus::Optimal, "seed ", seed);
    const auto brute = brute_vertex_min(lp);
    REQUIRE(brute.has_value());
    CHECK_MESSAGE(std::abs(sol.objective - *brute) <= 1e-7, "seed ", seed);
  }
}
