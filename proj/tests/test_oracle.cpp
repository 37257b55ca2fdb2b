#include <doctest.h>

#include "dwcuts/oracle.hpp"
#include "dwcuts/rng.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/random_models.hpp"

using namespace dwcuts;
using namespace dwcuts::testsupport;

TEST_CASE("block pricing on the coupled boxes model") {
  const auto m = coupled_boxes_model();
  SUBCASE("weights (1, 1/4)") {
    const auto r = minimize_over_block(m, m.blocks[0], Eigen::Vector2d(1.0, 0.25));
    REQUIRE(r.status == OracleStatus::Optimal);
    CHECK(r.value == doctest::Approx(1.25).epsilon(1e-10));
    CHECK(r.argmin[0] == doctest::Approx(1.0));
    CHECK(r.argmin[1] == doctest::Approx(1.0));
  }
  SUBCASE("weights (2/11, 8/11)") {
    const auto r = minimize_over_block(m, m.blocks[0], Eigen::Vector2d(2.0 / 11.0, 8.0 / 11.0));
    REQUIRE(r.status == OracleStatus::Optimal);
    CHECK(r.value == doctest::Approx(10.0 / 11.0).epsilon(1e-10));
    CHECK(r.argmin[0] == doctest::Approx(1.0));
    CHECK(r.argmin[1] == doctest::Approx(1.0));
  }
  SUBCASE("zero weights give value zero") {
    const auto r = minimize_over_block(m, m.blocks[0], Eigen::Vector2d(0.0, 0.0));
    REQUIRE(r.status == OracleStatus::Optimal);
    CHECK(r.value == doctest::Approx(0.0));
    const auto report = evaluate_solution(
        m, std::vector<double>{r.argmin[0], r.argmin[1], 1.0, 2.0});
    // Only bounds/integrality apply to the first block's coordinates here.
    CHECK(r.argmin[0] >= 0.5);
    CHECK(r.argmin[0] <= 2.5);
    (void)report;
  }
}

TEST_CASE("solve_mip on the coupled boxes model finds 8") {
  const auto m = coupled_boxes_model();
  const auto r = solve_mip(m);
  REQUIRE(r.status == OracleStatus::Optimal);
  CHECK(r.value == doctest::Approx(8.0));
  const std::vector<double> x(r.argmin.data(), r.argmin.data() + r.argmin.size());
  const auto report = evaluate_solution(m, x);
  CHECK(report.feasible);
  CHECK(report.objective == doctest::Approx(8.0));
}

TEST_CASE("dropping integrality reproduces the LP relaxation") {
  auto m = coupled_boxes_model();
  for (std::size_t i = 0; i < m.integrality.size(); ++i) m.integrality[i] = false;
  for (auto& b : m.blocks) b.integrality.assign(b.integrality.size(), false);
  const auto r = solve_mip(m);
  const auto lp = solve_lp(natural_lp_relaxation(m));
  REQUIRE(r.status == OracleStatus::Optimal);
  REQUIRE(lp.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(lp.objective).epsilon(1e-9));
  CHECK(r.value == doctest::Approx(7.0));
}

TEST_CASE("infeasible toy model") {
  BlockStructuredMip m = make_model(1, {0.0}, {-kInfinity}, {kInfinity}, {false});
  m.add_linking({{{0, 1.0}}, RowSense::GreaterEqual, 1.0});
  m.add_linking({{{0, 1.0}}, RowSense::LessEqual, 0.0});
  CHECK(solve_mip(m).status == OracleStatus::Infeasible);
}

TEST_CASE("unbounded pricing returns an improving ray") {
  BlockStructuredMip m = make_model(1, {0.0}, {0.0}, {kInfinity}, {true});
  m.add_block({0});
  const auto r = minimize_over_block(m, m.blocks[0], Eigen::VectorXd::Constant(1, -1.0));
  REQUIRE(r.status == OracleStatus::Unbounded);
  REQUIRE(r.ray.size() == 1);
  CHECK(r.ray[0] > 0.0);
  CHECK(-1.0 * r.ray[0] < 0.0);  // weights'ray < 0
}

TEST_CASE("pricing equals brute enumeration on random blocks") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto m = random_loosely_coupled(seed);
    Rng rng(seed * 97 + 1);
    for (const auto& block : m.blocks) {
      Eigen::VectorXd w(block.size());
      for (int l = 0; l < block.size(); ++l) w[l] = static_cast<double>(rng.uniform_int(-4, 4));
      const auto got = minimize_over_block(m, block, w);
      const auto want = brute_block_min(m, block, w);
      if (!want.has_value()) {
        CHECK(got.status == OracleStatus::Infeasible);
        continue;
      }
      REQUIRE_MESSAGE(got.status == OracleStatus::Optimal, "seed ", seed);
      CHECK_MESSAGE(got.value == doctest::Approx(*want).epsilon(1e-10), "seed ", seed);
      CHECK(w.dot(got.argmin) == doctest::Approx(got.value).epsilon(1e-10));
    }
  }
}

TEST_CASE("full MIP equals brute enumeration on random loosely coupled models") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto m = random_loosely_coupled(seed + 100);
    const auto got = solve_mip(m);
    const auto want = brute_mip_min(m);
    if (!want.has_value()) {
      CHECK_MESSAGE(got.status == OracleStatus::Infeasible, "seed ", seed);
      continue;
    }
    REQUIRE_MESSAGE(got.status == OracleStatus::Optimal, "seed ", seed);
    CHECK_MESSAGE(got.value == doctest::Approx(*want).epsilon(1e-9), "seed ", seed);
  }
}

TEST_CASE("D_j is concave in the weights") {
  const auto m = coupled_boxes_model();
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::Vector2d p1(rng.uniform(-3, 3), rng.uniform(-3, 3));
    Eigen::Vector2d p2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const double t = rng.uniform(0.0, 1.0);
    const Eigen::Vector2d mix = t * p1 + (1.0 - t) * p2;
    const double d1 = minimize_over_block(m, m.blocks[0], p1).value;
    const double d2 = minimize_over_block(m, m.blocks[0], p2).value;
    const double dm = minimize_over_block(m, m.blocks[0], mix).value;
    CHECK(dm >= t * d1 + (1.0 - t) * d2 - 1e-9);
  }
}

TEST_CASE("pricing argmin is a supergradient of D_j") {
  const auto m = coupled_boxes_model();
  Rng rng(78);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::Vector2d p(rng.uniform(-3, 3), rng.uniform(-3, 3));
    Eigen::Vector2d q(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const auto at_p = minimize_over_block(m, m.blocks[0], p);
    const auto at_q = minimize_over_block(m, m.blocks[0], q);
    REQUIRE(at_p.status == OracleStatus::Optimal);
    CHECK(at_q.value <= at_p.value + (q - p).dot(at_p.argmin) + 1e-9);
  }
}

TEST_CASE("node limit yields LimitReached with a valid bound") {
  const auto m = coupled_boxes_model();
  OracleLimits limits;
  limits.node_limit = 1;
  const auto r = solve_mip(m, limits);
  CHECK(r.status == OracleStatus::LimitReached);
  CHECK(r.best_bound <= 8.0 + 1e-9);
  CHECK(r.node_count <= 1);
}

TEST_CASE("cutoff at the optimum proves optimality without an incumbent") {
  const auto m = coupled_boxes_model();
  OracleLimits limits;
  limits.cutoff = 8.0;
  const auto r = solve_mip(m, limits);
  CHECK(r.status == OracleStatus::Optimal);
  CHECK(r.value == doctest::Approx(8.0));
}
