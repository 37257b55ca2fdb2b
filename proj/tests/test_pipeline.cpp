#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dwcuts/dw.hpp"
#include "dwcuts/instances.hpp"
#include "dwcuts/pipeline.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/random_models.hpp"

using namespace dwcuts;
using namespace dwcuts::testsupport;

TEST_CASE("formulation variants on the coupled boxes model") {
  const auto m = coupled_boxes_model();
  const auto dw = run_dw(m);
  REQUIRE(dw.status == DwStatus::Converged);

  SUBCASE("MIP leaves the model untouched") {
    const auto f = build_formulation(m, VariantTag::Mip, nullptr, 0.0);
    CHECK(f.model.num_linking() == m.num_linking());
    CHECK(f.cuts.empty());
  }
  SUBCASE("OBJ adds exactly one row c'x >= 8") {
    const auto f = build_formulation(m, VariantTag::Obj, nullptr, dw.dw_bound);
    REQUIRE(f.model.num_linking() == m.num_linking() + 1);
    const auto& row = f.model.linking.back();
    CHECK(row.rhs == doctest::Approx(8.0).epsilon(1e-7));
    CHECK(row.terms.size() == 4);
  }
  SUBCASE("DWB adds at most q rows") {
    const auto f = build_formulation(m, VariantTag::Dwb, &dw.dual, dw.dw_bound);
    CHECK(f.model.num_linking() <= m.num_linking() + m.num_blocks());
    CHECK(static_cast<int>(f.cuts.size()) + f.zero_cuts_dropped == m.num_blocks());
  }
  SUBCASE("DkT(3) on a q=2 model adds at most 16 rows") {
    const auto f = build_formulation(m, VariantTag::Dkt, &dw.dual, dw.dw_bound, 3);
    CHECK(f.model.num_linking() - m.num_linking() <= 2 * 8);
  }
  SUBCASE("cut variants require a dual") {
    CHECK_THROWS_AS((void)build_formulation(m, VariantTag::Dwb, nullptr, 0.0), MissingDualError);
    CHECK_THROWS_AS((void)build_formulation(m, VariantTag::Str, nullptr, 0.0), MissingDualError);
  }
}

TEST_CASE("hybrid decision boundary") {
  // Ratios measured against z_UB = 10000.
  CHECK(hybrid_decide(6.0, 0.0, 10000.0) == HybridDecision::Switch);   // 0.06%
  CHECK(hybrid_decide(4.0, 0.0, 10000.0) == HybridDecision::Stay);     // 0.04%
  CHECK(hybrid_decide(5.0, 0.0, 10000.0) == HybridDecision::Stay);     // exactly 0.05%
  CHECK(hybrid_decide(3.0, 5.0, 10000.0) == HybridDecision::Stay);     // z_LB above z_D
  CHECK_THROWS_AS((void)hybrid_decide(1.0, 0.0, 0.0), InvalidBoundsError);
  CHECK_THROWS_AS((void)hybrid_decide(1.0, 2.0, 1.0), InvalidBoundsError);
  CHECK_THROWS_AS((void)hybrid_decide(1.0, 0.0, kInfinity), InvalidBoundsError);
}

TEST_CASE("labeling rules") {
  SolveStats solved_fast{true, 10.0, 100, 0.0, -5.0, -5.0};
  SolveStats solved_slow{true, 100.0, 1000, 0.0, -5.0, -5.0};
  SolveStats open_small_gap{false, 600.0, 5000, 0.001, -5.0, -5.5};
  SolveStats open_large_gap{false, 600.0, 5000, 0.01, -5.0, -6.0};

  CHECK(label_instance(open_large_gap, solved_fast));          // rule 1
  CHECK_FALSE(label_instance(solved_fast, open_large_gap));
  CHECK(label_instance(open_large_gap, open_small_gap));       // rule 2
  CHECK_FALSE(label_instance(open_small_gap, open_large_gap));
  CHECK(label_instance(solved_slow, solved_fast));             // rule 3: 10x faster
  SolveStats marginal = solved_slow;
  marginal.seconds = 95.0;  // only 5% faster than 100s
  CHECK_FALSE(label_instance(solved_slow, marginal));
  CHECK_FALSE(label_instance(solved_fast, solved_fast));       // identical stats
}

TEST_CASE("bound dominance and validity across variants") {
  int with_gap = 0;
  for (std::uint64_t seed = 1; seed <= 14; ++seed) {
    const auto m = random_loosely_coupled(seed);
    if (!hull_lp_bound(m).has_value()) continue;
    const auto dw = run_dw(m);
    REQUIRE(dw.status == DwStatus::Converged);
    const auto natural = solve_lp(natural_lp_relaxation(m));
    REQUIRE(natural.status == LpStatus::Optimal);
    const double z_l = natural.objective;
    const double z_d = dw.dw_bound;

    const auto base = solve_mip(m);
    REQUIRE(base.status == OracleStatus::Optimal);

    for (const auto tag : {VariantTag::Obj, VariantTag::Dwb, VariantTag::Str, VariantTag::Dkt}) {
      const int depth = tag == VariantTag::Dkt ? 2 : 0;
      const auto f = build_formulation(m, tag, &dw.dual, z_d, depth);
      const auto lp = solve_lp(natural_lp_relaxation(f.model));
      REQUIRE_MESSAGE(lp.status == LpStatus::Optimal, "seed ", seed, " tag ", to_string(tag));
      CHECK_MESSAGE(std::abs(lp.objective - std::max(z_l, z_d)) <= 1e-6 * (1.0 + std::abs(z_d)),
                    "seed ", seed, " tag ", to_string(tag), " bound ", lp.objective, " zd ", z_d,
                    " zl ", z_l);
      // Validity: the augmented MIP has the same optimum.
      const auto augmented = solve_mip(f.model);
      REQUIRE_MESSAGE(augmented.status == OracleStatus::Optimal, "seed ", seed);
      CHECK_MESSAGE(augmented.value == doctest::Approx(base.value).epsilon(1e-9), "seed ", seed,
                    " tag ", to_string(tag));
    }
    if (z_d > z_l + 1e-6) ++with_gap;
  }
  CHECK(with_gap >= 3);  // the suite must actually exercise gap instances
}

TEST_CASE("hybrid runs end to end") {
  const auto m = coupled_boxes_model();
  SUBCASE("ample phase-1 budget solves in phase 1") {
    HybridOptions options;
    options.phase1_time_limit = 30.0;
    const auto report = run_hybrid(m, options);
    CHECK(report.solved_in_phase1);
    CHECK(report.incumbent_value == doctest::Approx(8.0));
    CHECK(report.phase2.nodes == 0);
  }
  SUBCASE("forced switch still reaches the optimum via STR") {
    HybridOptions options;
    options.phase1_time_limit = 0.0;  // phase 1 can explore no nodes
    options.decision_override = HybridDecision::Switch;
    const auto report = run_hybrid(m, options);
    CHECK_FALSE(report.solved_in_phase1);
    CHECK(report.phase2_variant == VariantTag::Str);
    CHECK(report.incumbent_value == doctest::Approx(8.0));
  }
  SUBCASE("the incumbent never degrades") {
    HybridOptions options;
    options.phase1_time_limit = 0.5;
    const auto report = run_hybrid(m, options);
    if (report.phase1.solved) CHECK(report.incumbent_value <= report.phase1.value + 1e-9);
    CHECK(report.incumbent_value == doctest::Approx(8.0));
  }
}

TEST_CASE("benchmark harness") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "dwcuts_bench").string();
  fs::create_directories(dir);

  SUBCASE("empty corpus gives a header-only CSV") {
    BenchConfig config;
    const auto rows = run_benchmark(config);
    CHECK(rows.empty());
    const std::string csv = dir + "/empty.csv";
    write_benchmark_csv(rows, config, csv);
    std::ifstream in(csv);
    std::string line;
    int count = 0;
    while (std::getline(in, line)) ++count;
    CHECK(count == 1);
    std::remove(csv.c_str());
  }
  SUBCASE("single-instance corpus reports z_l = 7, z_d = 8") {
    const std::string path = dir + "/boxes.json";
    write_instance(coupled_boxes_model(), path);
    BenchConfig config;
    config.instance_paths = {path};
    config.limits.node_limit = 10000;
    config.limits.time_limit = 30.0;
    const auto rows = run_benchmark(config);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].ok);
    CHECK(rows[0].z_l == doctest::Approx(7.0));
    CHECK(rows[0].z_d == doctest::Approx(8.0).epsilon(1e-6));
    REQUIRE(rows[0].r_l.has_value());
    CHECK(*rows[0].r_l == doctest::Approx(0.125).epsilon(1e-5));
    REQUIRE(rows[0].variants.size() == 5);
    // All cut-bearing variants hit the DW bound; MIP keeps the LP bound.
    CHECK(rows[0].variants[0].lp_bound == doctest::Approx(7.0));
    for (std::size_t v = 1; v < 5; ++v)
      CHECK(rows[0].variants[v].lp_bound == doctest::Approx(8.0).epsilon(1e-6));
    std::remove(path.c_str());
  }
  SUBCASE("failures are logged per instance and the run continues") {
    const std::string good = dir + "/good.json";
    write_instance(coupled_boxes_model(), good);
    BenchConfig config;
    config.instance_paths = {dir + "/missing.json", good};
    const auto rows = run_benchmark(config);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].ok);
    CHECK(rows[1].ok);
    std::remove(good.c_str());
  }
  SUBCASE("deterministic modulo timing columns") {
    const std::string path = dir + "/det.json";
    write_instance(build_mkap_model(generate_mkap({2, 2, 4}, Correlation::Strong, 3)), path);
    BenchConfig config;
    config.instance_paths = {path};
    config.limits.time_limit = kInfinity;  // node budget only, for determinism
    config.limits.node_limit = 5000;
    const auto a = run_benchmark(config);
    const auto b = run_benchmark(config);
    REQUIRE(a.size() == b.size());
    REQUIRE(a[0].ok);
    REQUIRE(b[0].ok);
    CHECK(a[0].z_l == b[0].z_l);
    CHECK(a[0].z_d == b[0].z_d);
    for (std::size_t v = 0; v < a[0].variants.size(); ++v) {
      CHECK(a[0].variants[v].lp_bound == b[0].variants[v].lp_bound);
      CHECK(a[0].variants[v].solve.nodes == b[0].variants[v].solve.nodes);
      CHECK(a[0].variants[v].solve.value == b[0].variants[v].solve.value);
      CHECK(a[0].variants[v].relative_degeneracy == b[0].variants[v].relative_degeneracy);
    }
    std::remove(path.c_str());
  }
}
