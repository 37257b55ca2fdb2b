// SPDX-License-Identifier: Apache-2.0
//
// dwcuts command-line driver.
//
//   generate    instance corpora (MKAP / TKP) with a manifest
//   bound       natural LP bound and DW bound with gap report
//   cuts        emit / strengthen / tilt block cuts to JSON
//   formulate   export an augmented formulation as an LP file
//   solve       run the internal branch-and-bound on a formulation
//   hybrid      simulated two-phase hybrid run
//   bench       benchmark harness over a corpus, CSV output

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "dwcuts/analysis.hpp"
#include "dwcuts/dw.hpp"
#include "dwcuts/instances.hpp"
#include "dwcuts/lagrangian.hpp"
#include "dwcuts/oracle.hpp"
#include "dwcuts/pipeline.hpp"

using namespace dwcuts;

namespace {

struct CommonInput {
  std::string instance;
  int window = 0;
};

BlockStructuredMip load_model(const CommonInput& in) {
  const auto payload = read_instance(in.instance);
  BlockStructuredMip model = model_of(payload, in.window);
  const auto validation = validate_model(model);
  if (!validation.valid) {
    for (const auto& e : validation.errors) std::cerr << "model error: " << e << '\n';
    throw Error("instance failed validation");
  }
  for (const auto& w : validation.warnings) std::cerr << "model warning: " << w << '\n';
  return model;
}

DualResult compute_dual(const BlockStructuredMip& model, const std::string& method,
                        const DualSolveOptions& options) {
  if (method == "kelley") return solve_dual_kelley(model, options);
  if (method == "dw") {
    const DwResult dw = run_dw(model);
    DualResult as_dual;
    as_dual.status = dw.status == DwStatus::Converged ? DualStatus::Converged
                                                      : DualStatus::IterationLimit;
    as_dual.lb = dw.dw_bound;
    as_dual.ub = dw.dw_bound;
    as_dual.best_dual = dw.dual;
    as_dual.iterations = dw.iterations;
    for (const auto& it : dw.trace)
      as_dual.trace.push_back({it.iteration, -kInfinity, it.master_objective, 0.0});
    return as_dual;
  }
  return solve_dual_level(model, options);
}

int run_generate(const std::string& kind, int classes, int knapsacks, int items,
                 const std::string& correlation, int count, std::uint64_t seed,
                 const std::string& out) {
  namespace fs = std::filesystem;
  std::vector<std::pair<std::string, std::string>> manifest;
  const bool corpus = count > 1;
  fs::path target(out);
  if (corpus) fs::create_directories(target);

  for (int c = 0; c < count; ++c) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(c);
    InstancePayload payload;
    std::string name;
    if (kind == "mkap") {
      payload = generate_mkap({classes, knapsacks, items}, correlation_from_string(correlation), s);
      name = "mkap_" + std::to_string(classes) + "_" + std::to_string(knapsacks) + "_" +
             std::to_string(items) + "_" + correlation + "_s" + std::to_string(s) + ".json";
    } else if (kind == "tkp") {
      payload = generate_tkp(items, s);
      name = "tkp_" + std::to_string(items) + "_s" + std::to_string(s) + ".json";
    } else {
      throw Error("generate supports kinds 'mkap' and 'tkp'");
    }
    const std::string path = corpus ? (target / name).string() : out;
    write_instance(payload, path);
    manifest.emplace_back(path, kind);
    std::cout << "wrote " << path << '\n';
  }
  if (corpus) {
    const std::string manifest_path = (target / "manifest.csv").string();
    std::ofstream mf(manifest_path);
    mf << "path,kind,seed\n";
    for (std::size_t i = 0; i < manifest.size(); ++i)
      mf << manifest[i].first << ',' << manifest[i].second << ',' << seed + i << '\n';
    std::cout << "wrote " << manifest_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dantzig-Wolfe bounds, block cuts, and augmented formulations"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "generate instances (corpus with --count > 1)");
  std::string gen_kind = "mkap", gen_corr = "uncorrelated", gen_out = "instance.json";
  int gen_classes = 2, gen_knapsacks = 2, gen_items = 8, gen_count = 1;
  std::uint64_t gen_seed = 1;
  generate->add_option("--kind", gen_kind, "mkap or tkp")->check(CLI::IsMember({"mkap", "tkp"}));
  generate->add_option("--classes", gen_classes, "MKAP |K|");
  generate->add_option("--knapsacks", gen_knapsacks, "MKAP |M|");
  generate->add_option("--items", gen_items, "item count |N|");
  generate->add_option("--correlation", gen_corr, "uncorrelated, weak, or strong")
      ->check(CLI::IsMember({"uncorrelated", "weak", "strong"}));
  generate->add_option("--count", gen_count, "number of instances (directory corpus when > 1)");
  generate->add_option("--seed", gen_seed, "base random seed");
  generate->add_option("-o,--out", gen_out, "output file, or directory for a corpus");

  // bound
  auto* bound = app.add_subcommand("bound", "natural LP bound and DW bound");
  CommonInput bound_in;
  std::string bound_method = "level", bound_trace;
  int bound_max_iter = 1000;
  bound->add_option("-i,--instance", bound_in.instance, "instance JSON")->required();
  bound->add_option("--window", bound_in.window, "TKP block window B");
  bound->add_option("--method", bound_method, "level, kelley, or dw")
      ->check(CLI::IsMember({"level", "kelley", "dw"}));
  bound->add_option("--max-iter", bound_max_iter, "dual iteration limit");
  bound->add_option("--trace", bound_trace, "write the iteration trace CSV here");

  // cuts
  auto* cuts_cmd = app.add_subcommand("cuts", "emit block cuts as JSON");
  CommonInput cuts_in;
  std::string cuts_variant = "dwb", cuts_out = "cuts.json", cuts_method = "level";
  int cuts_depth = 1;
  cuts_cmd->add_option("-i,--instance", cuts_in.instance, "instance JSON")->required();
  cuts_cmd->add_option("--window", cuts_in.window, "TKP block window B");
  cuts_cmd->add_option("--variant", cuts_variant, "dwb, str, or dkt")
      ->check(CLI::IsMember({"dwb", "str", "dkt"}));
  cuts_cmd->add_option("--depth", cuts_depth, "tilting depth for dkt");
  cuts_cmd->add_option("--method", cuts_method, "dual method: level, kelley, or dw");
  cuts_cmd->add_option("-o,--out", cuts_out, "output JSON path");

  // formulate
  auto* formulate = app.add_subcommand("formulate", "export a formulation as an LP file");
  CommonInput form_in;
  std::string form_variant = "STR", form_out = "model.lp", form_method = "level";
  int form_depth = 3;
  formulate->add_option("-i,--instance", form_in.instance, "instance JSON")->required();
  formulate->add_option("--window", form_in.window, "TKP block window B");
  formulate->add_option("--variant", form_variant, "MIP, OBJ, DWB, STR, or DKT");
  formulate->add_option("--depth", form_depth, "tilting depth for DKT");
  formulate->add_option("--method", form_method, "dual method: level, kelley, or dw");
  formulate->add_option("-o,--out", form_out, "output LP file");

  // solve
  auto* solve = app.add_subcommand("solve", "run the internal branch-and-bound");
  CommonInput solve_in;
  std::string solve_variant = "MIP", solve_method = "level";
  int solve_depth = 3;
  double solve_time = 60.0;
  long solve_nodes = 50000;
  solve->add_option("-i,--instance", solve_in.instance, "instance JSON")->required();
  solve->add_option("--window", solve_in.window, "TKP block window B");
  solve->add_option("--variant", solve_variant, "formulation to solve");
  solve->add_option("--depth", solve_depth, "tilting depth for DKT");
  solve->add_option("--method", solve_method, "dual method when cuts are needed");
  solve->add_option("--time-limit", solve_time, "seconds");
  solve->add_option("--node-limit", solve_nodes, "branch-and-bound nodes");

  // hybrid
  auto* hybrid = app.add_subcommand("hybrid", "simulated two-phase hybrid run");
  CommonInput hybrid_in;
  double hybrid_time = 60.0;
  long hybrid_nodes = 50000;
  hybrid->add_option("-i,--instance", hybrid_in.instance, "instance JSON")->required();
  hybrid->add_option("--window", hybrid_in.window, "TKP block window B");
  hybrid->add_option("--time-limit", hybrid_time, "phase-2 seconds");
  hybrid->add_option("--node-limit", hybrid_nodes, "phase-2 nodes");

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark a corpus to CSV");
  std::string bench_config, bench_out = "bench.csv";
  std::vector<std::string> bench_instances;
  double bench_time = 60.0;
  long bench_nodes = 50000;
  int bench_window = 0;
  std::uint64_t bench_seed = 0;
  bench->add_option("--config", bench_config, "JSON config (overrides the flags)");
  bench->add_option("-i,--instance", bench_instances, "instance JSON files");
  bench->add_option("--time-limit", bench_time, "per-variant seconds");
  bench->add_option("--node-limit", bench_nodes, "per-variant nodes");
  bench->add_option("--window", bench_window, "TKP block window B");
  bench->add_option("--seed", bench_seed, "recorded corpus seed");
  bench->add_option("-o,--out", bench_out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate)
      return run_generate(gen_kind, gen_classes, gen_knapsacks, gen_items, gen_corr, gen_count,
                          gen_seed, gen_out);

    if (*bound) {
      const auto model = load_model(bound_in);
      const auto lp = solve_lp(natural_lp_relaxation(model));
      if (lp.status != LpStatus::Optimal) throw Error("natural LP relaxation is not optimal");
      DualSolveOptions options;
      options.max_iter = bound_max_iter;
      const auto dual = compute_dual(model, bound_method, options);
      std::cout << "z_L = " << lp.objective << '\n';
      std::cout << "z_D = " << dual.lb << "  (" << bound_method << ", "
                << (dual.status == DualStatus::Converged     ? "converged"
                    : dual.status == DualStatus::QpFailure   ? "qp-failure"
                                                             : "iteration-limit")
                << " after " << dual.iterations << " iterations)\n";
      if (std::abs(dual.lb) > 1e-12) {
        const auto gaps = gap_report(dual.lb, lp.objective);
        std::cout << "r_L = " << gaps.r_l * 100.0 << "%\n";
      }
      if (!bound_trace.empty()) {
        write_dual_trace_csv(dual, bound_trace);
        std::cout << "trace written to " << bound_trace << '\n';
      }
      return 0;
    }

    if (*cuts_cmd) {
      const auto model = load_model(cuts_in);
      const auto dual = compute_dual(model, cuts_method, {});
      const VariantTag tag = cuts_variant == "dwb"   ? VariantTag::Dwb
                             : cuts_variant == "str" ? VariantTag::Str
                                                     : VariantTag::Dkt;
      const auto form = build_formulation(model, tag, &dual.best_dual, dual.lb,
                                          tag == VariantTag::Dkt ? cuts_depth : 0);
      write_cuts_json(form.cuts, cuts_out);
      std::cout << form.cuts.size() << " cuts written to " << cuts_out;
      if (form.zero_cuts_dropped > 0)
        std::cout << " (" << form.zero_cuts_dropped << " zero cuts dropped)";
      std::cout << '\n';
      return 0;
    }

    if (*formulate) {
      const auto model = load_model(form_in);
      const VariantTag tag = variant_from_string(form_variant);
      Formulation form;
      if (tag == VariantTag::Mip) {
        form = build_formulation(model, tag, nullptr, 0.0);
      } else {
        const auto dual = compute_dual(model, form_method, {});
        form = build_formulation(model, tag, &dual.best_dual, dual.lb,
                                 tag == VariantTag::Dkt ? form_depth : 0);
      }
      // The cuts already live in form.model's linking rows; export those.
      BlockStructuredMip original = model;
      export_lp_file(form.model, {}, form_out);
      (void)original;
      std::cout << "wrote " << form_out << " (" << form.cuts.size() << " cuts appended)\n";
      return 0;
    }

    if (*solve) {
      const auto model = load_model(solve_in);
      const VariantTag tag = variant_from_string(solve_variant);
      Formulation form;
      if (tag == VariantTag::Mip) {
        form = build_formulation(model, tag, nullptr, 0.0);
      } else {
        const auto dual = compute_dual(model, solve_method, {});
        form = build_formulation(model, tag, &dual.best_dual, dual.lb,
                                 tag == VariantTag::Dkt ? solve_depth : 0);
      }
      OracleLimits limits;
      limits.time_limit = solve_time;
      limits.node_limit = solve_nodes;
      const auto result = solve_mip(form.model, limits);
      std::cout << "status: "
                << (result.status == OracleStatus::Optimal      ? "optimal"
                    : result.status == OracleStatus::Infeasible ? "infeasible"
                    : result.status == OracleStatus::Unbounded  ? "unbounded"
                                                                : "limit-reached")
                << '\n';
      if (result.has_incumbent()) std::cout << "value: " << result.value << '\n';
      std::cout << "bound: " << result.best_bound << '\n';
      std::cout << "nodes: " << result.node_count << '\n';
      if (result.status == OracleStatus::LimitReached)
        std::cout << "gap: " << result.gap() * 100.0 << "%\n";
      return result.status == OracleStatus::Optimal ? 0 : 2;
    }

    if (*hybrid) {
      const auto model = load_model(hybrid_in);
      HybridOptions options;
      options.phase2_limits.time_limit = hybrid_time;
      options.phase2_limits.node_limit = hybrid_nodes;
      const auto report = run_hybrid(model, options);
      std::cout << "t_D: " << report.t_dual << " s, z_D: " << report.dw_bound << '\n';
      if (report.solved_in_phase1) {
        std::cout << "solved in phase 1, value " << report.incumbent_value << " after "
                  << report.phase1.nodes << " nodes\n";
        return 0;
      }
      std::cout << "phase 1: bound " << report.phase1.bound << ", incumbent "
                << report.phase1.value << '\n';
      std::cout << "decision: "
                << (report.decision == HybridDecision::Switch ? "switch to STR" : "stay on MIP")
                << '\n';
      std::cout << "phase 2 (" << to_string(report.phase2_variant) << "): "
                << (report.phase2.solved ? "solved" : "open") << ", value "
                << report.incumbent_value << ", nodes " << report.phase2.nodes << '\n';
      return 0;
    }

    if (*bench) {
      BenchConfig config;
      if (!bench_config.empty()) {
        std::ifstream in(bench_config);
        if (!in) throw Error("cannot open " + bench_config);
        nlohmann::json j;
        in >> j;
        config.instance_paths = j.value("instances", std::vector<std::string>{});
        config.limits.time_limit = j.value("time_limit", 60.0);
        config.limits.node_limit = j.value("node_limit", 50000L);
        config.tkp_window = j.value("window", 0);
        config.seed = j.value("seed", 0ULL);
        if (j.contains("variants")) {
          config.variants.clear();
          for (const auto& v : j.at("variants"))
            config.variants.push_back(
                {variant_from_string(v.at("tag").get<std::string>()), v.value("depth", 0)});
        }
      } else {
        config.instance_paths = bench_instances;
        config.limits.time_limit = bench_time;
        config.limits.node_limit = bench_nodes;
        config.tkp_window = bench_window;
        config.seed = bench_seed;
      }
      const auto rows = run_benchmark(config);
      write_benchmark_csv(rows, config, bench_out);
      int failures = 0;
      for (const auto& row : rows)
        if (!row.ok) {
          ++failures;
          std::cerr << "instance failed: " << row.instance << ": " << row.error << '\n';
        }
      std::cout << rows.size() << " rows written to " << bench_out << " (" << failures
                << " failures)\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
