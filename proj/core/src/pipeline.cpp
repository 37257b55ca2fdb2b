// SPDX-License-Identifier: Apache-2.0

#include "dwcuts/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "dwcuts/analysis.hpp"
#include "dwcuts/instances.hpp"

namespace dwcuts {

using Clock = std::chrono::steady_clock;

std::string to_string(VariantTag tag) {
  switch (tag) {
    case VariantTag::Mip:
      return "MIP";
    case VariantTag::Obj:
      return "OBJ";
    case VariantTag::Dwb:
      return "DWB";
    case VariantTag::Str:
      return "STR";
    case VariantTag::Dkt:
      return "DKT";
  }
  return "?";
}

VariantTag variant_from_string(const std::string& s) {
  std::string u = s;
  for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "MIP") return VariantTag::Mip;
  if (u == "OBJ") return VariantTag::Obj;
  if (u == "DWB") return VariantTag::Dwb;
  if (u == "STR") return VariantTag::Str;
  if (u == "DKT") return VariantTag::Dkt;
  throw ParseError("unknown formulation variant: " + s);
}

Formulation build_formulation(const BlockStructuredMip& model, VariantTag tag,
                              const DualPoint* dual, double dw_bound, int tilt_depth) {
  Formulation out;
  out.tag = tag;
  out.tilt_depth = tilt_depth;
  out.model = model;
  if (tag == VariantTag::Mip) return out;

  CutFactory factory(model);
  if (tag == VariantTag::Obj) {
    out.cuts.push_back(factory.objective_cut(dw_bound));
  } else {
    if (dual == nullptr)
      throw MissingDualError("variant " + to_string(tag) + " needs a Wolfe-feasible dual");
    if (tag == VariantTag::Dkt && tilt_depth < 1)
      throw Error("depth-tilted variant needs tilt_depth >= 1");
    const LastIterationCuts base = factory.last_iteration_cuts(*dual);
    out.zero_cuts_dropped = base.zero_cuts;
    for (const auto& cut : base.cuts) {
      if (tag == VariantTag::Dwb) {
        out.cuts.push_back(cut);
        continue;
      }
      const StrengthenResult strengthened = factory.strengthen_coefficients(cut);
      for (const auto& fix : strengthened.fixings) out.fixings.push_back(fix);
      if (tag == VariantTag::Str) {
        out.cuts.push_back(strengthened.cut);
        continue;
      }
      for (auto& leaf : factory.tilt(strengthened.cut, tilt_depth)) out.cuts.push_back(leaf);
    }
  }

  for (const auto& cut : out.cuts) out.model.linking.push_back(cut.as_row());
  for (const auto& [var, value] : out.fixings) {
    out.model.lower[static_cast<std::size_t>(var)] =
        std::max(out.model.lower[static_cast<std::size_t>(var)], value);
    out.model.upper[static_cast<std::size_t>(var)] =
        std::min(out.model.upper[static_cast<std::size_t>(var)], value);
  }
  return out;
}

HybridDecision hybrid_decide(double z_d, double z_lb, double z_ub) {
  if (!std::isfinite(z_ub) || z_ub == 0.0)
    throw InvalidBoundsError("hybrid rule needs a finite nonzero incumbent bound");
  if (z_lb > z_ub + 1e-6) throw InvalidBoundsError("crossed bounds: z_LB > z_UB");
  return (z_d - z_lb) / z_ub > 0.0005 ? HybridDecision::Switch : HybridDecision::Stay;
}

SolveStats stats_of(const OracleResult& result, double seconds) {
  SolveStats stats;
  stats.solved = result.status == OracleStatus::Optimal;
  stats.seconds = seconds;
  stats.nodes = result.node_count;
  stats.value = result.value;
  stats.bound = result.best_bound;
  stats.gap = stats.solved ? 0.0 : result.gap();
  return stats;
}

bool label_instance(const SolveStats& mip_stats, const SolveStats& str_stats) {
  if (str_stats.solved && !mip_stats.solved) return true;
  if (!str_stats.solved && !mip_stats.solved) return str_stats.gap <= mip_stats.gap - 0.0001;
  if (str_stats.solved && mip_stats.solved) return str_stats.seconds <= 0.9 * mip_stats.seconds;
  return false;
}

HybridReport run_hybrid(const BlockStructuredMip& model, const HybridOptions& options) {
  HybridReport report;

  const auto dual_start = Clock::now();
  const DualResult dual = solve_dual_level(model, options.dual);
  report.t_dual = std::chrono::duration<double>(Clock::now() - dual_start).count();
  report.dw_bound = dual.lb;

  // Simulated phase-1 run of the original formulation, capped at t_D.
  OracleLimits phase1_limits;
  phase1_limits.time_limit = options.phase1_time_limit.value_or(std::max(report.t_dual, 1e-3));
  const auto phase1_start = Clock::now();
  const OracleResult phase1 = solve_mip(model, phase1_limits);
  report.phase1 = stats_of(
      phase1, std::chrono::duration<double>(Clock::now() - phase1_start).count());
  if (phase1.has_incumbent()) {
    report.incumbent = phase1.argmin;
    report.incumbent_value = phase1.value;
  }

  if (phase1.status == OracleStatus::Optimal) {
    report.solved_in_phase1 = true;
    report.decision = HybridDecision::Stay;
    return report;
  }

  report.decision = options.decision_override
                        ? *options.decision_override
                        : hybrid_decide(report.dw_bound, phase1.best_bound, phase1.value);

  BlockStructuredMip phase2_model = model;
  report.phase2_variant = VariantTag::Mip;
  if (report.decision == HybridDecision::Switch) {
    const Formulation str =
        build_formulation(model, VariantTag::Str, &dual.best_dual, dual.lb, 0);
    phase2_model = str.model;
    report.phase2_variant = VariantTag::Str;
  }

  OracleLimits phase2_limits = options.phase2_limits;
  if (std::isfinite(report.incumbent_value))
    phase2_limits.cutoff = std::min(phase2_limits.cutoff, report.incumbent_value);
  const auto phase2_start = Clock::now();
  const OracleResult phase2 = solve_mip(phase2_model, phase2_limits);
  report.phase2 = stats_of(
      phase2, std::chrono::duration<double>(Clock::now() - phase2_start).count());

  if (phase2.has_incumbent() && phase2.value < report.incumbent_value) {
    report.incumbent = phase2.argmin;
    report.incumbent_value = phase2.value;
  }
  return report;
}

std::vector<BenchRow> run_benchmark(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  for (const auto& path : config.instance_paths) {
    BenchRow row;
    row.instance = path;
    try {
      const BlockStructuredMip model = model_of(read_instance(path), config.tkp_window);
      const auto validation = validate_model(model);
      if (!validation.valid) throw Error("invalid model: " + validation.errors.front());

      const LpSolution natural = solve_lp(natural_lp_relaxation(model));
      if (natural.status != LpStatus::Optimal)
        throw Error("natural LP relaxation not optimal");
      row.z_l = natural.objective;

      const auto dual_start = Clock::now();
      const DualResult dual = solve_dual_level(model, config.dual);
      row.t_d = std::chrono::duration<double>(Clock::now() - dual_start).count();
      row.z_d = dual.lb;
      if (std::abs(row.z_d) > 1e-12) row.r_l = gap_report(row.z_d, row.z_l).r_l;

      for (const auto& spec : config.variants) {
        VariantStats vs;
        vs.name = to_string(spec.tag) + (spec.tag == VariantTag::Dkt
                                             ? std::to_string(spec.depth)
                                             : "");
        const Formulation form =
            build_formulation(model, spec.tag, &dual.best_dual, dual.lb, spec.depth);
        const LpProblem relaxation = natural_lp_relaxation(form.model);
        const LpSolution lp = solve_lp(relaxation);
        if (lp.status == LpStatus::Optimal) {
          vs.lp_bound = lp.objective;
          if (config.degeneracy) {
            const auto duals = inequality_duals(relaxation, lp);
            vs.relative_degeneracy = degeneracy_level(duals, relaxation.num_cols()).relative;
          }
        }
        const auto solve_start = Clock::now();
        const OracleResult solved = solve_mip(form.model, config.limits);
        vs.solve = stats_of(
            solved, std::chrono::duration<double>(Clock::now() - solve_start).count());
        row.variants.push_back(std::move(vs));
      }
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_benchmark_csv(const std::vector<BenchRow>& rows, const BenchConfig& config,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "instance,status,z_l,z_d,t_d,r_l_pct";
  for (const auto& spec : config.variants) {
    const std::string name =
        to_string(spec.tag) + (spec.tag == VariantTag::Dkt ? std::to_string(spec.depth) : "");
    out << ',' << name << "_bound," << name << "_solved," << name << "_time," << name << "_nodes,"
        << name << "_gap," << name << "_degen_pct";
  }
  out << '\n';
  for (const auto& row : rows) {
    out << row.instance << ',' << (row.ok ? "ok" : ("error: " + row.error));
    if (!row.ok) {
      out << '\n';
      continue;
    }
    out << ',' << row.z_l << ',' << row.z_d << ',' << row.t_d << ',';
    if (row.r_l) out << *row.r_l * 100.0;
    for (const auto& vs : row.variants) {
      out << ',' << vs.lp_bound << ',' << (vs.solve.solved ? 1 : 0) << ',' << vs.solve.seconds
          << ',' << vs.solve.nodes << ',' << vs.solve.gap << ',' << vs.relative_degeneracy * 100.0;
    }
    out << '\n';
  }
}

}  // namespace dwcuts
