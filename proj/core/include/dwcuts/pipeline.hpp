// SPDX-License-Identifier: Apache-2.0
//
// End-to-end drivers: formulation variants (original model, objective cut,
// last-iteration block cuts, strengthened cuts, tilted cuts), the hybrid
// restart rule with its labeling scheme, and the benchmark harness.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dwcuts/cuts.hpp"
#include "dwcuts/lagrangian.hpp"
#include "dwcuts/model.hpp"
#include "dwcuts/oracle.hpp"

namespace dwcuts {

enum class VariantTag { Mip, Obj, Dwb, Str, Dkt };

std::string to_string(VariantTag tag);
VariantTag variant_from_string(const std::string& s);

struct Formulation {
  VariantTag tag = VariantTag::Mip;
  int tilt_depth = 0;
  BlockStructuredMip model;  // original rows plus cuts appended as linking rows
  std::vector<Cut> cuts;
  std::vector<std::pair<int, double>> fixings;  // bound tightenings from strengthening
  int zero_cuts_dropped = 0;
};

// dual is required for Dwb/Str/Dkt (MissingDualError otherwise); dw_bound
// is required for Obj. Dkt needs tilt_depth >= 1.
Formulation build_formulation(const BlockStructuredMip& model, VariantTag tag,
                              const DualPoint* dual, double dw_bound, int tilt_depth = 0);

enum class HybridDecision { Stay, Switch };

// "(z_D - z_LB) / z_UB > 0.05%" with ties staying; InvalidBoundsError when
// z_UB is zero or not finite, or the bounds are crossed.
HybridDecision hybrid_decide(double z_d, double z_lb, double z_ub);

struct SolveStats {
  bool solved = false;
  double seconds = 0.0;
  long nodes = 0;
  double gap = kInfinity;   // (value - bound) / |value|
  double value = kInfinity; // incumbent objective
  double bound = -kInfinity;
};

SolveStats stats_of(const OracleResult& result, double seconds);

// Labeling rules over equal-budget runs: strengthened-only solve, gap
// smaller by at least 0.01%, or time reduced by 10% or more.
bool label_instance(const SolveStats& mip_stats, const SolveStats& str_stats);

struct HybridOptions {
  DualSolveOptions dual;
  OracleLimits phase2_limits{60.0, 50000, kInfinity};
  std::optional<double> phase1_time_limit;  // overrides the measured t_D
  std::optional<HybridDecision> decision_override;
};

struct HybridReport {
  double t_dual = 0.0;  // seconds spent on the Lagrangian dual
  double dw_bound = -kInfinity;
  SolveStats phase1;
  bool solved_in_phase1 = false;
  HybridDecision decision = HybridDecision::Stay;
  VariantTag phase2_variant = VariantTag::Mip;
  SolveStats phase2;
  double incumbent_value = kInfinity;
  Eigen::VectorXd incumbent;
};

// Step 1: level-method dual (t_D) and an original-formulation run capped at
// t_D, run back to back as a simulated parallel phase. Step 2: stop when
// solved; otherwise restart on the strengthened formulation when the rule
// says switch, else continue the original with the full budget. The phase-1
// incumbent is injected as a cutoff either way.
HybridReport run_hybrid(const BlockStructuredMip& model, const HybridOptions& options = {});

struct BenchVariant {
  VariantTag tag = VariantTag::Mip;
  int depth = 0;
};

struct BenchConfig {
  std::vector<std::string> instance_paths;
  int tkp_window = 0;  // 0 = instance default
  std::vector<BenchVariant> variants{{VariantTag::Mip, 0}, {VariantTag::Obj, 0},
                                     {VariantTag::Dwb, 0}, {VariantTag::Str, 0},
                                     {VariantTag::Dkt, 3}};
  OracleLimits limits{60.0, 50000, kInfinity};
  DualSolveOptions dual;
  bool degeneracy = true;
  std::uint64_t seed = 0;
};

struct VariantStats {
  std::string name;
  double lp_bound = kInfinity;
  SolveStats solve;
  double relative_degeneracy = 0.0;
};

struct BenchRow {
  std::string instance;
  bool ok = false;
  std::string error;
  double z_l = kInfinity;
  double z_d = -kInfinity;
  double t_d = 0.0;
  std::optional<double> r_l;
  std::vector<VariantStats> variants;
};

std::vector<BenchRow> run_benchmark(const BenchConfig& config);
void write_benchmark_csv(const std::vector<BenchRow>& rows, const BenchConfig& config,
                         const std::string& path);

}  // namespace dwcuts
