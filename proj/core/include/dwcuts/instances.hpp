// SPDX-License-Identifier: Apache-2.0
//
// Instance generation and file I/O.
//
// MKAP: items carry profits and weights and belong to exactly one class;
// each knapsack may host at most one class. One block per (knapsack, class)
// pair with the capacity row w'x <= C_i y, so the blocks are disjoint.
//
// TKP: items are active on [s_i, t_i); every time s_j induces a knapsack
// row over the items active then. Blocks take B consecutive rows each and
// the variable supports overlap.

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dwcuts/cuts.hpp"
#include "dwcuts/model.hpp"

namespace dwcuts {

enum class Correlation { Uncorrelated, Weak, Strong };

std::string to_string(Correlation c);
Correlation correlation_from_string(const std::string& s);

struct MkapSizes {
  int num_classes = 0;   // |K|
  int num_knapsacks = 0;  // |M|
  int num_items = 0;      // |N|
};

struct MkapInstance {
  MkapSizes sizes;
  std::vector<double> profits;            // per item
  std::vector<double> weights;            // per item
  std::vector<double> capacities;         // per knapsack
  std::vector<std::vector<int>> classes;  // S_k, equal-size partition of the items
  Correlation correlation = Correlation::Uncorrelated;
  std::uint64_t seed = 0;
};

// Weights uniform in [10, 1000]; profits by correlation type; capacities
// 0.5 * total weight / |M|, perturbed +-10% per knapsack. Throws when |N|
// is not divisible by |K|.
MkapInstance generate_mkap(const MkapSizes& sizes, Correlation correlation, std::uint64_t seed);

// Variables: x(i,j) = i*N + j, then y(i,k) = M*N + i*K + k; all binary.
// Objective: minimize -sum p_j x_ij. Linking: per-item assignment rows and
// per-knapsack class rows. One block per (i,k).
BlockStructuredMip build_mkap_model(const MkapInstance& inst);

struct TkpInstance {
  int num_items = 0;
  std::vector<double> profits;
  std::vector<double> weights;
  std::vector<int> start;   // s_i
  std::vector<int> finish;  // t_i, with s_i < t_i
  double capacity = 0.0;
  int default_window = 3;   // block size B used when none is requested
};

TkpInstance generate_tkp(int num_items, std::uint64_t seed);

// S_j = {i : s_i <= s_j and t_i > s_j} per item j.
std::vector<std::vector<int>> tkp_active_sets(const TkpInstance& inst);

// Binary model, no linking rows; block k holds rows j in
// [(k-1)B, min(kB, n)) over the union of their active sets.
BlockStructuredMip build_tkp_model(const TkpInstance& inst, int window);

using InstancePayload = std::variant<MkapInstance, TkpInstance, BlockStructuredMip>;

void write_instance(const InstancePayload& payload, const std::string& path);
InstancePayload read_instance(const std::string& path);

// Model for any payload kind; window applies to TKP payloads (0 = default).
BlockStructuredMip model_of(const InstancePayload& payload, int window = 0);

// CPLEX-style LP file: minimize objective, linking rows, block rows by
// block, appended cuts in creation order, bounds, integer markers.
void export_lp_file(const BlockStructuredMip& model, const std::vector<Cut>& cuts,
                    const std::string& path);

// Cut list as JSON: block id, sparse coefficients, rhs, origin, lineage.
void write_cuts_json(const std::vector<Cut>& cuts, const std::string& path);
std::vector<Cut> read_cuts_json(const std::string& path);

}  // namespace dwcuts
