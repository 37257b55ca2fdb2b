// SPDX-License-Identifier: Apache-2.0

#include "dwcuts/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace dwcuts {

BlockStructuredMip make_model(int n, std::vector<double> objective,
                              std::vector<double> lower, std::vector<double> upper,
                              std::vector<bool> integrality) {
  BlockStructuredMip m;
  m.n = n;
  m.objective = std::move(objective);
  m.lower = std::move(lower);
  m.upper = std::move(upper);
  m.integrality = std::move(integrality);
  return m;
}

namespace {

bool finite_terms(const SparseRow& row) {
  if (!std::isfinite(row.rhs)) return false;
  for (const auto& [idx, coef] : row.terms) {
    (void)idx;
    if (!std::isfinite(coef)) return false;
  }
  return true;
}

}  // namespace

ValidationReport validate_model(const BlockStructuredMip& model) {
  ValidationReport report;
  auto fail = [&](const std::string& msg) {
    report.valid = false;
    report.errors.push_back(msg);
  };

  const auto nsz = static_cast<std::size_t>(model.n);
  if (model.objective.size() != nsz) fail("objective length differs from n");
  if (model.lower.size() != nsz || model.upper.size() != nsz) fail("bound vectors differ from n");
  if (model.integrality.size() != nsz) fail("integrality vector differs from n");
  for (std::size_t i = 0; i < std::min(nsz, model.objective.size()); ++i) {
    if (!std::isfinite(model.objective[i])) fail("objective[" + std::to_string(i) + "] not finite");
  }
  for (std::size_t i = 0; i < std::min({nsz, model.lower.size(), model.upper.size()}); ++i) {
    if (std::isnan(model.lower[i]) || std::isnan(model.upper[i]))
      fail("bounds[" + std::to_string(i) + "] contain NaN");
    else if (model.lower[i] > model.upper[i])
      fail("bounds[" + std::to_string(i) + "] are crossed");
  }

  for (std::size_t r = 0; r < model.linking.size(); ++r) {
    const auto& row = model.linking[r];
    if (row.sense != RowSense::GreaterEqual) fail("linking[" + std::to_string(r) + "] not normalized to >=");
    if (!finite_terms(row)) fail("linking[" + std::to_string(r) + "] has non-finite data");
    for (const auto& [idx, coef] : row.terms) {
      (void)coef;
      if (!model.in_range(idx)) fail("linking[" + std::to_string(r) + "] references variable " + std::to_string(idx));
    }
  }

  std::set<std::vector<int>> seen_supports;
  for (int j = 0; j < model.num_blocks(); ++j) {
    const Block& block = model.blocks[static_cast<std::size_t>(j)];
    const std::string tag = "block[" + std::to_string(j) + "]";
    if (block.support.empty()) fail(tag + " is empty");
    if (block.integrality.size() != block.support.size()) fail(tag + " integrality length differs from |I(j)|");
    std::set<int> locals;
    for (int g : block.support) {
      if (!model.in_range(g)) fail(tag + " support index " + std::to_string(g) + " out of range");
      if (!locals.insert(g).second) fail(tag + " support repeats variable " + std::to_string(g));
    }
    for (std::size_t l = 0; l < block.support.size() && l < block.integrality.size(); ++l) {
      const int g = block.support[l];
      if (model.in_range(g) && model.integrality[static_cast<std::size_t>(g)] && !block.integrality[l])
        fail(tag + " drops the integrality of variable " + std::to_string(g));
    }
    for (std::size_t r = 0; r < block.rows.size(); ++r) {
      const auto& row = block.rows[r];
      const std::string rtag = tag + ".row[" + std::to_string(r) + "]";
      if (row.sense != RowSense::GreaterEqual) fail(rtag + " not normalized to >=");
      if (!finite_terms(row)) fail(rtag + " has non-finite data");
      for (const auto& [idx, coef] : row.terms) {
        (void)coef;
        if (idx < 0 || idx >= block.size()) fail(rtag + " references local index " + std::to_string(idx));
      }
    }
    std::vector<int> sorted = block.support;
    std::sort(sorted.begin(), sorted.end());
    if (!seen_supports.insert(sorted).second)
      report.warnings.push_back(tag + " duplicates another block's support");
  }

  if (model.blocks.empty()) report.warnings.push_back("no blocks");
  return report;
}

SolutionReport evaluate_solution(const BlockStructuredMip& model, std::span<const double> x,
                                 double feas_tol, double int_tol) {
  if (static_cast<int>(x.size()) != model.n)
    throw DimensionError("evaluate_solution: point has length " + std::to_string(x.size()) +
                         ", model has n=" + std::to_string(model.n));

  SolutionReport report;
  report.objective = model.objective_value(x);

  auto check_row = [&](const SparseRow& row, const std::string& id, std::span<const double> values) {
    const double v = row.violation(values);
    if (v > feas_tol) report.violated.push_back({id, v});
  };

  for (std::size_t r = 0; r < model.linking.size(); ++r)
    check_row(model.linking[r], "linking[" + std::to_string(r) + "]", x);

  std::vector<double> local;
  for (int j = 0; j < model.num_blocks(); ++j) {
    const Block& block = model.blocks[static_cast<std::size_t>(j)];
    local.assign(block.support.size(), 0.0);
    for (std::size_t l = 0; l < block.support.size(); ++l)
      local[l] = x[static_cast<std::size_t>(block.support[l])];
    for (std::size_t r = 0; r < block.rows.size(); ++r)
      check_row(block.rows[r], "block[" + std::to_string(j) + "].row[" + std::to_string(r) + "]", local);
  }

  for (int i = 0; i < model.n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    if (x[iu] < model.lower[iu] - feas_tol)
      report.violated.push_back({"lb[" + std::to_string(i) + "]", model.lower[iu] - x[iu]});
    if (x[iu] > model.upper[iu] + feas_tol)
      report.violated.push_back({"ub[" + std::to_string(i) + "]", x[iu] - model.upper[iu]});
    if (model.integrality[iu]) {
      const double frac = std::abs(x[iu] - std::round(x[iu]));
      if (frac > int_tol) report.violated.push_back({"int[" + std::to_string(i) + "]", frac});
    }
  }

  report.feasible = report.violated.empty();
  return report;
}

}  // namespace dwcuts
