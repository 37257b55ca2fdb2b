// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace dwcuts {

// Lagrangian / restricted-master dual multipliers: one vector pi^j over each
// block's local variables, beta >= 0 over the linking rows, and optionally
// the convexity duals theta.
struct DualPoint {
  std::vector<Eigen::VectorXd> pi;
  Eigen::VectorXd beta;
  std::optional<Eigen::VectorXd> theta;
};

}  // namespace dwcuts
