#include "support/fixtures.hpp"

namespace dwcuts::testsupport {

BlockStructuredMip coupled_boxes_model() {
  BlockStructuredMip m = make_model(4, {1.0, 1.0, 2.0, 2.0}, {0.5, 0.5, 0.5, 0.5},
                                    {2.5, 2.5, 2.5, 2.5}, {true, true, true, true});
  m.add_linking({{{1, 1.0}, {3, 1.0}}, RowSense::GreaterEqual, 3.0, "r0"});
  m.add_linking({{{0, 3.0}, {1, 1.0}, {2, 3.0}, {3, 1.0}}, RowSense::GreaterEqual, 12.0, "r1"});
  m.add_block({0, 1});
  m.add_block({2, 3});
  return m;
}

DualPoint coupled_boxes_dual_a() {
  DualPoint d;
  d.pi.resize(2);
  d.pi[0] = Eigen::Vector2d(1.0, 0.25);
  d.pi[1] = Eigen::Vector2d(2.0, 1.25);
  d.beta = Eigen::Vector2d(0.75, 0.0);
  return d;
}

DualPoint coupled_boxes_dual_b() {
  DualPoint d;
  d.pi.resize(2);
  d.pi[0] = Eigen::Vector2d(2.0 / 11.0, 8.0 / 11.0);
  d.pi[1] = Eigen::Vector2d(13.0 / 11.0, 19.0 / 11.0);
  d.beta = Eigen::Vector2d(0.0, 3.0 / 11.0);
  return d;
}

LpProblem degenerate_corner_lp() {
  LpProblem lp;
  lp.add_free_col(1.0, "x1");
  lp.add_free_col(-1.0, "x2");
  lp.add_row({{{0, 1.0}, {1, 1.0}}, RowSense::GreaterEqual, 1.0, "r0"});
  lp.add_row({{{1, 1.0}}, RowSense::GreaterEqual, 1.0, "r1"});
  lp.add_row({{{1, -1.0}}, RowSense::GreaterEqual, -1.0, "r2"});
  return lp;
}

}  // namespace dwcuts::testsupport
