#pragma once

#include <vector>

#include <Eigen/Dense>

namespace egoloc {

struct Assignment {
  // row_to_col[i] is the column matched to row i, or -1 when row i is unmatched
  // (only possible when there are more rows than columns).
  std::vector<int> row_to_col;
  double total = 0.0;
};

// Minimum-cost one-to-one assignment on a rectangular cost matrix, matching
// min(rows, cols) pairs. Shortest augmenting path with potentials, O(n^2 m).
Assignment solve_min_assignment(const Eigen::Ref<const Eigen::MatrixXd> &cost);

// Same, maximizing the total weight.
Assignment solve_max_assignment(const Eigen::Ref<const Eigen::MatrixXd> &weight);

} // namespace egoloc
