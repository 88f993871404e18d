#include "egoloc/assignment.hpp"

#include <limits>

#include "egoloc/core.hpp"

namespace egoloc {

namespace {

// Requires rows <= cols. Indices are 1-based internally; column 0 is the
// virtual source of each augmenting path.
std::vector<int> hungarian(const Eigen::Ref<const Eigen::MatrixXd> &cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> owner(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = owner[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (owner[j] != 0) row_to_col[owner[j] - 1] = j - 1;
  return row_to_col;
}

} // namespace

Assignment solve_min_assignment(const Eigen::Ref<const Eigen::MatrixXd> &cost) {
  if (!cost.allFinite()) throw Error("assignment costs must be finite");
  Assignment out;
  out.row_to_col.assign(static_cast<std::size_t>(cost.rows()), -1);
  if (cost.rows() == 0 || cost.cols() == 0) return out;

  if (cost.rows() <= cost.cols()) {
    out.row_to_col = hungarian(cost);
  } else {
    const Eigen::MatrixXd transposed = cost.transpose();
    const std::vector<int> col_to_row = hungarian(transposed);
    for (std::size_t j = 0; j < col_to_row.size(); ++j)
      out.row_to_col[static_cast<std::size_t>(col_to_row[j])] = static_cast<int>(j);
  }
  for (std::size_t i = 0; i < out.row_to_col.size(); ++i)
    if (out.row_to_col[i] >= 0) out.total += cost(static_cast<Eigen::Index>(i), out.row_to_col[i]);
  return out;
}

Assignment solve_max_assignment(const Eigen::Ref<const Eigen::MatrixXd> &weight) {
  Assignment out = solve_min_assignment(-weight);
  out.total = -out.total;
  return out;
}

} // namespace egoloc
