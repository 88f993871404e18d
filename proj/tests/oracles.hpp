#pragma once

// Brute-force reference implementations. They share no code path with the
// library beyond its data types and are only meant for tiny inputs.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "egoloc/core.hpp"

namespace egoloc::oracle {

// Score every state path under the almost-identity transition matrix and
// return the best total log score.
inline double best_path_score(const Eigen::MatrixXd &log_emissions, int positive_count,
                              double epsilon, std::vector<int> *best_path = nullptr) {
  const int n = static_cast<int>(log_emissions.rows());
  const int s = static_cast<int>(log_emissions.cols());
  const double stay = std::log(1.0 - positive_count * epsilon);
  const double move = std::log(epsilon);
  std::vector<int> path(n, 0);
  double best = -INFINITY;
  while (true) {
    double score = log_emissions(0, path[0]);
    for (int t = 1; t < n; ++t) score += (path[t] == path[t - 1] ? stay : move) + log_emissions(t, path[t]);
    if (score > best) {
      best = score;
      if (best_path) *best_path = path;
    }
    int pos = n - 1;
    while (pos >= 0 && ++path[pos] == s) path[pos--] = 0;
    if (pos < 0) break;
  }
  return best;
}

// Window statistic evaluated directly from its definition.
inline double variation_ratio(const std::vector<int> &labels, int i, int k) {
  const int n = static_cast<int>(labels.size());
  std::map<int, int> counts;
  int size = 0;
  for (int j = i - k / 2; j <= i + k / 2; ++j)
    if (j >= 0 && j < n) {
      ++counts[labels[j]];
      ++size;
    }
  int mode = 0;
  for (const auto &[label, c] : counts) mode = std::max(mode, c);
  return 1.0 - static_cast<double>(mode) / size;
}

// F1 per class from explicit TP / FP / FN loops.
inline std::vector<std::optional<double>> frame_f1(const std::vector<int> &gt,
                                                   const std::vector<int> &pred, int classes) {
  std::vector<std::optional<double>> out(classes);
  for (int c = 0; c < classes; ++c) {
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (gt[i] == c && pred[i] == c) ++tp;
      if (gt[i] != c && pred[i] == c) ++fp;
      if (gt[i] == c && pred[i] != c) ++fn;
    }
    if (tp + fp + fn > 0) out[c] = 2.0 * tp / (2.0 * tp + fp + fn);
  }
  return out;
}

// Maximum total weight over every one-to-one partial matching, by recursion
// over the rows.
inline double best_matching(const std::vector<std::vector<double>> &w, std::size_t row,
                            std::vector<bool> &used) {
  if (row == w.size()) return 0.0;
  double best = best_matching(w, row + 1, used); // leave this row unmatched
  for (std::size_t j = 0; j < used.size(); ++j) {
    if (used[j]) continue;
    used[j] = true;
    best = std::max(best, w[row][j] + best_matching(w, row + 1, used));
    used[j] = false;
  }
  return best;
}

inline std::vector<std::optional<double>> segment_f1(const std::vector<int> &gt,
                                                     const std::vector<int> &pred, int classes) {
  struct Run {
    int start, end, cls;
  };
  auto runs = [](const std::vector<int> &l) {
    std::vector<Run> out;
    int s = 0;
    for (int i = 1; i <= static_cast<int>(l.size()); ++i)
      if (i == static_cast<int>(l.size()) || l[i] != l[s]) {
        out.push_back({s, i - 1, l[s]});
        s = i;
      }
    return out;
  };
  const auto g = runs(gt), p = runs(pred);
  std::vector<std::optional<double>> out(classes);
  for (int c = 0; c < classes; ++c) {
    std::vector<Run> gc, pc;
    for (auto r : g) if (r.cls == c) gc.push_back(r);
    for (auto r : p) if (r.cls == c) pc.push_back(r);
    if (gc.empty() && pc.empty()) continue;
    if (gc.empty() || pc.empty()) {
      out[c] = 0.0;
      continue;
    }
    std::vector<std::vector<double>> w(gc.size(), std::vector<double>(pc.size()));
    for (std::size_t i = 0; i < gc.size(); ++i)
      for (std::size_t j = 0; j < pc.size(); ++j) {
        int overlap = 0;
        for (int f = gc[i].start; f <= gc[i].end; ++f)
          if (f >= pc[j].start && f <= pc[j].end) ++overlap;
        const int la = gc[i].end - gc[i].start + 1, lb = pc[j].end - pc[j].start + 1;
        w[i][j] = 2.0 * overlap / (la + lb);
      }
    std::vector<bool> used(pc.size(), false);
    out[c] = best_matching(w, 0, used) / static_cast<double>(std::max(gc.size(), pc.size()));
  }
  return out;
}

// Labels made of a few random runs, so segment counts stay small.
inline std::vector<int> random_runs(std::mt19937 &rng, int n, int classes, int max_runs) {
  std::uniform_int_distribution<int> cls(0, classes - 1), cuts(1, max_runs);
  const int runs = cuts(rng);
  std::vector<int> boundaries;
  std::uniform_int_distribution<int> at(1, std::max(1, n - 1));
  for (int r = 1; r < runs; ++r) boundaries.push_back(at(rng));
  std::sort(boundaries.begin(), boundaries.end());
  std::vector<int> labels(n);
  int current = cls(rng), b = 0;
  for (int i = 0; i < n; ++i) {
    while (b < static_cast<int>(boundaries.size()) && boundaries[b] == i) {
      current = cls(rng);
      ++b;
    }
    labels[i] = current;
  }
  return labels;
}

} // namespace egoloc::oracle
