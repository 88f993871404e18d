#pragma once

#include <optional>
#include <string>
#include <vector>

#include "egoloc/core.hpp"

namespace egoloc {

enum class Objective { masf1, mff1 };

Objective parse_objective(const std::string &name);
std::string to_string(Objective objective);

// `count` values evenly spaced in log10 between lo and hi, inclusive.
std::vector<double> log_spaced(double lo, double hi, int count);

struct GridSpec {
  std::vector<int> k_values{50, 100, 300};
  std::vector<double> epsilon_values = log_spaced(1e-300, 1e-2, 30);
  Objective objective = Objective::masf1;

  void validate() const;
};

struct GridCell {
  int k = 0;
  double epsilon = 0.0;
  // False when M * epsilon >= 1; such cells are skipped.
  bool valid = false;
  double mff1 = 0.0;
  double masf1 = 0.0;
  double score = 0.0;
  std::size_t segments = 0;
};

struct GridResult {
  int best_k = 0;
  double best_epsilon = 0.0;
  double best_score = 0.0;
  Objective objective = Objective::masf1;
  // Row-major over (k_values, epsilon_values) in the order given.
  std::vector<GridCell> table;
};

// Runs the full pipeline for every (K, epsilon) cell against ground truth and
// keeps the best objective. Ties go to the larger K, then the smaller epsilon.
// Cells are evaluated on `threads` workers (0 = hardware concurrency); the
// result does not depend on the thread count.
GridResult grid_search(const PosteriorSeries &positive, const LabelSeries &gt,
                       const GridSpec &spec, unsigned threads = 0);

} // namespace egoloc
