#include "egoloc/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "egoloc/hmm.hpp"
#include "egoloc/metrics.hpp"
#include "egoloc/rejection.hpp"

namespace egoloc {

Objective parse_objective(const std::string &name) {
  if (name == "masf1" || name == "mASF1") return Objective::masf1;
  if (name == "mff1" || name == "mFF1") return Objective::mff1;
  throw Error("unknown objective '" + name + "' (expected masf1 or mff1)");
}

std::string to_string(Objective objective) {
  return objective == Objective::masf1 ? "masf1" : "mff1";
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi >= lo) || count < 1) throw Error("invalid log-spaced range");
  if (count == 1) return {lo};
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

void GridSpec::validate() const {
  if (k_values.empty() || epsilon_values.empty()) throw Error("grid lists must be nonempty");
  for (int k : k_values)
    if (k < 1) throw Error("grid K values must be >= 1");
  for (double e : epsilon_values)
    if (!(e > 0.0 && e < 1.0)) throw Error("grid epsilon values must be in (0,1)");
}

namespace {

// Total order on cells: higher score, then larger K, then smaller epsilon.
bool better(const GridCell &a, const GridCell &b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.k != b.k) return a.k > b.k;
  return a.epsilon < b.epsilon;
}

} // namespace

GridResult grid_search(const PosteriorSeries &positive, const LabelSeries &gt,
                       const GridSpec &spec, unsigned threads) {
  spec.validate();
  if (positive.kind() != PosteriorKind::positive_only)
    throw Error("grid search expects a positive-only posterior");
  if (static_cast<std::size_t>(positive.size()) != gt.size())
    throw Error("length mismatch: " + std::to_string(positive.size()) + " posterior rows vs " +
                std::to_string(gt.size()) + " ground-truth labels");
  const int positive_count = positive.positive_count();
  const ClassCatalog catalog(positive_count);
  gt.check_catalog(catalog);
  const int classes = catalog.num_classes();

  const LabelSeries discrimination = map_assign(positive);
  std::vector<PosteriorSeries> merged;
  merged.reserve(spec.k_values.size());
  for (int k : spec.k_values)
    merged.push_back(
        merge_posterior(positive, negative_probability_series(discrimination, RejectionConfig{k})));
  const Segmentation gt_segments = labels_to_segmentation(gt);

  GridResult result;
  result.objective = spec.objective;
  const std::size_t n_eps = spec.epsilon_values.size();
  result.table.resize(spec.k_values.size() * n_eps);
  for (std::size_t ki = 0; ki < spec.k_values.size(); ++ki)
    for (std::size_t ei = 0; ei < n_eps; ++ei) {
      GridCell &cell = result.table[ki * n_eps + ei];
      cell.k = spec.k_values[ki];
      cell.epsilon = spec.epsilon_values[ei];
      cell.valid = static_cast<double>(positive_count) * cell.epsilon < 1.0;
    }

  auto evaluate_cell = [&](std::size_t index) {
    GridCell &cell = result.table[index];
    if (!cell.valid) return;
    const TransitionModel model(positive_count, cell.epsilon);
    const LabelSeries decoded = viterbi_decode(merged[index / n_eps], model).labels;
    const Segmentation pred = labels_to_segmentation(decoded);
    cell.segments = pred.segments.size();
    cell.mff1 = ff1(gt, decoded, classes).mean().value_or(0.0);
    cell.masf1 = asf1(gt_segments, pred, classes).mean().value_or(0.0);
    cell.score = spec.objective == Objective::masf1 ? cell.masf1 : cell.mff1;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, result.table.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(threads);
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t)
      workers.emplace_back([&, t] {
        try {
          for (std::size_t i = next++; i < result.table.size(); i = next++) evaluate_cell(i);
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
  }
  for (const auto &failure : failures)
    if (failure) std::rethrow_exception(failure);

  const GridCell *best = nullptr;
  for (const auto &cell : result.table)
    if (cell.valid && (best == nullptr || better(cell, *best))) best = &cell;
  if (best == nullptr) throw Error("every grid cell is invalid (M * epsilon >= 1)");
  result.best_k = best->k;
  result.best_epsilon = best->epsilon;
  result.best_score = best->score;
  return result;
}

} // namespace egoloc
