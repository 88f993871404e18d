#include "egoloc/metrics.hpp"

#include <algorithm>

#include "egoloc/assignment.hpp"

namespace egoloc {

namespace {

void check_lengths(const LabelSeries &gt, const LabelSeries &pred) {
  if (gt.size() != pred.size())
    throw Error("length mismatch: ground truth has " + std::to_string(gt.size()) +
                " frames, prediction has " + std::to_string(pred.size()));
}

int resolve_classes(int requested, ClassId max_seen) {
  if (requested > 0 && max_seen >= requested)
    throw Error("class id " + std::to_string(max_seen) + " exceeds the " +
                std::to_string(requested) + " classes requested");
  return std::max(requested, max_seen + 1);
}

} // namespace

std::optional<double> ClassScores::mean() const {
  double sum = 0.0;
  int count = 0;
  for (const auto &s : per_class)
    if (s) {
      sum += *s;
      ++count;
    }
  if (count == 0) return std::nullopt;
  return sum / count;
}

ClassScores ff1(const LabelSeries &gt, const LabelSeries &pred, int num_classes) {
  check_lengths(gt, pred);
  const ConfusionMatrix counts = confusion(gt, pred, num_classes);
  ClassScores scores;
  scores.per_class.resize(static_cast<std::size_t>(counts.rows()));
  for (Eigen::Index c = 0; c < counts.rows(); ++c) {
    const std::int64_t tp = counts(c, c);
    const std::int64_t fp = counts.col(c).sum() - tp;
    const std::int64_t fn = counts.row(c).sum() - tp;
    if (tp + fp + fn == 0) continue;
    scores.per_class[c] = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
  }
  return scores;
}

double interval_f1(const Segment &a, const Segment &b) {
  const std::size_t lo = std::max(a.start, b.start);
  const std::size_t hi = std::min(a.end, b.end);
  if (lo > hi) return 0.0;
  const double overlap = static_cast<double>(hi - lo + 1);
  return 2.0 * overlap / static_cast<double>(a.length() + b.length());
}

ClassScores asf1(const Segmentation &gt, const Segmentation &pred, int num_classes) {
  if (gt.total_frames != pred.total_frames)
    throw Error("frame-count mismatch: ground truth has " + std::to_string(gt.total_frames) +
                " frames, prediction has " + std::to_string(pred.total_frames));
  check_tiling(gt);
  check_tiling(pred);

  ClassId max_seen = 0;
  for (const auto &s : gt.segments) max_seen = std::max(max_seen, s.class_id);
  for (const auto &s : pred.segments) max_seen = std::max(max_seen, s.class_id);
  const int classes = resolve_classes(num_classes, max_seen);

  std::vector<std::vector<Segment>> gt_by_class(classes), pred_by_class(classes);
  for (const auto &s : gt.segments) gt_by_class[s.class_id].push_back(s);
  for (const auto &s : pred.segments) pred_by_class[s.class_id].push_back(s);

  ClassScores scores;
  scores.per_class.resize(static_cast<std::size_t>(classes));
  for (int c = 0; c < classes; ++c) {
    const auto &g = gt_by_class[c];
    const auto &p = pred_by_class[c];
    if (g.empty() && p.empty()) continue;
    if (g.empty() || p.empty()) {
      scores.per_class[c] = 0.0;
      continue;
    }
    Eigen::MatrixXd overlap(static_cast<Eigen::Index>(g.size()),
                            static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < p.size(); ++j)
        overlap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            interval_f1(g[i], p[j]);
    const Assignment match = solve_max_assignment(overlap);
    scores.per_class[c] = match.total / static_cast<double>(std::max(g.size(), p.size()));
  }
  return scores;
}

ConfusionMatrix confusion(const LabelSeries &gt, const LabelSeries &pred, int num_classes) {
  check_lengths(gt, pred);
  const int classes = resolve_classes(num_classes, std::max(gt.max_label(), pred.max_label()));
  ConfusionMatrix counts = ConfusionMatrix::Zero(classes, classes);
  for (std::size_t i = 0; i < gt.size(); ++i) ++counts(gt[i], pred[i]);
  return counts;
}

Eigen::MatrixXd row_normalized(const ConfusionMatrix &counts) {
  Eigen::MatrixXd out = counts.cast<double>();
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double total = out.row(r).sum();
    if (total > 0) out.row(r) /= total;
  }
  return out;
}

EvalReport evaluate(std::string name, const LabelSeries &gt, const Segmentation &pred,
                    const ClassCatalog &catalog) {
  gt.check_catalog(catalog);
  const LabelSeries pred_labels = segmentation_to_labels(pred, gt.frame_rate);
  pred_labels.check_catalog(catalog);
  if (gt.size() != pred_labels.size())
    throw Error("frame-count mismatch: ground truth has " + std::to_string(gt.size()) +
                " frames, prediction has " + std::to_string(pred_labels.size()));

  EvalReport report;
  report.name = std::move(name);
  report.frame_rate = gt.frame_rate;
  report.gt = labels_to_segmentation(gt);
  report.pred = pred;
  const int classes = catalog.num_classes();
  report.ff1 = ff1(gt, pred_labels, classes);
  report.asf1 = asf1(report.gt, report.pred, classes);
  report.confusion = confusion(gt, pred_labels, classes);
  report.dwell_gt = dwell_times(report.gt, catalog, gt.frame_rate);
  report.dwell_pred = dwell_times(report.pred, catalog, gt.frame_rate);
  return report;
}

} // namespace egoloc
