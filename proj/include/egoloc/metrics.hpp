#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "egoloc/core.hpp"

namespace egoloc {

// Per-class scores indexed by class id. A class is absent (nullopt) when it
// appears in neither ground truth nor prediction; absent classes do not count
// towards the mean.
struct ClassScores {
  std::vector<std::optional<double>> per_class;

  std::optional<double> mean() const;
  bool present(ClassId c) const {
    return c >= 0 && static_cast<std::size_t>(c) < per_class.size() && per_class[c].has_value();
  }
};

using ConfusionMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Frame-wise F1 per class. num_classes = 0 sizes the result from the data.
ClassScores ff1(const LabelSeries &gt, const LabelSeries &pred, int num_classes = 0);

// F1 of two frame intervals seen as binary masks.
double interval_f1(const Segment &a, const Segment &b);

// Segment-level F1 per class: same-class segments are matched one-to-one so
// that the summed overlap F1 is maximal, and the sum is divided by
// max(|gt segments|, |pred segments|). Penalizes over- and under-segmentation.
ClassScores asf1(const Segmentation &gt, const Segmentation &pred, int num_classes = 0);

// Rows are ground truth, columns are predictions.
ConfusionMatrix confusion(const LabelSeries &gt, const LabelSeries &pred, int num_classes = 0);

// Each row divided by its total; empty rows stay zero.
Eigen::MatrixXd row_normalized(const ConfusionMatrix &counts);

struct EvalReport {
  std::string name;
  ClassScores ff1;
  ClassScores asf1;
  ConfusionMatrix confusion;
  Eigen::VectorXd dwell_gt;
  Eigen::VectorXd dwell_pred;
  Segmentation gt;
  Segmentation pred;
  double frame_rate = 1.0;
};

EvalReport evaluate(std::string name, const LabelSeries &gt, const Segmentation &pred,
                    const ClassCatalog &catalog);

} // namespace egoloc
