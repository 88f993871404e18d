#include "egoloc/core.hpp"

#include <algorithm>
#include <cmath>

namespace egoloc {

ClassCatalog::ClassCatalog(int positive_count) {
  if (positive_count < 1) throw Error("catalog needs at least one positive class");
  names_.reserve(positive_count + 1);
  names_.emplace_back("negative");
  for (int c = 1; c <= positive_count; ++c) names_.push_back("class " + std::to_string(c));
}

ClassCatalog::ClassCatalog(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2)
    throw Error("catalog needs the negative class and at least one positive class");
}

const std::string &ClassCatalog::name(ClassId id) const {
  if (!contains(id)) throw Error("class id " + std::to_string(id) + " not in catalog");
  return names_[id];
}

LabelSeries::LabelSeries(std::vector<ClassId> l, double fps)
    : labels(std::move(l)), frame_rate(fps) {
  if (labels.empty()) throw Error("empty series");
  if (!(frame_rate > 0) || !std::isfinite(frame_rate))
    throw Error("frame rate must be positive");
  for (ClassId c : labels)
    if (c < 0) throw Error("negative class id " + std::to_string(c));
}

ClassId LabelSeries::max_label() const {
  return labels.empty() ? kNegativeClass : *std::max_element(labels.begin(), labels.end());
}

void LabelSeries::check_catalog(const ClassCatalog &catalog) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!catalog.contains(labels[i]))
      throw Error("frame " + std::to_string(i) + ": class id " + std::to_string(labels[i]) +
                  " outside 0.." + std::to_string(catalog.positive_count()));
}

PosteriorSeries::PosteriorSeries(PosteriorMatrixXd rows, PosteriorKind kind)
    : rows_(std::move(rows)), kind_(kind) {
  if (rows_.rows() == 0) throw Error("empty series");
  const Eigen::Index min_width = kind_ == PosteriorKind::merged ? 2 : 1;
  if (rows_.cols() < min_width) throw Error("posterior has too few columns");
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    auto row = rows_.row(i);
    if (!row.allFinite() || (row.array() < 0.0).any() || (row.array() > 1.0).any())
      throw Error("frame " + std::to_string(i) + ": probability outside [0,1]");
    if (std::abs(row.sum() - 1.0) > kRowSumTolerance)
      throw Error("frame " + std::to_string(i) + ": row does not sum to 1");
  }
}

void check_tiling(const Segmentation &seg) {
  const auto &s = seg.segments;
  bool ok = !s.empty() && seg.total_frames > 0 && s.front().start == 0 &&
            s.back().end + 1 == seg.total_frames;
  for (std::size_t i = 0; ok && i < s.size(); ++i) {
    if (s[i].start > s[i].end || s[i].class_id < 0) ok = false;
    if (i > 0 && s[i].start != s[i - 1].end + 1) ok = false;
  }
  if (!ok) throw Error("non-contiguous segmentation");
}

bool is_valid(const Segmentation &seg) {
  try {
    check_tiling(seg);
  } catch (const Error &) {
    return false;
  }
  for (std::size_t i = 1; i < seg.segments.size(); ++i)
    if (seg.segments[i].class_id == seg.segments[i - 1].class_id) return false;
  return true;
}

Segmentation labels_to_segmentation(const LabelSeries &labels) {
  if (labels.labels.empty()) throw Error("empty series");
  Segmentation seg;
  seg.total_frames = labels.size();
  Segment run{0, 0, labels[0]};
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] != run.class_id) {
      seg.segments.push_back(run);
      run = Segment{i, i, labels[i]};
    } else {
      run.end = i;
    }
  }
  seg.segments.push_back(run);
  return seg;
}

LabelSeries segmentation_to_labels(const Segmentation &seg, double frame_rate) {
  check_tiling(seg);
  std::vector<ClassId> labels(seg.total_frames);
  for (const auto &s : seg.segments)
    std::fill(labels.begin() + s.start, labels.begin() + s.end + 1, s.class_id);
  return LabelSeries(std::move(labels), frame_rate);
}

Eigen::VectorXd dwell_times(const Segmentation &seg, const ClassCatalog &catalog,
                            double frame_rate) {
  if (!(frame_rate > 0)) throw Error("frame rate must be positive");
  check_tiling(seg);
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> frames =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(catalog.num_classes());
  for (const auto &s : seg.segments) {
    if (!catalog.contains(s.class_id))
      throw Error("class id " + std::to_string(s.class_id) + " not in catalog");
    frames[s.class_id] += static_cast<std::int64_t>(s.length());
  }
  return frames.cast<double>() / frame_rate;
}

} // namespace egoloc
