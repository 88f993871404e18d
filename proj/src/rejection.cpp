#include "egoloc/rejection.hpp"

#include <algorithm>

namespace egoloc {

namespace {

void check_positive_only(const LabelSeries &labels) {
  if (labels.labels.empty()) throw Error("empty series");
  for (ClassId c : labels.labels)
    if (c <= kNegativeClass) throw Error("rejection input must be positive-only");
}

void check_config(const RejectionConfig &cfg) {
  if (cfg.window_k < 1) throw Error("window size K must be >= 1");
}

// Multiset of labels that tracks the largest multiplicity in O(1) per update.
class ModeCounter {
 public:
  explicit ModeCounter(ClassId max_label)
      : count_(static_cast<std::size_t>(max_label) + 1, 0), with_count_(1, 0) {}

  void add(ClassId c) {
    std::size_t &n = count_[c];
    if (n > 0) --with_count_[n];
    ++n;
    if (n >= with_count_.size()) with_count_.resize(n + 1, 0);
    ++with_count_[n];
    mode_count_ = std::max(mode_count_, n);
  }

  void remove(ClassId c) {
    std::size_t &n = count_[c];
    --with_count_[n];
    if (n == mode_count_ && with_count_[n] == 0) --mode_count_;
    --n;
    if (n > 0) ++with_count_[n];
  }

  std::size_t mode_count() const { return mode_count_; }

 private:
  std::vector<std::size_t> count_;
  std::vector<std::size_t> with_count_;
  std::size_t mode_count_ = 0;
};

} // namespace

double variation_ratio(const LabelSeries &labels, std::size_t i, const RejectionConfig &cfg) {
  check_config(cfg);
  check_positive_only(labels);
  const std::size_t n = labels.size();
  if (i >= n) throw Error("frame index " + std::to_string(i) + " out of range");
  const std::size_t half = static_cast<std::size_t>(cfg.window_k / 2);
  const std::size_t lo = i >= half ? i - half : 0;
  const std::size_t hi = std::min(n - 1, i + half);

  ModeCounter window(labels.max_label());
  for (std::size_t k = lo; k <= hi; ++k) window.add(labels[k]);
  return 1.0 - static_cast<double>(window.mode_count()) / static_cast<double>(hi - lo + 1);
}

Eigen::VectorXd negative_probability_series(const LabelSeries &labels,
                                            const RejectionConfig &cfg) {
  check_config(cfg);
  check_positive_only(labels);
  const std::size_t n = labels.size();
  const std::size_t half = static_cast<std::size_t>(cfg.window_k / 2);

  Eigen::VectorXd p_neg(static_cast<Eigen::Index>(n));
  ModeCounter window(labels.max_label());
  std::size_t lo = 0, hi_excl = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t want_lo = i >= half ? i - half : 0;
    const std::size_t want_hi_excl = std::min(n, i + half + 1);
    for (; hi_excl < want_hi_excl; ++hi_excl) window.add(labels[hi_excl]);
    for (; lo < want_lo; ++lo) window.remove(labels[lo]);
    p_neg[static_cast<Eigen::Index>(i)] =
        1.0 - static_cast<double>(window.mode_count()) / static_cast<double>(hi_excl - lo);
  }
  return p_neg;
}

PosteriorSeries merge_posterior(const PosteriorSeries &positive,
                                const Eigen::Ref<const Eigen::VectorXd> &p_neg) {
  if (positive.kind() != PosteriorKind::positive_only)
    throw Error("merge_posterior expects a positive-only posterior");
  if (p_neg.size() != positive.size())
    throw Error("length mismatch: " + std::to_string(positive.size()) + " posterior rows vs " +
                std::to_string(p_neg.size()) + " rejection probabilities");
  if ((p_neg.array() < 0.0).any() || (p_neg.array() > 1.0).any())
    throw Error("rejection probability outside [0,1]");

  PosteriorMatrixXd merged(positive.size(), positive.width() + 1);
  merged.col(0) = p_neg;
  merged.rightCols(positive.width()) =
      (1.0 - p_neg.array()).matrix().asDiagonal() * positive.rows();
  return PosteriorSeries(std::move(merged), PosteriorKind::merged);
}

LabelSeries map_assign(const PosteriorSeries &posterior, double frame_rate) {
  const auto &rows = posterior.rows();
  std::vector<ClassId> labels(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < rows.cols(); ++j)
      if (rows(i, j) > rows(i, best)) best = j;
    labels[static_cast<std::size_t>(i)] = posterior.class_of_column(best);
  }
  return LabelSeries(std::move(labels), frame_rate);
}

} // namespace egoloc
