#include "egoloc/synth.hpp"

#include <cmath>
#include <limits>

namespace egoloc {

std::uint64_t SynthRng::below(std::uint64_t n) {
  if (n == 0) throw Error("empty range");
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - (kMax % n + 1) % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return x % n;
}

std::size_t SynthRng::geometric(double mean) {
  const double p = 1.0 / mean;
  std::size_t length = 1;
  while (uniform() >= p) ++length;
  return length;
}

void SynthConfig::validate() const {
  auto probability = [](double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(std::string(what) + " must be in [0,1]");
  };
  if (num_classes < 2) throw Error("synthetic data needs at least 2 positive classes");
  if (total_frames < 1) throw Error("synthetic data needs at least 1 frame");
  if (!(mean_dwell >= 1.0) || !std::isfinite(mean_dwell)) throw Error("mean dwell must be >= 1");
  if (!(negative_gap_mean >= 1.0) || !std::isfinite(negative_gap_mean))
    throw Error("negative gap mean must be >= 1");
  if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) throw Error("frame rate must be positive");
  probability(negative_gap_prob, "negative gap probability");
  probability(classifier_accuracy, "classifier accuracy");
  probability(runner_up_share, "runner-up share");
  probability(confusion_spread, "confusion spread");
}

SynthInstance generate(const SynthConfig &cfg) {
  cfg.validate();
  SynthRng rng(cfg.seed);
  const int m = cfg.num_classes;
  const std::size_t n = cfg.total_frames;

  auto other_than = [&](ClassId c) {
    const auto pick = static_cast<ClassId>(1 + rng.below(static_cast<std::uint64_t>(m - 1)));
    return pick >= c ? pick + 1 : pick;
  };

  std::vector<ClassId> gt;
  gt.reserve(n);
  ClassId room = static_cast<ClassId>(1 + rng.below(static_cast<std::uint64_t>(m)));
  while (gt.size() < n) {
    gt.insert(gt.end(), rng.geometric(cfg.mean_dwell), room);
    if (rng.uniform() < cfg.negative_gap_prob)
      gt.insert(gt.end(), rng.geometric(cfg.negative_gap_mean), kNegativeClass);
    room = other_than(room);
  }
  gt.resize(n);

  PosteriorMatrixXd rows(static_cast<Eigen::Index>(n), m);
  Eigen::RowVectorXd noise(m);
  for (std::size_t i = 0; i < n; ++i) {
    const ClassId truth = gt[i];
    ClassId peak;
    if (truth == kNegativeClass)
      peak = static_cast<ClassId>(1 + rng.below(static_cast<std::uint64_t>(m)));
    else
      peak = rng.uniform() < cfg.classifier_accuracy ? truth : other_than(truth);
    const ClassId runner_up = (truth != kNegativeClass && truth != peak) ? truth : other_than(peak);

    const double peak_mass = 0.5 + 0.5 * rng.uniform();
    const double rest = 1.0 - peak_mass;
    for (int j = 0; j < m; ++j) noise[j] = (j + 1 == peak) ? 0.0 : rng.uniform();
    const double noise_sum = noise.sum();
    auto row = rows.row(static_cast<Eigen::Index>(i));
    for (int j = 0; j < m; ++j) {
      if (j + 1 == peak) {
        row[j] = peak_mass;
        continue;
      }
      double share = (1.0 - cfg.confusion_spread) / (m - 1);
      if (noise_sum > 0.0) share += cfg.confusion_spread * noise[j] / noise_sum;
      else share += cfg.confusion_spread / (m - 1);
      row[j] = rest * (1.0 - cfg.runner_up_share) * share;
      if (j + 1 == runner_up) row[j] += rest * cfg.runner_up_share;
    }
  }

  return SynthInstance{LabelSeries(std::move(gt), cfg.frame_rate),
                       PosteriorSeries(std::move(rows), PosteriorKind::positive_only)};
}

} // namespace egoloc
