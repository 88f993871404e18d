#pragma once

#include <cstdint>
#include <random>

#include "egoloc/core.hpp"

namespace egoloc {

// Random source for synthetic data. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; the conversions below use only integer
// operations and exact scaling so results match bit-for-bit on every platform
// (the <random> distributions do not guarantee that).
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on {0, ..., n - 1}.
  std::uint64_t below(std::uint64_t n);
  // Geometric on {1, 2, ...} with the given mean, by Bernoulli trials.
  std::size_t geometric(double mean);

 private:
  std::mt19937_64 engine_;
};

struct SynthConfig {
  int num_classes = 9;
  std::size_t total_frames = 2000;
  std::uint64_t seed = 42;
  // Expected frames per room visit.
  double mean_dwell = 600.0;
  // Probability that a room change passes through a negative interlude, and
  // the interlude's expected length in frames.
  double negative_gap_prob = 0.5;
  double negative_gap_mean = 40.0;
  // Probability that a positive frame's posterior peaks at the true room.
  double classifier_accuracy = 0.75;
  // Share of the off-peak mass given to a runner-up class: the true room when
  // the peak is wrong, a random other room otherwise. A misclassifying
  // network usually still ranks the right room second.
  double runner_up_share = 0.5;
  // How the rest of the off-peak mass is split: 0 evenly, 1 at random.
  double confusion_spread = 0.0;
  double frame_rate = 1.0;

  void validate() const;
};

struct SynthInstance {
  LabelSeries gt;
  PosteriorSeries positive;
};

SynthInstance generate(const SynthConfig &cfg);

} // namespace egoloc
