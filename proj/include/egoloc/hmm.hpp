#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "egoloc/core.hpp"
#include "egoloc/rejection.hpp"

namespace egoloc {

// "Almost identity" transitions over M+1 states: every state change costs
// epsilon, staying put costs 1 - M * epsilon. Only the two log values are kept.
class TransitionModel {
 public:
  TransitionModel(int positive_count, double epsilon);

  int positive_count() const { return positive_count_; }
  int num_states() const { return positive_count_ + 1; }
  double epsilon() const { return epsilon_; }
  double log_self() const { return log_self_; }
  double log_cross() const { return log_cross_; }

 private:
  int positive_count_;
  double epsilon_;
  double log_self_;
  double log_cross_;
};

double transition_logprob(const TransitionModel &model, int from, int to);

struct DecodeResult {
  LabelSeries labels;
  double log_joint = 0.0;
};

inline constexpr double kEmissionFloor = 1e-12;

// MAP state path for a matrix of log-emissions (frames x states). The uniform
// transition structure lets each step take max(self, best other) in O(states).
// Ties resolve to the lowest state id, both in backtracking and at the end.
template <typename Derived>
DecodeResult viterbi_decode_log(const Eigen::MatrixBase<Derived> &log_emissions,
                                const TransitionModel &model) {
  const Eigen::Index n = log_emissions.rows();
  const Eigen::Index s = log_emissions.cols();
  if (n == 0) throw Error("empty series");
  if (s != model.num_states())
    throw Error("emission width " + std::to_string(s) + " does not match " +
                std::to_string(model.num_states()) + " HMM states");

  using Scalar = typename Derived::Scalar;
  constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();
  const Scalar log_self = static_cast<Scalar>(model.log_self());
  const Scalar log_cross = static_cast<Scalar>(model.log_cross());

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> score = log_emissions.row(0).transpose();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> next(s);
  std::vector<int> back(static_cast<std::size_t>(n * s), 0);

  for (Eigen::Index t = 1; t < n; ++t) {
    // Two best previous states; strict comparisons keep the lowest id on ties.
    Eigen::Index first = 0, second = -1;
    for (Eigen::Index k = 1; k < s; ++k) {
      if (score[k] > score[first]) {
        second = first;
        first = k;
      } else if (second < 0 || score[k] > score[second]) {
        second = k;
      }
    }
    int *bp = back.data() + t * s;
    for (Eigen::Index j = 0; j < s; ++j) {
      const Eigen::Index other = (j == first) ? second : first;
      const Scalar stay = score[j] + log_self;
      const Scalar move = other >= 0 ? score[other] + log_cross : kNegInf;
      Eigen::Index from = j;
      Scalar best = stay;
      if (move > stay || (move == stay && other < j)) {
        from = other;
        best = move;
      }
      bp[j] = static_cast<int>(from);
      next[j] = best + log_emissions(t, j);
    }
    score.swap(next);
  }

  Eigen::Index state = 0;
  for (Eigen::Index j = 1; j < s; ++j)
    if (score[j] > score[state]) state = j;

  DecodeResult result;
  result.log_joint = static_cast<double>(score[state]);
  result.labels.labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    result.labels.labels[static_cast<std::size_t>(t)] = static_cast<ClassId>(state);
    if (t > 0) state = back[static_cast<std::size_t>(t * s + state)];
  }
  return result;
}

// Floors emissions at kEmissionFloor, takes logs and decodes.
DecodeResult viterbi_decode(const PosteriorSeries &emissions, const TransitionModel &model);

// Intermediate labelings of the three pipeline stages.
struct PipelineTrace {
  LabelSeries discrimination;
  LabelSeries rejection;
  DecodeResult decoded;
  Segmentation segmentation;
};

// Discrimination -> negative rejection -> HMM smoothing -> segments.
PipelineTrace run_pipeline(const PosteriorSeries &positive, int window_k, double epsilon,
                           double frame_rate = 1.0);

Segmentation segment_video(const PosteriorSeries &positive, int window_k, double epsilon);

} // namespace egoloc
