#include "egoloc/hmm.hpp"

#include <sstream>

namespace egoloc {

TransitionModel::TransitionModel(int positive_count, double epsilon)
    : positive_count_(positive_count), epsilon_(epsilon) {
  if (positive_count_ < 1) throw Error("HMM needs at least one positive class");
  if (!(epsilon_ > 0.0) || !(static_cast<double>(positive_count_) * epsilon_ < 1.0)) {
    std::ostringstream msg;
    msg << "epsilon must satisfy 0 < epsilon and M * epsilon < 1 (M = " << positive_count_
        << ", epsilon = " << epsilon_ << ")";
    throw Error(msg.str());
  }
  log_cross_ = std::log(epsilon_);
  log_self_ = std::log1p(-static_cast<double>(positive_count_) * epsilon_);
}

double transition_logprob(const TransitionModel &model, int from, int to) {
  if (from < 0 || from >= model.num_states() || to < 0 || to >= model.num_states())
    throw Error("state out of range 0.." + std::to_string(model.positive_count()));
  return from == to ? model.log_self() : model.log_cross();
}

DecodeResult viterbi_decode(const PosteriorSeries &emissions, const TransitionModel &model) {
  if (emissions.kind() != PosteriorKind::merged)
    throw Error("viterbi_decode expects a merged posterior over M+1 classes");
  return viterbi_decode_log(emissions.rows().array().max(kEmissionFloor).log().matrix(), model);
}

PipelineTrace run_pipeline(const PosteriorSeries &positive, int window_k, double epsilon,
                           double frame_rate) {
  if (positive.kind() != PosteriorKind::positive_only)
    throw Error("pipeline input must be a positive-only posterior");
  const TransitionModel model(positive.positive_count(), epsilon);

  LabelSeries discrimination = map_assign(positive, frame_rate);
  const Eigen::VectorXd p_neg =
      negative_probability_series(discrimination, RejectionConfig{window_k});
  const PosteriorSeries merged = merge_posterior(positive, p_neg);
  LabelSeries rejection = map_assign(merged, frame_rate);
  DecodeResult decoded = viterbi_decode(merged, model);
  decoded.labels.frame_rate = frame_rate;
  Segmentation segmentation = labels_to_segmentation(decoded.labels);
  return PipelineTrace{std::move(discrimination), std::move(rejection), std::move(decoded),
                       std::move(segmentation)};
}

Segmentation segment_video(const PosteriorSeries &positive, int window_k, double epsilon) {
  return run_pipeline(positive, window_k, epsilon).segmentation;
}

} // namespace egoloc
