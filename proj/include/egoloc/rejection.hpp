#pragma once

#include "egoloc/core.hpp"

namespace egoloc {

// Frames within floor(K/2) of the centre form the neighborhood. The window is
// truncated at the sequence edges and the ratio is taken over the frames that
// remain, so the value stays in [0, 1 - 1/W] for every K.
struct RejectionConfig {
  int window_k = 50;
};

// 1 - (mode count / window size) around frame i of a positive-only labeling.
double variation_ratio(const LabelSeries &labels, std::size_t i, const RejectionConfig &cfg);

// variation_ratio for every frame, computed with a single sliding pass.
Eigen::VectorXd negative_probability_series(const LabelSeries &labels,
                                            const RejectionConfig &cfg);

// Negative and positive events are disjoint:
//   row = [p_neg, (1 - p_neg) * positive...]
PosteriorSeries merge_posterior(const PosteriorSeries &positive,
                                const Eigen::Ref<const Eigen::VectorXd> &p_neg);

// Row-wise argmax, lowest class id on ties.
LabelSeries map_assign(const PosteriorSeries &posterior, double frame_rate = 1.0);

} // namespace egoloc
