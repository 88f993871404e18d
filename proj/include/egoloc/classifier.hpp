#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "egoloc/core.hpp"

namespace egoloc {

// 8-bit interleaved RGB image.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
};

// Binary PPM (P6, maxval 255). Header comments are allowed. Errors carry the
// byte offset of the offending token.
Raster parse_ppm(std::span<const std::uint8_t> bytes, const std::string &source = "<memory>");
Raster read_ppm(const std::string &path);
std::vector<std::uint8_t> encode_ppm(const Raster &image);

using FrameFeature = Eigen::VectorXd;

inline constexpr int kDefaultBins = 4;
inline constexpr double kDefaultTemperature = 0.1;

// L1-normalized joint RGB histogram with `bins` levels per channel; bin
// (r, g, b) lives at r * bins^2 + g * bins + b.
FrameFeature histogram_feature(const Raster &image, int bins = kDefaultBins);

// One centroid per positive class; row c-1 of `centroids` belongs to class c.
struct CentroidModel {
  Eigen::MatrixXd centroids;
  double temperature = kDefaultTemperature;
  int bins = kDefaultBins;

  int positive_count() const { return static_cast<int>(centroids.rows()); }
};

// Classes must be exactly 1..M, each with at least one feature.
CentroidModel train_centroids(const std::map<ClassId, std::vector<FrameFeature>> &features,
                              int bins = kDefaultBins,
                              double temperature = kDefaultTemperature);

// softmax(-||feature - centroid_c||_1 / temperature) over classes 1..M.
Eigen::RowVectorXd classify(const CentroidModel &model,
                            const Eigen::Ref<const Eigen::VectorXd> &feature);

PosteriorSeries classify_sequence(const CentroidModel &model,
                                  std::span<const FrameFeature> features);

} // namespace egoloc
