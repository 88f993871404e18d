#include "egoloc/classifier.hpp"

#include <fstream>
#include <iterator>

namespace egoloc {

namespace {

class PpmHeaderReader {
 public:
  PpmHeaderReader(std::span<const std::uint8_t> bytes, const std::string &source)
      : bytes_(bytes), source_(source) {}

  [[noreturn]] void fail(std::size_t at, const std::string &detail) const {
    throw ParseError(source_, "byte " + std::to_string(at), detail);
  }

  void expect_magic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] != '6')
      fail(0, "expected magic number 'P6'");
    pos_ = 2;
  }

  // Whitespace and '#' comments between header tokens.
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const std::uint8_t c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (is_space(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_number(const char *what) {
    const std::size_t before = pos_;
    skip_separators();
    if (pos_ >= bytes_.size()) fail(pos_, std::string("truncated header: missing ") + what);
    if (pos_ == before) fail(pos_, std::string("expected whitespace before ") + what);
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > kMaxDimension) fail(start, std::string(what) + " too large");
      ++pos_;
    }
    if (pos_ == start) fail(start, std::string("expected decimal ") + what);
    return value;
  }

  void expect_single_space() {
    if (pos_ >= bytes_.size()) fail(pos_, "truncated header: missing separator after maxval");
    if (!is_space(bytes_[pos_])) fail(pos_, "expected whitespace after maxval");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

  static constexpr long kMaxDimension = 1L << 20;

 private:
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  std::span<const std::uint8_t> bytes_;
  const std::string &source_;
  std::size_t pos_ = 0;
};

} // namespace

Raster parse_ppm(std::span<const std::uint8_t> bytes, const std::string &source) {
  PpmHeaderReader header(bytes, source);
  header.expect_magic();
  const std::size_t width_at = header.pos();
  const long width = header.read_number("width");
  const long height = header.read_number("height");
  if (width == 0 || height == 0) header.fail(width_at, "image has zero pixels");
  const std::size_t maxval_at = header.pos();
  const long maxval = header.read_number("maxval");
  if (maxval != 255)
    header.fail(maxval_at, "unsupported maxval " + std::to_string(maxval) + " (need 255)");
  header.expect_single_space();

  const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
  const std::size_t have = bytes.size() - header.pos();
  if (have < need)
    header.fail(bytes.size(), "truncated pixel data: expected " + std::to_string(need) +
                                  " bytes, found " + std::to_string(have));

  Raster image;
  image.width = static_cast<int>(width);
  image.height = static_cast<int>(height);
  const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(header.pos());
  image.rgb.assign(first, first + static_cast<std::ptrdiff_t>(need));
  return image;
}

Raster read_ppm(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  return parse_ppm(bytes, path);
}

std::vector<std::uint8_t> encode_ppm(const Raster &image) {
  if (image.width < 1 || image.height < 1 || image.rgb.size() != image.pixel_count() * 3)
    throw Error("raster dimensions do not match its pixel buffer");
  const std::string header = "P6\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.rgb.begin(), image.rgb.end());
  return out;
}

FrameFeature histogram_feature(const Raster &image, int bins) {
  if (bins < 1 || bins > 256) throw Error("bins per channel must be in 1..256");
  const std::size_t pixels = image.pixel_count();
  if (pixels == 0) throw Error("image has zero pixels");
  if (image.rgb.size() != pixels * 3) throw Error("raster dimensions do not match its pixel buffer");

  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> counts =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(bins * bins * bins);
  auto level = [bins](std::uint8_t v) { return static_cast<int>(v) * bins / 256; };
  for (std::size_t p = 0; p < pixels; ++p) {
    const std::uint8_t *px = image.rgb.data() + 3 * p;
    ++counts[(level(px[0]) * bins + level(px[1])) * bins + level(px[2])];
  }
  return counts.cast<double>() / static_cast<double>(pixels);
}

CentroidModel train_centroids(const std::map<ClassId, std::vector<FrameFeature>> &features,
                              int bins, double temperature) {
  if (!(temperature > 0)) throw Error("temperature must be positive");
  if (features.empty()) throw Error("no training features");
  for (const auto &[c, list] : features)
    if (c < 1) throw Error("training data may only contain positive classes, got " + std::to_string(c));

  const int positive = features.rbegin()->first;
  Eigen::Index dim = -1;
  CentroidModel model;
  model.bins = bins;
  model.temperature = temperature;
  for (ClassId c = 1; c <= positive; ++c) {
    const auto it = features.find(c);
    if (it == features.end() || it->second.empty())
      throw Error("class " + std::to_string(c) + " has no training frames");
    for (const auto &f : it->second) {
      if (dim < 0) {
        dim = f.size();
        model.centroids = Eigen::MatrixXd::Zero(positive, dim);
      }
      if (f.size() != dim) throw Error("feature dimension mismatch in class " + std::to_string(c));
      model.centroids.row(c - 1) += f.transpose();
    }
    const double mass = model.centroids.row(c - 1).sum();
    if (!(mass > 0)) throw Error("class " + std::to_string(c) + " has an all-zero centroid");
    model.centroids.row(c - 1) /= mass;
  }
  return model;
}

Eigen::RowVectorXd classify(const CentroidModel &model,
                            const Eigen::Ref<const Eigen::VectorXd> &feature) {
  if (feature.size() != model.centroids.cols())
    throw Error("dimension mismatch: feature has " + std::to_string(feature.size()) +
                " entries, model expects " + std::to_string(model.centroids.cols()));
  const Eigen::RowVectorXd scores =
      -(model.centroids.rowwise() - feature.transpose()).cwiseAbs().rowwise().sum().transpose() /
      model.temperature;
  Eigen::RowVectorXd row = (scores.array() - scores.maxCoeff()).exp();
  return row / row.sum();
}

PosteriorSeries classify_sequence(const CentroidModel &model,
                                  std::span<const FrameFeature> features) {
  if (features.empty()) throw Error("empty series");
  PosteriorMatrixXd rows(static_cast<Eigen::Index>(features.size()), model.positive_count());
  for (std::size_t i = 0; i < features.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) = classify(model, features[i]);
  return PosteriorSeries(std::move(rows), PosteriorKind::positive_only);
}

} // namespace egoloc
