#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace egoloc {

using ClassId = int;
inline constexpr ClassId kNegativeClass = 0;

// Row-major so that one frame's distribution is contiguous.
template <typename Scalar>
using PosteriorMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using PosteriorMatrixXd = PosteriorMatrix<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input. location is "line N" for text formats, "byte N" for binary.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::string location, std::string detail)
      : Error(source + ":" + location + ": " + detail), source_(std::move(source)),
        location_(std::move(location)), detail_(std::move(detail)) {}

  const std::string &source() const { return source_; }
  const std::string &location() const { return location_; }
  const std::string &detail() const { return detail_; }

 private:
  std::string source_;
  std::string location_;
  std::string detail_;
};

// The M positive location classes plus the negative class at id 0.
class ClassCatalog {
 public:
  explicit ClassCatalog(int positive_count);
  explicit ClassCatalog(std::vector<std::string> names);

  int positive_count() const { return static_cast<int>(names_.size()) - 1; }
  int num_classes() const { return static_cast<int>(names_.size()); }
  const std::string &name(ClassId id) const;
  const std::vector<std::string> &names() const { return names_; }
  bool contains(ClassId id) const { return id >= 0 && id < num_classes(); }

 private:
  std::vector<std::string> names_;
};

struct LabelSeries {
  std::vector<ClassId> labels;
  double frame_rate = 1.0;

  LabelSeries() = default;
  explicit LabelSeries(std::vector<ClassId> l, double fps = 1.0);

  std::size_t size() const { return labels.size(); }
  ClassId operator[](std::size_t i) const { return labels[i]; }
  ClassId max_label() const;
  void check_catalog(const ClassCatalog &catalog) const;

  bool operator==(const LabelSeries &) const = default;
};

enum class PosteriorKind { positive_only, merged };

// N rows of class probabilities. A positive_only series has M columns
// (column j is class j+1); a merged series has M+1 columns (column j is class j).
class PosteriorSeries {
 public:
  static constexpr double kRowSumTolerance = 1e-9;

  PosteriorSeries(PosteriorMatrixXd rows, PosteriorKind kind);

  const PosteriorMatrixXd &rows() const { return rows_; }
  PosteriorKind kind() const { return kind_; }
  Eigen::Index size() const { return rows_.rows(); }
  Eigen::Index width() const { return rows_.cols(); }
  int positive_count() const {
    return static_cast<int>(kind_ == PosteriorKind::merged ? width() - 1 : width());
  }
  // Class id held by column j.
  ClassId class_of_column(Eigen::Index j) const {
    return static_cast<ClassId>(kind_ == PosteriorKind::merged ? j : j + 1);
  }

 private:
  PosteriorMatrixXd rows_;
  PosteriorKind kind_;
};

// Frame range [start, end], end inclusive.
struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;
  ClassId class_id = kNegativeClass;

  std::size_t length() const { return end - start + 1; }
  bool operator==(const Segment &) const = default;
};

struct Segmentation {
  std::vector<Segment> segments;
  std::size_t total_frames = 0;

  bool operator==(const Segmentation &) const = default;
};

// Throws "non-contiguous segmentation" unless the segments tile [0, N-1].
void check_tiling(const Segmentation &seg);
// Tiling plus maximal runs (adjacent segments differ in class).
bool is_valid(const Segmentation &seg);

Segmentation labels_to_segmentation(const LabelSeries &labels);
LabelSeries segmentation_to_labels(const Segmentation &seg, double frame_rate = 1.0);

// Seconds spent in each class, indexed by class id 0..M.
Eigen::VectorXd dwell_times(const Segmentation &seg, const ClassCatalog &catalog,
                            double frame_rate);

} // namespace egoloc
