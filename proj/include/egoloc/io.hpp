#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "egoloc/classifier.hpp"
#include "egoloc/core.hpp"
#include "egoloc/metrics.hpp"
#include "egoloc/tuning.hpp"

namespace egoloc::io {

using Json = nlohmann::ordered_json;

// Shortest decimal that parses back to the identical double.
std::string format_double(double value);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);
std::string read_file(const std::filesystem::path &path);

// ---- labels CSV ---------------------------------------------------------
//   # frame_rate=24        (optional "# key=value" lines before the header)
//   frame,class_id
//   0,1
//   1,0
// Frames run 0..N-1 in order. num_classes > 0 bounds class ids to 0..num_classes-1.
LabelSeries parse_labels(std::string_view text, const std::string &source = "<memory>",
                         int num_classes = 0);
std::string format_labels(const LabelSeries &labels);
LabelSeries read_labels(const std::filesystem::path &path, int num_classes = 0);
void write_labels(const std::filesystem::path &path, const LabelSeries &labels);

// ---- posteriors CSV -----------------------------------------------------
//   # kind=positive_only   (optional for merged files)
//   frame,p1,...,pM        (positive-only)   or   frame,p0,p1,...,pM (merged)
// Rows must sum to 1 within kParseSumTolerance and are renormalized on load.
inline constexpr double kParseSumTolerance = 1e-6;
PosteriorSeries parse_posteriors(std::string_view text, const std::string &source = "<memory>");
std::string format_posteriors(const PosteriorSeries &posterior);
PosteriorSeries read_posteriors(const std::filesystem::path &path);
void write_posteriors(const std::filesystem::path &path, const PosteriorSeries &posterior);

// ---- segmentation JSON --------------------------------------------------
Json segmentation_to_json(const Segmentation &seg, double frame_rate = 1.0);
Segmentation segmentation_from_json(const Json &j, const std::string &source = "<memory>");
void write_segmentation(const std::filesystem::path &path, const Segmentation &seg,
                        double frame_rate = 1.0);
Segmentation read_segmentation(const std::filesystem::path &path);

// ---- centroid model JSON ------------------------------------------------
Json model_to_json(const CentroidModel &model);
CentroidModel model_from_json(const Json &j, const std::string &source = "<memory>");
void write_model(const std::filesystem::path &path, const CentroidModel &model);
CentroidModel read_model(const std::filesystem::path &path);

// ---- manifest JSON ------------------------------------------------------
enum class Split { train, validation, test };

struct SequenceEntry {
  std::string name;
  std::size_t frames = 0;
  double frame_rate = 1.0;
  Split split = Split::test;
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> posteriors;
  std::vector<std::filesystem::path> images;
};

struct Manifest {
  ClassCatalog catalog{1};
  std::vector<SequenceEntry> sequences;

  std::vector<const SequenceEntry *> in_split(Split split) const;
};

// Relative paths resolve against the manifest's directory; every referenced
// file must exist.
Manifest parse_manifest(const Json &j, const std::filesystem::path &base_dir,
                        const std::string &source = "<memory>");
Manifest read_manifest(const std::filesystem::path &path);

// ---- key = value configuration ------------------------------------------
// One "key = value" per line; '#' starts a comment; later keys override.
std::map<std::string, std::string> parse_key_values(std::string_view text,
                                                    const std::string &source = "<memory>");

// Keys: k_values, epsilon_values | (epsilon_min, epsilon_max, epsilon_count), objective.
GridSpec grid_spec_from_key_values(const std::map<std::string, std::string> &kv,
                                   const std::string &source = "<memory>");
GridSpec read_grid_spec(const std::filesystem::path &path);

Json grid_result_to_json(const GridResult &result);

// ---- evaluation report --------------------------------------------------
Json report_to_json(const std::vector<EvalReport> &reports, const ClassCatalog &catalog);
std::string report_to_html(const std::vector<EvalReport> &reports, const ClassCatalog &catalog);
// Writes <prefix>.json and <prefix>.html.
void write_report(const std::vector<EvalReport> &reports, const ClassCatalog &catalog,
                  const std::filesystem::path &prefix);

// Plain-text table: one row per class (positives, then negatives), one column
// per sequence plus AVG, "/" where a class is absent, and a final mean row.
enum class ScoreKind { ff1, asf1 };
std::string format_score_table(const std::vector<EvalReport> &reports,
                               const ClassCatalog &catalog, ScoreKind kind);

} // namespace egoloc::io
