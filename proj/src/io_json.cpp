#include <algorithm>
#include <set>

#include "egoloc/io.hpp"

namespace egoloc::io {

namespace {

constexpr const char *kSegmentationSchema = "egoloc.segmentation/1";
constexpr const char *kModelSchema = "egoloc.centroid_model/1";
constexpr const char *kGridSchema = "egoloc.grid/1";

// Field access with errors that name the JSON location.
class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string &where, const std::string &detail) const {
    throw ParseError(source_, where.empty() ? "/" : where, detail);
  }

  const Json &field(const Json &obj, const std::string &where, const char *key) const {
    if (!obj.is_object()) fail(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
    return *it;
  }

  template <typename T>
  T get(const Json &obj, const std::string &where, const char *key) const {
    const Json &v = field(obj, where, key);
    const std::string at = where + "/" + key;
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(at, "expected a string");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(at, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(at, "expected an integer");
      if constexpr (std::is_unsigned_v<T>)
        if (v.get<long long>() < 0) fail(at, "expected a nonnegative integer");
    } else {
      if (!v.is_number()) fail(at, "expected a number");
    }
    return v.get<T>();
  }

  void expect_schema(const Json &j, const char *schema) const {
    const auto s = get<std::string>(j, "", "schema");
    if (s != schema) fail("/schema", "expected schema '" + std::string(schema) + "', found '" + s + "'");
  }

  const std::string &source() const { return source_; }

 private:
  std::string source_;
};

Json parse_json_text(const std::string &text, const std::string &source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw ParseError(source, "byte " + std::to_string(e.byte), "malformed JSON");
  }
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

} // namespace

// ---- segmentation ---------------------------------------------------------

Json segmentation_to_json(const Segmentation &seg, double frame_rate) {
  Json segments = Json::array();
  for (const auto &s : seg.segments)
    segments.push_back(Json{{"start", s.start}, {"end", s.end}, {"class_id", s.class_id}});
  return Json{{"schema", kSegmentationSchema},
              {"total_frames", seg.total_frames},
              {"frame_rate", frame_rate},
              {"segments", std::move(segments)}};
}

Segmentation segmentation_from_json(const Json &j, const std::string &source) {
  const Reader r(source);
  r.expect_schema(j, kSegmentationSchema);
  Segmentation seg;
  seg.total_frames = r.get<std::size_t>(j, "", "total_frames");
  const Json &list = r.field(j, "", "segments");
  if (!list.is_array()) r.fail("/segments", "expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "/segments/" + std::to_string(i);
    Segment s{r.get<std::size_t>(list[i], where, "start"), r.get<std::size_t>(list[i], where, "end"),
              r.get<int>(list[i], where, "class_id")};
    if (s.class_id < 0) r.fail(where + "/class_id", "class id must be nonnegative");
    seg.segments.push_back(s);
  }
  try {
    check_tiling(seg);
  } catch (const Error &e) {
    r.fail("/segments", e.what());
  }
  return seg;
}

void write_segmentation(const std::filesystem::path &path, const Segmentation &seg,
                        double frame_rate) {
  write_file_atomic(path, dump(segmentation_to_json(seg, frame_rate)));
}

Segmentation read_segmentation(const std::filesystem::path &path) {
  const std::string source = path.string();
  return segmentation_from_json(parse_json_text(read_file(path), source), source);
}

// ---- model ----------------------------------------------------------------

Json model_to_json(const CentroidModel &model) {
  Json centroids = Json::array();
  for (Eigen::Index c = 0; c < model.centroids.rows(); ++c) {
    Json row = Json::array();
    for (Eigen::Index d = 0; d < model.centroids.cols(); ++d) row.push_back(model.centroids(c, d));
    centroids.push_back(std::move(row));
  }
  return Json{{"schema", kModelSchema},
              {"bins", model.bins},
              {"temperature", model.temperature},
              {"classes", model.positive_count()},
              {"centroids", std::move(centroids)}};
}

CentroidModel model_from_json(const Json &j, const std::string &source) {
  const Reader r(source);
  r.expect_schema(j, kModelSchema);
  CentroidModel model;
  model.bins = r.get<int>(j, "", "bins");
  model.temperature = r.get<double>(j, "", "temperature");
  if (model.bins < 1 || model.bins > 256) r.fail("/bins", "bins must be in 1..256");
  if (!(model.temperature > 0)) r.fail("/temperature", "temperature must be positive");
  const int classes = r.get<int>(j, "", "classes");
  const Json &rows = r.field(j, "", "centroids");
  if (!rows.is_array() || static_cast<int>(rows.size()) != classes || classes < 1)
    r.fail("/centroids", "expected one centroid per class");
  const Eigen::Index dim = static_cast<Eigen::Index>(model.bins) * model.bins * model.bins;
  model.centroids.resize(classes, dim);
  for (int c = 0; c < classes; ++c) {
    const std::string where = "/centroids/" + std::to_string(c);
    if (!rows[c].is_array() || static_cast<Eigen::Index>(rows[c].size()) != dim)
      r.fail(where, "expected " + std::to_string(dim) + " entries");
    for (Eigen::Index d = 0; d < dim; ++d) {
      if (!rows[c][d].is_number()) r.fail(where + "/" + std::to_string(d), "expected a number");
      model.centroids(c, d) = rows[c][d].get<double>();
    }
  }
  return model;
}

void write_model(const std::filesystem::path &path, const CentroidModel &model) {
  write_file_atomic(path, dump(model_to_json(model)));
}

CentroidModel read_model(const std::filesystem::path &path) {
  const std::string source = path.string();
  return model_from_json(parse_json_text(read_file(path), source), source);
}

// ---- manifest -------------------------------------------------------------

std::vector<const SequenceEntry *> Manifest::in_split(Split split) const {
  std::vector<const SequenceEntry *> out;
  for (const auto &s : sequences)
    if (s.split == split) out.push_back(&s);
  return out;
}

Manifest parse_manifest(const Json &j, const std::filesystem::path &base_dir,
                        const std::string &source) {
  const Reader r(source);
  Manifest manifest;

  const Json &classes = r.field(j, "", "classes");
  if (!classes.is_array() || classes.size() < 2)
    r.fail("/classes", "expected the negative class name followed by at least one positive class");
  std::vector<std::string> names;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (!classes[c].is_string()) r.fail("/classes/" + std::to_string(c), "expected a string");
    names.push_back(classes[c].get<std::string>());
  }
  manifest.catalog = ClassCatalog(std::move(names));

  auto resolve = [&](const std::string &where, const std::string &rel) {
    std::filesystem::path p(rel);
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) r.fail(where, "referenced file does not exist: " + p.string());
    return p;
  };

  const Json &seqs = r.field(j, "", "sequences");
  if (!seqs.is_array()) r.fail("/sequences", "expected an array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const std::string where = "/sequences/" + std::to_string(i);
    const Json &s = seqs[i];
    SequenceEntry e;
    e.name = r.get<std::string>(s, where, "name");
    if (!seen.insert(e.name).second) r.fail(where + "/name", "duplicate sequence name '" + e.name + "'");
    e.frames = r.get<std::size_t>(s, where, "frames");
    if (e.frames == 0) r.fail(where + "/frames", "sequence has no frames");
    if (s.contains("frame_rate")) {
      e.frame_rate = r.get<double>(s, where, "frame_rate");
      if (!(e.frame_rate > 0)) r.fail(where + "/frame_rate", "frame rate must be positive");
    }
    const auto split = r.get<std::string>(s, where, "split");
    if (split == "train") e.split = Split::train;
    else if (split == "validation") e.split = Split::validation;
    else if (split == "test") e.split = Split::test;
    else r.fail(where + "/split", "split must be train, validation or test");
    if (s.contains("labels"))
      e.labels = resolve(where + "/labels", r.get<std::string>(s, where, "labels"));
    if (s.contains("posteriors"))
      e.posteriors = resolve(where + "/posteriors", r.get<std::string>(s, where, "posteriors"));
    if (s.contains("images")) {
      const Json &images = s["images"];
      if (!images.is_array()) r.fail(where + "/images", "expected an array");
      if (images.size() != e.frames)
        r.fail(where + "/images", "expected one image per frame (" + std::to_string(e.frames) + ")");
      for (std::size_t k = 0; k < images.size(); ++k) {
        const std::string at = where + "/images/" + std::to_string(k);
        if (!images[k].is_string()) r.fail(at, "expected a string");
        e.images.push_back(resolve(at, images[k].get<std::string>()));
      }
    }
    manifest.sequences.push_back(std::move(e));
  }
  return manifest;
}

Manifest read_manifest(const std::filesystem::path &path) {
  const std::string source = path.string();
  return parse_manifest(parse_json_text(read_file(path), source), path.parent_path(), source);
}

// ---- grid -----------------------------------------------------------------

Json grid_result_to_json(const GridResult &result) {
  Json cells = Json::array();
  for (const auto &c : result.table) {
    Json cell{{"k", c.k}, {"epsilon", c.epsilon}, {"valid", c.valid}};
    if (c.valid) {
      cell["mff1"] = c.mff1;
      cell["masf1"] = c.masf1;
      cell["score"] = c.score;
      cell["segments"] = c.segments;
    } else {
      cell["mff1"] = nullptr;
      cell["masf1"] = nullptr;
      cell["score"] = nullptr;
      cell["segments"] = nullptr;
    }
    cells.push_back(std::move(cell));
  }
  return Json{{"schema", kGridSchema},
              {"objective", to_string(result.objective)},
              {"best", {{"k", result.best_k}, {"epsilon", result.best_epsilon}, {"score", result.best_score}}},
              {"cells", std::move(cells)}};
}

} // namespace egoloc::io
