// egoloc: room-level localization from per-frame class posteriors.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "egoloc/classifier.hpp"
#include "egoloc/hmm.hpp"
#include "egoloc/io.hpp"
#include "egoloc/metrics.hpp"
#include "egoloc/synth.hpp"
#include "egoloc/tuning.hpp"

namespace fs = std::filesystem;
using namespace egoloc;

namespace {

// Validation failures exit with 2, anything unexpected with 1.
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 1;

struct UsageError : Error {
  using Error::Error;
};

enum class LogLevel { quiet, info, debug };

LogLevel log_level() {
  const char *env = std::getenv("EGOLOC_LOG");
  if (env == nullptr) return LogLevel::info;
  const std::string v(env);
  if (v == "quiet" || v == "0") return LogLevel::quiet;
  if (v == "debug" || v == "2") return LogLevel::debug;
  return LogLevel::info;
}

void log(LogLevel level, const std::string &msg) {
  if (level <= log_level()) std::cerr << "[egoloc] " << msg << "\n";
}

// Tuned settings for the two capture devices.
struct Preset {
  int k;
  double epsilon;
};
const std::map<std::string, Preset> kPresets{{"hololens", {50, 1e-152}}, {"gopro", {300, 1e-171}}};

fs::path with_suffix(const fs::path &out, const std::string &suffix) {
  fs::path base = out;
  if (base.extension() == ".json") base.replace_extension();
  base += suffix;
  return base;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  SynthConfig cfg;
  std::string out;
};

int run_synth(const SynthArgs &a) {
  const SynthInstance inst = generate(a.cfg);
  const fs::path labels = a.out + ".labels.csv";
  const fs::path posteriors = a.out + ".posteriors.csv";
  io::write_labels(labels, inst.gt);
  io::write_posteriors(posteriors, inst.positive);
  std::cout << "wrote " << labels.string() << " and " << posteriors.string() << " ("
            << inst.gt.size() << " frames, " << a.cfg.num_classes << " classes)\n";
  return 0;
}

struct TrainArgs {
  std::string manifest;
  int bins = kDefaultBins;
  double temperature = kDefaultTemperature;
  std::string out;
};

int run_train(const TrainArgs &a) {
  const io::Manifest manifest = io::read_manifest(a.manifest);
  const auto train = manifest.in_split(io::Split::train);
  if (train.empty()) throw UsageError("manifest has no sequences in the train split");

  std::map<ClassId, std::vector<FrameFeature>> features;
  for (const auto *seq : train) {
    if (!seq->labels || seq->images.empty())
      throw UsageError("train sequence '" + seq->name + "' needs labels and images");
    const LabelSeries labels = io::read_labels(*seq->labels, manifest.catalog.num_classes());
    if (labels.size() != seq->frames)
      throw UsageError("train sequence '" + seq->name + "': labels cover " +
                       std::to_string(labels.size()) + " frames, manifest says " +
                       std::to_string(seq->frames));
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == kNegativeClass) continue;
      features[labels[i]].push_back(histogram_feature(read_ppm(seq->images[i].string()), a.bins));
    }
  }
  for (ClassId c = 1; c <= manifest.catalog.positive_count(); ++c)
    if (features.find(c) == features.end())
      throw UsageError("class " + std::to_string(c) + " (" + manifest.catalog.name(c) +
                       ") has no frames in the train split");

  const CentroidModel model = train_centroids(features, a.bins, a.temperature);
  io::write_model(a.out, model);
  for (const auto &[c, list] : features)
    std::cout << "class " << c << " " << manifest.catalog.name(c) << ": " << list.size()
              << " frames\n";
  std::cout << "wrote " << a.out << "\n";
  return 0;
}

struct ClassifyArgs {
  std::string model;
  std::string manifest;
  std::string sequence;
  std::vector<std::string> images;
  std::string out;
};

int run_classify(const ClassifyArgs &a) {
  const CentroidModel model = io::read_model(a.model);
  std::vector<fs::path> images;
  if (!a.manifest.empty()) {
    if (a.sequence.empty()) throw UsageError("--manifest requires --sequence");
    const io::Manifest manifest = io::read_manifest(a.manifest);
    for (const auto &s : manifest.sequences)
      if (s.name == a.sequence) images = s.images;
    if (images.empty()) throw UsageError("sequence '" + a.sequence + "' has no images in the manifest");
  } else {
    images.assign(a.images.begin(), a.images.end());
  }
  if (images.empty()) throw UsageError("no images to classify");

  std::vector<FrameFeature> features;
  features.reserve(images.size());
  for (const auto &p : images) features.push_back(histogram_feature(read_ppm(p.string()), model.bins));
  io::write_posteriors(a.out, classify_sequence(model, features));
  std::cout << "wrote " << a.out << " (" << features.size() << " frames)\n";
  return 0;
}

struct SegmentArgs {
  std::string posteriors;
  int k = 50;
  double epsilon = 1e-152;
  std::string preset;
  bool k_given = false;
  bool epsilon_given = false;
  double frame_rate = 1.0;
  bool emit_intermediate = false;
  std::string out;
};

int run_segment(SegmentArgs a) {
  if (!a.preset.empty()) {
    const Preset &p = kPresets.at(a.preset);
    if (!a.k_given) a.k = p.k;
    if (!a.epsilon_given) a.epsilon = p.epsilon;
  }
  const PosteriorSeries positive = io::read_posteriors(a.posteriors);
  if (positive.kind() != PosteriorKind::positive_only)
    throw UsageError("segment expects a positive-only posterior file (header frame,p1,...,pM)");
  const int m = positive.positive_count();
  if (a.k < 1) throw UsageError("--k must be >= 1");
  if (!(a.epsilon > 0.0) || !(m * a.epsilon < 1.0))
    throw UsageError("--epsilon must satisfy 0 < epsilon < 1/M; with M = " + std::to_string(m) +
                     " positive classes the self-transition 1 - M*epsilon = " +
                     io::format_double(1.0 - m * a.epsilon) + " is not a probability");

  log(LogLevel::debug, "K=" + std::to_string(a.k) + " epsilon=" + io::format_double(a.epsilon));
  const PipelineTrace trace = run_pipeline(positive, a.k, a.epsilon, a.frame_rate);
  io::write_segmentation(a.out, trace.segmentation, a.frame_rate);
  if (a.emit_intermediate) {
    io::write_labels(with_suffix(a.out, ".discrimination.csv"), trace.discrimination);
    io::write_labels(with_suffix(a.out, ".rejection.csv"), trace.rejection);
    io::write_labels(with_suffix(a.out, ".smoothed.csv"), trace.decoded.labels);
  }
  std::cout << "K=" << a.k << " epsilon=" << io::format_double(a.epsilon) << " segments="
            << trace.segmentation.segments.size() << " frames=" << trace.segmentation.total_frames
            << "\n";
  return 0;
}

struct EvalArgs {
  std::vector<std::string> pred;
  std::vector<std::string> gt;
  std::vector<std::string> names;
  std::string manifest;
  int classes = 0;
  std::string out;
};

int run_eval(const EvalArgs &a) {
  if (a.pred.size() != a.gt.size())
    throw UsageError("--pred and --gt must be given the same number of times");
  if (!a.names.empty() && a.names.size() != a.pred.size())
    throw UsageError("--name must be given once per --pred");

  std::vector<LabelSeries> gts;
  std::vector<Segmentation> preds;
  ClassId max_seen = 1;
  for (std::size_t i = 0; i < a.pred.size(); ++i) {
    gts.push_back(io::read_labels(a.gt[i]));
    preds.push_back(io::read_segmentation(a.pred[i]));
    max_seen = std::max(max_seen, gts.back().max_label());
    for (const auto &s : preds.back().segments) max_seen = std::max(max_seen, s.class_id);
  }
  ClassCatalog catalog(a.classes > 0 ? a.classes : max_seen);
  if (!a.manifest.empty()) catalog = io::read_manifest(a.manifest).catalog;

  std::vector<EvalReport> reports;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (gts[i].size() != preds[i].total_frames)
      throw UsageError("frame-count mismatch: " + a.gt[i] + " has " + std::to_string(gts[i].size()) +
                       " frames, " + a.pred[i] + " has " + std::to_string(preds[i].total_frames));
    const std::string name = a.names.empty() ? fs::path(a.pred[i]).stem().string() : a.names[i];
    reports.push_back(evaluate(name, gts[i], preds[i], catalog));
  }
  io::write_report(reports, catalog, a.out);

  std::cout << io::format_score_table(reports, catalog, io::ScoreKind::ff1) << "\n"
            << io::format_score_table(reports, catalog, io::ScoreKind::asf1) << "\n";
  const nlohmann::ordered_json summary = io::report_to_json(reports, catalog)["summary"];
  auto show = [](const nlohmann::ordered_json &v) {
    return v.is_null() ? std::string("/") : io::format_double(v.get<double>());
  };
  std::cout << "mFF1=" << show(summary["mff1"]) << " mASF1=" << show(summary["masf1"]) << "\n";
  return 0;
}

struct TuneArgs {
  std::string posteriors;
  std::string gt;
  std::string grid;
  std::string objective;
  unsigned threads = 0;
  std::string out;
};

int run_tune(const TuneArgs &a) {
  const PosteriorSeries positive = io::read_posteriors(a.posteriors);
  const LabelSeries gt = io::read_labels(a.gt);
  GridSpec spec = a.grid.empty() ? GridSpec{} : io::read_grid_spec(a.grid);
  if (!a.objective.empty()) spec.objective = parse_objective(a.objective);
  const GridResult result = grid_search(positive, gt, spec, a.threads);
  io::write_file_atomic(a.out, io::grid_result_to_json(result).dump(2) + "\n");
  std::cout << "best K=" << result.best_k << " epsilon=" << io::format_double(result.best_epsilon)
            << " " << to_string(result.objective) << "=" << io::format_double(result.best_score)
            << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Room-level localization of egocentric video: per-frame posteriors -> negative "
               "rejection -> HMM smoothing -> temporal segments, plus evaluation and tuning."};
  app.set_config("--config", "", "Read options from a key = value file ([subcommand] sections)");
  app.require_subcommand(1);

  SynthArgs synth;
  auto *cmd_synth = app.add_subcommand("synth", "Generate a synthetic visit: ground-truth labels and noisy posteriors");
  cmd_synth->add_option("--classes", synth.cfg.num_classes, "Positive classes M")->capture_default_str();
  cmd_synth->add_option("--frames", synth.cfg.total_frames, "Frames N")->capture_default_str();
  cmd_synth->add_option("--seed", synth.cfg.seed, "PRNG seed")->capture_default_str();
  cmd_synth->add_option("--accuracy", synth.cfg.classifier_accuracy, "Probability the posterior peaks at the true room")->capture_default_str();
  cmd_synth->add_option("--mean-dwell", synth.cfg.mean_dwell, "Mean frames per room visit")->capture_default_str();
  cmd_synth->add_option("--gap-prob", synth.cfg.negative_gap_prob, "Probability of a negative interlude between rooms")->capture_default_str();
  cmd_synth->add_option("--gap-mean", synth.cfg.negative_gap_mean, "Mean negative interlude length")->capture_default_str();
  cmd_synth->add_option("--runner-up", synth.cfg.runner_up_share, "Off-peak share of the runner-up class (the true room on misclassified frames)")->capture_default_str();
  cmd_synth->add_option("--spread", synth.cfg.confusion_spread, "0 = even off-peak mass, 1 = random")->capture_default_str();
  cmd_synth->add_option("--frame-rate", synth.cfg.frame_rate, "Frames per second")->capture_default_str();
  cmd_synth->add_option("--out", synth.out, "Output prefix (<prefix>.labels.csv, <prefix>.posteriors.csv)")->required();

  TrainArgs train;
  auto *cmd_train = app.add_subcommand("train", "Train the histogram nearest-centroid classifier on the manifest's train split");
  cmd_train->add_option("--manifest", train.manifest, "Manifest JSON")->required();
  cmd_train->add_option("--bins", train.bins, "Histogram levels per channel")->capture_default_str();
  cmd_train->add_option("--temperature", train.temperature, "Softmax temperature")->capture_default_str();
  cmd_train->add_option("--out", train.out, "Model JSON")->required();

  ClassifyArgs classify_args;
  auto *cmd_classify = app.add_subcommand("classify", "Write positive-only posteriors for a sequence of PPM frames");
  cmd_classify->add_option("--model", classify_args.model, "Model JSON")->required();
  cmd_classify->add_option("--manifest", classify_args.manifest, "Manifest JSON");
  cmd_classify->add_option("--sequence", classify_args.sequence, "Sequence name in the manifest");
  cmd_classify->add_option("--images", classify_args.images, "PPM frames in order");
  cmd_classify->add_option("--out", classify_args.out, "Posteriors CSV")->required();

  SegmentArgs seg;
  auto *cmd_segment = app.add_subcommand("segment", "Segment a video from positive-only posteriors");
  cmd_segment->add_option("--posteriors", seg.posteriors, "Positive-only posteriors CSV")->required();
  auto *k_opt = cmd_segment->add_option("--k", seg.k, "Rejection window K (HoloLens selection)")->capture_default_str();
  auto *eps_opt = cmd_segment->add_option("--epsilon", seg.epsilon, "HMM switch probability epsilon (HoloLens selection)")->capture_default_str();
  cmd_segment->add_option("--preset", seg.preset, "hololens: K=50 epsilon=1e-152; gopro: K=300 epsilon=1e-171 (explicit --k/--epsilon win)")
      ->check(CLI::IsMember({"hololens", "gopro"}));
  cmd_segment->add_option("--frame-rate", seg.frame_rate, "Frames per second recorded in outputs")->capture_default_str();
  cmd_segment->add_flag("--emit-intermediate", seg.emit_intermediate,
                        "Also write discrimination, rejection and smoothed labels next to --out");
  cmd_segment->add_option("--out", seg.out, "Segmentation JSON")->required();

  EvalArgs ev;
  auto *cmd_eval = app.add_subcommand("eval", "Score segmentations against ground truth and write a JSON + HTML report");
  cmd_eval->add_option("--pred", ev.pred, "Segmentation JSON (repeatable)")->required();
  cmd_eval->add_option("--gt", ev.gt, "Ground-truth labels CSV (repeatable, paired with --pred)")->required();
  cmd_eval->add_option("--name", ev.names, "Column name per sequence (repeatable)");
  cmd_eval->add_option("--manifest", ev.manifest, "Manifest JSON providing class names");
  cmd_eval->add_option("--classes", ev.classes, "Positive classes M (default: inferred)");
  cmd_eval->add_option("--out", ev.out, "Report prefix (<prefix>.json, <prefix>.html)")->required();

  TuneArgs tune;
  auto *cmd_tune = app.add_subcommand("tune", "Grid search over K and epsilon on a validation sequence");
  cmd_tune->add_option("--posteriors", tune.posteriors, "Positive-only posteriors CSV")->required();
  cmd_tune->add_option("--gt", tune.gt, "Ground-truth labels CSV")->required();
  cmd_tune->add_option("--grid", tune.grid,
                       "Grid file (k_values, epsilon_values or epsilon_min/max/count, objective); "
                       "default K in {50,100,300}, 30 log-spaced epsilon in [1e-300,1e-2], masf1");
  cmd_tune->add_option("--objective", tune.objective, "masf1 or mff1 (overrides the grid file)")
      ->check(CLI::IsMember({"masf1", "mff1"}));
  cmd_tune->add_option("--threads", tune.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd_tune->add_option("--out", tune.out, "Score table JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  seg.k_given = k_opt->count() > 0;
  seg.epsilon_given = eps_opt->count() > 0;

  try {
    if (*cmd_synth) return run_synth(synth);
    if (*cmd_train) return run_train(train);
    if (*cmd_classify) return run_classify(classify_args);
    if (*cmd_segment) return run_segment(seg);
    if (*cmd_eval) return run_eval(ev);
    if (*cmd_tune) return run_tune(tune);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
