#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "egoloc/io.hpp"

namespace egoloc::io {

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 1;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({number++, line});
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  // A trailing newline does not open another record.
  while (!lines.empty() && lines.back().text.empty()) lines.pop_back();
  return lines;
}

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',') {
  std::vector<std::string_view> fields;
  while (true) {
    const std::size_t pos = line.find(sep);
    fields.push_back(trim(line.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return fields;
}

[[noreturn]] void fail(const std::string &source, std::size_t line, const std::string &detail) {
  throw ParseError(source, "line " + std::to_string(line), detail);
}

template <typename Int>
Int parse_int(std::string_view field, const std::string &source, std::size_t line,
              const char *what) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    fail(source, line, std::string("invalid ") + what + " '" + std::string(field) + "'");
  return value;
}

double parse_real(std::string_view field, const std::string &source, std::size_t line,
                  const char *what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty() ||
      !std::isfinite(value))
    fail(source, line, std::string("invalid ") + what + " '" + std::string(field) + "'");
  return value;
}

// Leading "# key=value" lines. Returns the index of the first other line.
std::size_t read_directives(const std::vector<Line> &lines, const std::string &source,
                            std::map<std::string, std::string> &out) {
  std::size_t i = 0;
  for (; i < lines.size() && !lines[i].text.empty() && lines[i].text.front() == '#'; ++i) {
    const std::string_view body = trim(lines[i].text.substr(1));
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string key(trim(body.substr(0, eq)));
    if (key.empty()) fail(source, lines[i].number, "empty directive key");
    out[key] = std::string(trim(body.substr(eq + 1)));
  }
  return i;
}

} // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- labels ---------------------------------------------------------------

LabelSeries parse_labels(std::string_view text, const std::string &source, int num_classes) {
  const auto lines = split_lines(text);
  std::map<std::string, std::string> directives;
  std::size_t i = read_directives(lines, source, directives);

  double frame_rate = 1.0;
  if (auto it = directives.find("frame_rate"); it != directives.end()) {
    frame_rate = parse_real(it->second, source, lines[0].number, "frame_rate");
    if (!(frame_rate > 0)) fail(source, lines[0].number, "frame_rate must be positive");
  }

  if (i >= lines.size()) fail(source, lines.empty() ? 1 : lines.back().number + 1, "missing header");
  const auto header = split_fields(lines[i].text);
  if (header.size() != 2 || header[0] != "frame" || header[1] != "class_id")
    fail(source, lines[i].number, "expected header 'frame,class_id'");
  ++i;

  std::vector<ClassId> labels;
  for (; i < lines.size(); ++i) {
    const auto &line = lines[i];
    const auto fields = split_fields(line.text);
    if (fields.size() != 2)
      fail(source, line.number, "expected 2 fields, found " + std::to_string(fields.size()));
    const auto frame = parse_int<long long>(fields[0], source, line.number, "frame index");
    if (frame != static_cast<long long>(labels.size())) {
      if (frame < static_cast<long long>(labels.size()))
        fail(source, line.number, "duplicate or out-of-order frame " + std::to_string(frame));
      fail(source, line.number,
           "gap: expected frame " + std::to_string(labels.size()) + ", found " + std::to_string(frame));
    }
    const auto c = parse_int<int>(fields[1], source, line.number, "class id");
    if (c < 0 || (num_classes > 0 && c >= num_classes))
      fail(source, line.number, "class id " + std::to_string(c) + " outside catalog range");
    labels.push_back(c);
  }
  if (labels.empty()) fail(source, lines.back().number, "no frames");
  return LabelSeries(std::move(labels), frame_rate);
}

std::string format_labels(const LabelSeries &labels) {
  std::string out;
  out.reserve(labels.size() * 8 + 32);
  if (labels.frame_rate != 1.0) out += "# frame_rate=" + format_double(labels.frame_rate) + "\n";
  out += "frame,class_id\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(labels[i]);
    out += '\n';
  }
  return out;
}

LabelSeries read_labels(const std::filesystem::path &path, int num_classes) {
  return parse_labels(read_file(path), path.string(), num_classes);
}

void write_labels(const std::filesystem::path &path, const LabelSeries &labels) {
  write_file_atomic(path, format_labels(labels));
}

// ---- posteriors -----------------------------------------------------------

PosteriorSeries parse_posteriors(std::string_view text, const std::string &source) {
  const auto lines = split_lines(text);
  std::map<std::string, std::string> directives;
  std::size_t i = read_directives(lines, source, directives);
  if (i >= lines.size()) fail(source, lines.empty() ? 1 : lines.back().number + 1, "missing header");

  const auto header = split_fields(lines[i].text);
  if (header.size() < 2 || header[0] != "frame")
    fail(source, lines[i].number, "expected header 'frame,p...'");
  const PosteriorKind kind = header[1] == "p0" ? PosteriorKind::merged : PosteriorKind::positive_only;
  const int first_class = kind == PosteriorKind::merged ? 0 : 1;
  for (std::size_t c = 1; c < header.size(); ++c)
    if (header[c] != "p" + std::to_string(first_class + static_cast<int>(c) - 1))
      fail(source, lines[i].number,
           "header column " + std::to_string(c + 1) + " should be p" +
               std::to_string(first_class + static_cast<int>(c) - 1));
  if (kind == PosteriorKind::merged && header.size() < 3)
    fail(source, lines[i].number, "merged posterior needs p0 and at least one positive class");
  if (auto it = directives.find("kind"); it != directives.end()) {
    const std::string expected = kind == PosteriorKind::merged ? "merged" : "positive_only";
    if (it->second != "merged" && it->second != "positive_only")
      fail(source, lines[0].number, "unknown kind '" + it->second + "'");
    if (it->second != expected)
      fail(source, lines[i].number, "header columns do not match kind=" + it->second);
  }
  const std::size_t width = header.size() - 1;
  const std::size_t header_line = lines[i].number;
  ++i;

  const std::size_t rows = lines.size() - i;
  if (rows == 0) fail(source, header_line, "no frames");
  PosteriorMatrixXd values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows; ++r, ++i) {
    const auto &line = lines[i];
    const auto fields = split_fields(line.text);
    if (fields.size() != width + 1)
      fail(source, line.number,
           "expected " + std::to_string(width + 1) + " fields, found " + std::to_string(fields.size()));
    const auto frame = parse_int<long long>(fields[0], source, line.number, "frame index");
    if (frame != static_cast<long long>(r))
      fail(source, line.number,
           "expected frame " + std::to_string(r) + ", found " + std::to_string(frame));
    auto row = values.row(static_cast<Eigen::Index>(r));
    for (std::size_t c = 0; c < width; ++c) {
      const double p = parse_real(fields[c + 1], source, line.number, "probability");
      if (p < 0.0 || p > 1.0)
        fail(source, line.number, "frame " + std::to_string(r) + ": probability outside [0,1]");
      row[static_cast<Eigen::Index>(c)] = p;
    }
    const double sum = row.sum();
    if (std::abs(sum - 1.0) > kParseSumTolerance)
      fail(source, line.number,
           "frame " + std::to_string(r) + ": row sums to " + format_double(sum) + ", not 1");
    if (std::abs(sum - 1.0) > 1e-12) row /= sum;
  }
  return PosteriorSeries(std::move(values), kind);
}

std::string format_posteriors(const PosteriorSeries &posterior) {
  const bool merged = posterior.kind() == PosteriorKind::merged;
  std::string out = merged ? "# kind=merged\n" : "# kind=positive_only\n";
  out += "frame";
  for (Eigen::Index c = 0; c < posterior.width(); ++c)
    out += ",p" + std::to_string(posterior.class_of_column(c));
  out += '\n';
  const auto &rows = posterior.rows();
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    out += std::to_string(r);
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      out += ',';
      out += format_double(rows(r, c));
    }
    out += '\n';
  }
  return out;
}

PosteriorSeries read_posteriors(const std::filesystem::path &path) {
  return parse_posteriors(read_file(path), path.string());
}

void write_posteriors(const std::filesystem::path &path, const PosteriorSeries &posterior) {
  write_file_atomic(path, format_posteriors(posterior));
}

// ---- key = value ----------------------------------------------------------

std::map<std::string, std::string> parse_key_values(std::string_view text,
                                                    const std::string &source) {
  std::map<std::string, std::string> kv;
  for (const auto &line : split_lines(text)) {
    std::string_view body = line.text.substr(0, line.text.find('#'));
    body = trim(body);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) fail(source, line.number, "expected 'key = value'");
    const std::string key(trim(body.substr(0, eq)));
    if (key.empty()) fail(source, line.number, "empty key");
    kv[key] = std::string(trim(body.substr(eq + 1)));
  }
  return kv;
}

GridSpec grid_spec_from_key_values(const std::map<std::string, std::string> &kv,
                                   const std::string &source) {
  static const std::vector<std::string> known{"k_values", "epsilon_values", "epsilon_min",
                                              "epsilon_max", "epsilon_count", "objective"};
  auto bad = [&](const std::string &key, const std::string &detail) {
    throw ParseError(source, "key " + key, detail);
  };
  for (const auto &[key, value] : kv)
    if (std::find(known.begin(), known.end(), key) == known.end()) bad(key, "unknown grid key");

  auto number = [&](const std::string &key, std::string_view field) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
      bad(key, "invalid number '" + std::string(field) + "'");
    return v;
  };

  GridSpec spec;
  if (auto it = kv.find("k_values"); it != kv.end()) {
    spec.k_values.clear();
    for (auto field : split_fields(it->second)) {
      const double k = number("k_values", field);
      if (k != std::floor(k) || k < 1) bad("k_values", "K values must be positive integers");
      spec.k_values.push_back(static_cast<int>(k));
    }
  }
  if (auto it = kv.find("epsilon_values"); it != kv.end()) {
    spec.epsilon_values.clear();
    for (auto field : split_fields(it->second))
      spec.epsilon_values.push_back(number("epsilon_values", field));
  } else if (kv.count("epsilon_min") || kv.count("epsilon_max") || kv.count("epsilon_count")) {
    const double lo = kv.count("epsilon_min") ? number("epsilon_min", kv.at("epsilon_min")) : 1e-300;
    const double hi = kv.count("epsilon_max") ? number("epsilon_max", kv.at("epsilon_max")) : 1e-2;
    const double count =
        kv.count("epsilon_count") ? number("epsilon_count", kv.at("epsilon_count")) : 30;
    if (count != std::floor(count) || count < 1)
      bad("epsilon_count", "epsilon_count must be a positive integer");
    try {
      spec.epsilon_values = log_spaced(lo, hi, static_cast<int>(count));
    } catch (const Error &e) {
      bad("epsilon_min", e.what());
    }
  }
  if (auto it = kv.find("objective"); it != kv.end()) {
    try {
      spec.objective = parse_objective(it->second);
    } catch (const Error &e) {
      bad("objective", e.what());
    }
  }
  try {
    spec.validate();
  } catch (const Error &e) {
    throw ParseError(source, "grid", e.what());
  }
  return spec;
}

GridSpec read_grid_spec(const std::filesystem::path &path) {
  return grid_spec_from_key_values(parse_key_values(read_file(path), path.string()),
                                   path.string());
}

} // namespace egoloc::io
