#include <cstdio>
#include <sstream>

#include "egoloc/io.hpp"

namespace egoloc::io {

namespace {

constexpr const char *kReportSchema = "egoloc.report/1";

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string html_escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

Json optional_number(const std::optional<double> &v) {
  return v ? Json(*v) : Json(nullptr);
}

Json scores_to_json(const ClassScores &scores) {
  Json per_class = Json::array();
  for (const auto &s : scores.per_class) per_class.push_back(optional_number(s));
  return Json{{"per_class", std::move(per_class)}, {"mean", optional_number(scores.mean())}};
}

Json vector_to_json(const Eigen::VectorXd &v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json segments_to_json(const Segmentation &seg) {
  Json out = Json::array();
  for (const auto &s : seg.segments) out.push_back(Json::array({s.start, s.end, s.class_id}));
  return out;
}

const ClassScores &pick(const EvalReport &r, ScoreKind kind) {
  return kind == ScoreKind::ff1 ? r.ff1 : r.asf1;
}

// Average of a class's score over the sequences where the class is present.
std::optional<double> class_average(const std::vector<EvalReport> &reports, ClassId c,
                                    ScoreKind kind) {
  double sum = 0.0;
  int count = 0;
  for (const auto &r : reports) {
    const auto &s = pick(r, kind);
    if (s.present(c)) {
      sum += *s.per_class[c];
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

std::optional<double> mean_average(const std::vector<EvalReport> &reports, ScoreKind kind) {
  double sum = 0.0;
  int count = 0;
  for (const auto &r : reports)
    if (auto m = pick(r, kind).mean()) {
      sum += *m;
      ++count;
    }
  if (count == 0) return std::nullopt;
  return sum / count;
}

// Positive classes first, negatives last.
std::vector<ClassId> table_order(const ClassCatalog &catalog) {
  std::vector<ClassId> order;
  for (ClassId c = 1; c < catalog.num_classes(); ++c) order.push_back(c);
  order.push_back(kNegativeClass);
  return order;
}

std::string row_label(const ClassCatalog &catalog, ClassId c) {
  if (c == kNegativeClass) return "Negatives";
  return std::to_string(c) + " " + catalog.name(c);
}

std::string cell_text(const std::optional<double> &v) { return v ? fixed(*v) : "/"; }

std::string class_color(ClassId c, int num_classes) {
  if (c == kNegativeClass) return "#9e9e9e";
  const int hue = (c - 1) * 360 / std::max(1, num_classes - 1);
  return "hsl(" + std::to_string(hue) + ",65%,50%)";
}

void html_strip(std::ostringstream &out, const Segmentation &seg, int num_classes,
                const std::string &id) {
  out << "<svg id=\"" << id << "\" class=\"strip\" viewBox=\"0 0 " << seg.total_frames
      << " 1\" preserveAspectRatio=\"none\" width=\"100%\" height=\"28\">";
  for (const auto &s : seg.segments)
    out << "<rect x=\"" << s.start << "\" y=\"0\" width=\"" << s.length()
        << "\" height=\"1\" fill=\"" << class_color(s.class_id, num_classes) << "\"><title>"
        << s.start << "-" << s.end << ": class " << s.class_id << "</title></rect>";
  out << "</svg>\n";
}

void html_score_table(std::ostringstream &out, const std::vector<EvalReport> &reports,
                      const ClassCatalog &catalog, ScoreKind kind) {
  const char *title = kind == ScoreKind::ff1 ? "FF1" : "ASF1";
  const char *mean_title = kind == ScoreKind::ff1 ? "mFF1" : "mASF1";
  out << "<table class=\"scores\" id=\"" << (kind == ScoreKind::ff1 ? "ff1" : "asf1")
      << "\">\n<caption>" << title
      << " per class. &quot;/&quot; marks a class with no frames in the sequence.</caption>\n";
  out << "<tr><th>Class</th>";
  for (const auto &r : reports) out << "<th>" << html_escape(r.name) << "</th>";
  out << "<th>AVG</th></tr>\n";
  for (ClassId c : table_order(catalog)) {
    out << "<tr><td>" << html_escape(row_label(catalog, c)) << "</td>";
    for (const auto &r : reports) {
      const auto &s = pick(r, kind);
      out << "<td>" << cell_text(s.present(c) ? s.per_class[c] : std::nullopt) << "</td>";
    }
    out << "<td>" << cell_text(class_average(reports, c, kind)) << "</td></tr>\n";
  }
  out << "<tr class=\"mean\"><td>" << mean_title << "</td>";
  for (const auto &r : reports) out << "<td>" << cell_text(pick(r, kind).mean()) << "</td>";
  out << "<td>" << cell_text(mean_average(reports, kind)) << "</td></tr>\n</table>\n";
}

} // namespace

Json report_to_json(const std::vector<EvalReport> &reports, const ClassCatalog &catalog) {
  Json classes = Json::array();
  for (ClassId c = 0; c < catalog.num_classes(); ++c)
    classes.push_back(Json{{"id", c}, {"name", catalog.name(c)}});

  Json sequences = Json::array();
  for (const auto &r : reports) {
    Json confusion_rows = Json::array();
    for (Eigen::Index g = 0; g < r.confusion.rows(); ++g) {
      Json row = Json::array();
      for (Eigen::Index p = 0; p < r.confusion.cols(); ++p) row.push_back(r.confusion(g, p));
      confusion_rows.push_back(std::move(row));
    }
    sequences.push_back(Json{
        {"name", r.name},
        {"frames", r.gt.total_frames},
        {"frame_rate", r.frame_rate},
        {"ff1", scores_to_json(r.ff1)},
        {"asf1", scores_to_json(r.asf1)},
        {"confusion", std::move(confusion_rows)},
        {"dwell_seconds", {{"ground_truth", vector_to_json(r.dwell_gt)},
                           {"predicted", vector_to_json(r.dwell_pred)}}},
        {"segments", {{"ground_truth", segments_to_json(r.gt)},
                      {"predicted", segments_to_json(r.pred)}}}});
  }

  Json ff1_avg = Json::array(), asf1_avg = Json::array();
  for (ClassId c = 0; c < catalog.num_classes(); ++c) {
    ff1_avg.push_back(optional_number(class_average(reports, c, ScoreKind::ff1)));
    asf1_avg.push_back(optional_number(class_average(reports, c, ScoreKind::asf1)));
  }
  return Json{{"schema", kReportSchema},
              {"classes", std::move(classes)},
              {"sequences", std::move(sequences)},
              {"summary",
               {{"ff1_per_class", std::move(ff1_avg)},
                {"asf1_per_class", std::move(asf1_avg)},
                {"mff1", optional_number(mean_average(reports, ScoreKind::ff1))},
                {"masf1", optional_number(mean_average(reports, ScoreKind::asf1))}}}};
}

std::string report_to_html(const std::vector<EvalReport> &reports, const ClassCatalog &catalog) {
  const int classes = catalog.num_classes();
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
         "<title>Localization report</title>\n<style>\n"
         "body{font-family:sans-serif;margin:2em;color:#222}\n"
         "table{border-collapse:collapse;margin:1em 0}\n"
         "td,th{border:1px solid #bbb;padding:3px 8px;text-align:right}\n"
         "td:first-child,th:first-child{text-align:left}\n"
         "tr.mean td{font-weight:bold;border-top:2px solid #444}\n"
         ".strip{display:block;border:1px solid #888;margin:2px 0}\n"
         ".swatch{display:inline-block;width:1em;height:1em;vertical-align:middle;margin-right:4px}\n"
         "</style>\n</head>\n<body>\n<h1>Localization report</h1>\n";

  out << "<h2>Classes</h2>\n<p>";
  for (ClassId c = 0; c < classes; ++c)
    out << "<span class=\"swatch\" style=\"background:" << class_color(c, classes)
        << "\"></span>" << c << " " << html_escape(catalog.name(c)) << "&nbsp;&nbsp; ";
  out << "</p>\n";

  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto &r = reports[i];
    out << "<section class=\"sequence\">\n<h2>" << html_escape(r.name) << "</h2>\n";
    out << "<p>" << r.gt.total_frames << " frames at " << format_double(r.frame_rate)
        << " fps</p>\n<h3>Ground truth</h3>\n";
    html_strip(out, r.gt, classes, "strip-gt-" + std::to_string(i));
    out << "<h3>Prediction</h3>\n";
    html_strip(out, r.pred, classes, "strip-pred-" + std::to_string(i));

    out << "<h3>Time spent per location</h3>\n<table class=\"dwell\">\n"
           "<tr><th>Class</th><th>Ground truth (s)</th><th>Predicted (s)</th></tr>\n";
    for (ClassId c : table_order(catalog))
      out << "<tr><td>" << html_escape(row_label(catalog, c)) << "</td><td>"
          << fixed(r.dwell_gt[c], 1) << "</td><td>" << fixed(r.dwell_pred[c], 1) << "</td></tr>\n";
    out << "</table>\n";

    const Eigen::MatrixXd norm = row_normalized(r.confusion);
    out << "<h3>Confusion matrix (rows: ground truth, normalized)</h3>\n<table class=\"confusion\">\n"
           "<tr><th></th>";
    for (ClassId c = 0; c < classes; ++c) out << "<th>" << c << "</th>";
    out << "</tr>\n";
    for (ClassId g = 0; g < classes; ++g) {
      out << "<tr><th>" << g << " " << html_escape(catalog.name(g)) << "</th>";
      for (ClassId p = 0; p < classes; ++p)
        out << "<td style=\"background:rgba(33,102,172," << fixed(norm(g, p), 3) << ")\">"
            << fixed(norm(g, p)) << "</td>";
      out << "</tr>\n";
    }
    out << "</table>\n</section>\n";
  }

  out << "<h2>Scores</h2>\n";
  html_score_table(out, reports, catalog, ScoreKind::ff1);
  html_score_table(out, reports, catalog, ScoreKind::asf1);
  out << "</body>\n</html>\n";
  return out.str();
}

void write_report(const std::vector<EvalReport> &reports, const ClassCatalog &catalog,
                  const std::filesystem::path &prefix) {
  std::filesystem::path json_path = prefix, html_path = prefix;
  json_path += ".json";
  html_path += ".html";
  write_file_atomic(json_path, report_to_json(reports, catalog).dump(2) + "\n");
  write_file_atomic(html_path, report_to_html(reports, catalog));
}

std::string format_score_table(const std::vector<EvalReport> &reports,
                               const ClassCatalog &catalog, ScoreKind kind) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Class"};
  for (const auto &r : reports) header.push_back(r.name);
  header.emplace_back("AVG");
  rows.push_back(header);
  for (ClassId c : table_order(catalog)) {
    std::vector<std::string> row{row_label(catalog, c)};
    for (const auto &r : reports) {
      const auto &s = pick(r, kind);
      row.push_back(cell_text(s.present(c) ? s.per_class[c] : std::nullopt));
    }
    row.push_back(cell_text(class_average(reports, c, kind)));
    rows.push_back(std::move(row));
  }
  std::vector<std::string> mean_row{kind == ScoreKind::ff1 ? "mFF1" : "mASF1"};
  for (const auto &r : reports) mean_row.push_back(cell_text(pick(r, kind).mean()));
  mean_row.push_back(cell_text(mean_average(reports, kind)));
  rows.push_back(std::move(mean_row));

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto &row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r == rows.size() - 1 || r == 1) {
      std::size_t total = 3 * (width.size() - 1);
      for (auto w : width) total += w;
      out += std::string(total, '-') + "\n";
    }
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const std::string &cell = rows[r][c];
      if (c == 0) out += cell + std::string(width[c] - cell.size(), ' ');
      else out += " | " + std::string(width[c] - cell.size(), ' ') + cell;
    }
    out += '\n';
  }
  return out;
}

} // namespace egoloc::io
