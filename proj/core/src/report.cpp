#include "mtgender/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mtgender/csv.hpp"
#include "mtgender/errors.hpp"
#include "mtgender/hashing.hpp"

namespace fs = std::filesystem;

namespace mtg {
namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::string approach_number(Approach a) { return std::to_string(static_cast<int>(a)); }

// A CSV read back with 1-based file line numbers per row (header is line 1).
struct SourcedTable {
  std::string file;
  csv::Table table;

  std::string line_of(std::size_t row) const { return file + ":" + std::to_string(row + 2); }
  const std::string& cell(std::size_t row, std::string_view column) const {
    return table.rows[row].at(table.column(column));
  }
};

SourcedTable read_table(const fs::path& dir, const char* name) {
  std::ifstream in(dir / name);
  if (!in) throw SchemaError(std::string("missing analysis output '") + name + "' in " + dir.string());
  return {name, csv::read(in)};
}

double to_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw SchemaError("expected a number, got '" + s + "'");
  }
}

// Minimal SVG plotting: axes, polylines and bars.
class Svg {
 public:
  Svg(int width, int height) : width_(width), height_(height) {}

  void text(double x, double y, const std::string& s, int size = 12, const char* anchor = "middle") {
    body_ += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" font-size="{}" text-anchor="{}">{}</text>)", x, y, size,
                         anchor, escape(s)) + "\n";
  }
  void line(double x1, double y1, double x2, double y2, const char* color = "#333") {
    body_ += fmt::format(R"(<line x1="{:.1f}" y1="{:.1f}" x2="{:.1f}" y2="{:.1f}" stroke="{}"/>)", x1, y1, x2, y2,
                         color) + "\n";
  }
  void rect(double x, double y, double w, double h, const char* color) {
    body_ += fmt::format(R"(<rect x="{:.1f}" y="{:.1f}" width="{:.1f}" height="{:.1f}" fill="{}"/>)", x, y, w, h,
                         color) + "\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const char* color) {
    std::string p;
    for (const auto& [x, y] : pts) p += fmt::format("{:.1f},{:.1f} ", x, y);
    body_ += fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>)", color, p) + "\n";
    for (const auto& [x, y] : pts) {
      body_ += fmt::format(R"(<circle cx="{:.1f}" cy="{:.1f}" r="3" fill="{}"/>)", x, y, color) + "\n";
    }
  }
  void save(const fs::path& path) const {
    auto out = open_output(path);
    out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif">)",
                       width_, height_)
        << "\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_ << "</svg>\n";
  }

 private:
  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out.push_back(c);
      }
    }
    return out;
  }

  int width_;
  int height_;
  std::string body_;
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

struct Panel {
  double x, y, w, h;
};

// Axes with a 0-100 y range.
void percent_axes(Svg& svg, const Panel& p, const std::string& title) {
  svg.text(p.x + p.w / 2, p.y - 8, title, 13);
  svg.line(p.x, p.y + p.h, p.x + p.w, p.y + p.h);
  svg.line(p.x, p.y, p.x, p.y + p.h);
  for (int v = 0; v <= 100; v += 25) {
    const double y = p.y + p.h - p.h * v / 100.0;
    svg.line(p.x - 4, y, p.x, y);
    svg.text(p.x - 6, y + 4, std::to_string(v), 10, "end");
  }
}

void bar_chart(const fs::path& path, const std::string& title, const std::vector<std::pair<std::string, double>>& bars) {
  const int width = std::max(420, 60 + 48 * static_cast<int>(bars.size()));
  Svg svg(width, 320);
  const Panel panel{50, 40, width - 70.0, 230};
  percent_axes(svg, panel, title);
  if (bars.empty()) svg.text(panel.x + panel.w / 2, panel.y + panel.h / 2, "no data");
  const double slot = bars.empty() ? 0 : panel.w / bars.size();
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double h = panel.h * std::clamp(bars[i].second, 0.0, 100.0) / 100.0;
    const double x = panel.x + slot * i + slot * 0.15;
    svg.rect(x, panel.y + panel.h - h, slot * 0.7, h, kPalette[0]);
    svg.text(x + slot * 0.35, panel.y + panel.h + 16, bars[i].first, 10);
    svg.text(x + slot * 0.35, panel.y + panel.h - h - 4, fmt::format("{:.1f}", bars[i].second), 9);
  }
  svg.save(path);
}

}  // namespace

std::string format_percent(double value) { return csv::fixed(value, 2); }
std::string format_parameter(double value) { return csv::number(value); }

std::vector<fs::path> write_analysis(const AnalysisOutcome& analysis, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written;

  {
    auto out = open_output(out_dir / kOverlapCsv);
    csv::write_row(out, {"approach", "parameter", "mode", "denominator", "overlap_pct", "jaccard_mean", "excluded"});
    for (const auto& cfg : analysis.configurations) {
      for (const auto& r : cfg.overlaps) {
        std::string excluded;
        for (const auto& id : r.excluded) excluded += (excluded.empty() ? "" : ";") + id;
        csv::write_row(out, {approach_number(cfg.approach), format_parameter(cfg.parameter),
                             std::string(to_string(r.mode)), std::to_string(r.denominator),
                             format_percent(r.percentage), csv::fixed(r.jaccard_mean, 4), excluded});
      }
    }
    written.push_back(out_dir / kOverlapCsv);
  }
  {
    auto out = open_output(out_dir / kSweepSummaryCsv);
    csv::write_row(out, {"approach", "mode", "grid_size", "mean_pct", "std_pct", "best_parameter", "best_pct"});
    for (const auto& row : analysis.sweep_summary) {
      csv::write_row(out, {approach_number(row.approach), std::string(to_string(row.mode)),
                           std::to_string(row.grid_size), format_percent(row.stats.mean),
                           format_percent(row.stats.stddev), format_parameter(row.stats.best_parameter),
                           format_percent(row.stats.best_percentage)});
    }
    written.push_back(out_dir / kSweepSummaryCsv);
  }
  {
    auto out = open_output(out_dir / kSweepsCsv);
    csv::write_row(out, {"sentence_id", "approach", "parameter", "selected"});
    for (const auto& cfg : analysis.configurations) {
      for (const auto& sel : cfg.selections) {
        std::string words;
        for (const auto& w : sel.words) words += (words.empty() ? "" : ";") + w.word + "@" + std::to_string(w.position);
        csv::write_row(out, {sel.sentence_id, approach_number(cfg.approach), format_parameter(cfg.parameter), words});
      }
    }
    written.push_back(out_dir / kSweepsCsv);
  }
  {
    auto out = open_output(out_dir / kPosCsv);
    csv::write_row(out, {"approach", "parameter", "pos", "count", "percent"});
    for (const auto& cfg : analysis.configurations) {
      for (const auto& [tag, share] : cfg.pos) {
        csv::write_row(out, {approach_number(cfg.approach), format_parameter(cfg.parameter), tag,
                             std::to_string(share.count), format_percent(share.percent)});
      }
    }
    written.push_back(out_dir / kPosCsv);
  }
  {
    auto out = open_output(out_dir / kDistanceCsv);
    csv::write_row(out, {"approach", "parameter", "distance", "word_count", "word_share", "sentence_count",
                         "presence_rate"});
    for (const auto& cfg : analysis.configurations) {
      const auto& d = cfg.distances;
      for (const auto& [dist, count] : d.word_counts) {
        csv::write_row(out, {approach_number(cfg.approach), format_parameter(cfg.parameter), std::to_string(dist),
                             std::to_string(count), format_percent(d.word_share.at(dist)),
                             std::to_string(d.sentence_presence.at(dist)), format_percent(d.presence_rate.at(dist))});
      }
    }
    written.push_back(out_dir / kDistanceCsv);
  }
  {
    auto out = open_output(out_dir / kOutliersCsv);
    csv::write_row(out, {"approach", "parameter", "sentence_id", "position", "word", "pos"});
    for (const auto& cfg : analysis.configurations) {
      for (const auto& o : cfg.outliers) {
        csv::write_row(out, {approach_number(cfg.approach), format_parameter(cfg.parameter), o.sentence_id,
                             std::to_string(o.position), o.word, o.pos});
      }
    }
    written.push_back(out_dir / kOutliersCsv);
  }
  return written;
}

std::vector<fs::path> write_report(const fs::path& out_dir, ReportFormat format) {
  const auto overlap = read_table(out_dir, kOverlapCsv);
  const auto summary = read_table(out_dir, kSweepSummaryCsv);
  const auto pos = read_table(out_dir, kPosCsv);
  const auto distance = read_table(out_dir, kDistanceCsv);

  // The configuration for the linguistic tables: approach 4 at 20% when it
  // was swept, else the first approach-4 row, else the first POS row.
  std::string focus_approach;
  std::string focus_parameter;
  for (std::size_t r = 0; r < overlap.table.rows.size(); ++r) {
    if (overlap.cell(r, "approach") != "4") continue;
    if (focus_approach.empty() || overlap.cell(r, "parameter") == "20") {
      focus_approach = "4";
      focus_parameter = overlap.cell(r, "parameter");
    }
  }
  if (focus_approach.empty() && !pos.table.rows.empty()) {
    focus_approach = pos.cell(0, "approach");
    focus_parameter = pos.cell(0, "parameter");
  }
  auto is_focus = [&](const SourcedTable& t, std::size_t r) {
    return t.cell(r, "approach") == focus_approach && t.cell(r, "parameter") == focus_parameter;
  };

  std::vector<fs::path> written;
  std::ostringstream md;
  md << "# Saliency analysis summary\n\n"
     << "Every number below is copied from the CSV cell named in the `source` column.\n\n";

  md << "## Best overlap per approach\n\n"
     << "| approach | mode | grid size | best parameter | best overlap % | sweep mean % | sweep std % | source |\n"
     << "|---|---|---|---|---|---|---|---|\n";
  for (std::size_t r = 0; r < summary.table.rows.size(); ++r) {
    md << "| " << summary.cell(r, "approach") << " | " << summary.cell(r, "mode") << " | "
       << summary.cell(r, "grid_size") << " | " << summary.cell(r, "best_parameter") << " | "
       << summary.cell(r, "best_pct") << " | " << summary.cell(r, "mean_pct") << " | " << summary.cell(r, "std_pct")
       << " | " << summary.line_of(r) << " |\n";
  }

  md << "\n## Overlap by configuration\n\n"
     << "| approach | parameter | mode | denominator | overlap % | source |\n|---|---|---|---|---|---|\n";
  for (std::size_t r = 0; r < overlap.table.rows.size(); ++r) {
    md << "| " << overlap.cell(r, "approach") << " | " << overlap.cell(r, "parameter") << " | "
       << overlap.cell(r, "mode") << " | " << overlap.cell(r, "denominator") << " | "
       << overlap.cell(r, "overlap_pct") << " | " << overlap.line_of(r) << " |\n";
  }

  md << "\n## Parts of speech of salient words\n\n";
  std::vector<std::pair<std::string, double>> pos_bars;
  if (focus_approach.empty()) {
    md << "No configuration available.\n";
  } else {
    md << "Configuration: approach " << focus_approach << ", parameter " << focus_parameter << ".\n\n"
       << "| approach | parameter | pos | count | percent | source |\n|---|---|---|---|---|---|\n";
    std::size_t rows = 0;
    for (std::size_t r = 0; r < pos.table.rows.size(); ++r) {
      if (!is_focus(pos, r)) continue;
      ++rows;
      md << "| " << pos.cell(r, "approach") << " | " << pos.cell(r, "parameter") << " | " << pos.cell(r, "pos")
         << " | " << pos.cell(r, "count") << " | " << pos.cell(r, "percent") << " | " << pos.line_of(r) << " |\n";
      pos_bars.emplace_back(pos.cell(r, "pos"), to_double(pos.cell(r, "percent")));
    }
    if (rows == 0) md << "\n(no parses were supplied)\n";
  }
  std::stable_sort(pos_bars.begin(), pos_bars.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  md << "\n## Dependency distance to the referent\n\n";
  std::vector<std::pair<std::string, double>> distance_bars;
  if (!focus_approach.empty()) {
    md << "| approach | parameter | distance | words | word share % | sentences | presence % | source |\n"
       << "|---|---|---|---|---|---|---|---|\n";
    for (std::size_t r = 0; r < distance.table.rows.size(); ++r) {
      if (!is_focus(distance, r)) continue;
      md << "| " << distance.cell(r, "approach") << " | " << distance.cell(r, "parameter") << " | "
         << distance.cell(r, "distance") << " | " << distance.cell(r, "word_count") << " | "
         << distance.cell(r, "word_share") << " | " << distance.cell(r, "sentence_count") << " | "
         << distance.cell(r, "presence_rate") << " | " << distance.line_of(r) << " |\n";
      distance_bars.emplace_back(distance.cell(r, "distance"), to_double(distance.cell(r, "word_share")));
    }
  }
  md << "\nModel-salient words no annotator marked are listed in `" << kOutliersCsv << "`.\n";

  {
    auto out = open_output(out_dir / kSummaryMd);
    out << md.str();
    written.push_back(out_dir / kSummaryMd);
  }
  if (format == ReportFormat::kCsvOnly) return written;

  // sweeps.svg: one panel per approach, one line per annotation mode.
  {
    std::map<std::string, std::map<std::string, std::vector<std::pair<double, double>>>> series;
    for (std::size_t r = 0; r < overlap.table.rows.size(); ++r) {
      series[overlap.cell(r, "approach")][overlap.cell(r, "mode")].emplace_back(
          to_double(overlap.cell(r, "parameter")), to_double(overlap.cell(r, "overlap_pct")));
    }
    Svg svg(820, 640);
    int index = 0;
    for (const auto& [approach, modes] : series) {
      const Panel p{70.0 + 400 * (index % 2), 50.0 + 300 * (index / 2), 320, 220};
      percent_axes(svg, p, "Approach " + approach + ": overlap % by parameter");
      double lo = 1e300;
      double hi = -1e300;
      for (const auto& [mode, pts] : modes) {
        for (const auto& pt : pts) {
          lo = std::min(lo, pt.first);
          hi = std::max(hi, pt.first);
        }
      }
      const double span = hi > lo ? hi - lo : 1.0;
      int color = 0;
      for (const auto& [mode, pts] : modes) {
        std::vector<std::pair<double, double>> xy;
        for (const auto& [x, y] : pts) {
          const double px = hi > lo ? p.x + p.w * (x - lo) / span : p.x + p.w / 2;
          xy.emplace_back(px, p.y + p.h - p.h * std::clamp(y, 0.0, 100.0) / 100.0);
        }
        svg.polyline(xy, kPalette[color]);
        svg.text(p.x + p.w - 4, p.y + 14 + 14 * color, mode, 10, "end");
        ++color;
      }
      svg.text(p.x, p.y + p.h + 16, format_parameter(lo), 10, "start");
      svg.text(p.x + p.w, p.y + p.h + 16, format_parameter(hi), 10, "end");
      ++index;
    }
    svg.save(out_dir / "sweeps.svg");
    written.push_back(out_dir / "sweeps.svg");
  }
  // modes.svg: all vs min2 for the focus approach.
  {
    std::vector<std::string> params;
    std::map<std::string, std::map<std::string, double>> values;
    for (std::size_t r = 0; r < overlap.table.rows.size(); ++r) {
      if (overlap.cell(r, "approach") != focus_approach) continue;
      const auto& param = overlap.cell(r, "parameter");
      if (std::find(params.begin(), params.end(), param) == params.end()) params.push_back(param);
      values[param][overlap.cell(r, "mode")] = to_double(overlap.cell(r, "overlap_pct"));
    }
    const int width = std::max(480, 80 + 60 * static_cast<int>(params.size()));
    Svg svg(width, 340);
    const Panel p{50, 40, width - 70.0, 240};
    percent_axes(svg, p, "Approach " + focus_approach + ": all annotations vs min. 2 agree");
    const double slot = params.empty() ? 0 : p.w / params.size();
    for (std::size_t i = 0; i < params.size(); ++i) {
      int k = 0;
      for (const char* mode : {"all", "min2"}) {
        const auto it = values[params[i]].find(mode);
        if (it != values[params[i]].end()) {
          const double h = p.h * std::clamp(it->second, 0.0, 100.0) / 100.0;
          svg.rect(p.x + slot * i + slot * (0.1 + 0.4 * k), p.y + p.h - h, slot * 0.38, h, kPalette[k]);
        }
        ++k;
      }
      svg.text(p.x + slot * (i + 0.5), p.y + p.h + 16, params[i], 10);
    }
    svg.text(p.x + p.w - 4, p.y + 14, "all", 10, "end");
    svg.text(p.x + p.w - 4, p.y + 28, "min2", 10, "end");
    svg.save(out_dir / "modes.svg");
    written.push_back(out_dir / "modes.svg");
  }
  bar_chart(out_dir / "pos.svg", "POS of salient words (%)", pos_bars);
  written.push_back(out_dir / "pos.svg");
  bar_chart(out_dir / "distance.svg", "Dependency distance to referent (% of words)", distance_bars);
  written.push_back(out_dir / "distance.svg");
  return written;
}

std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "absent";
  std::stringstream buf;
  buf << in.rdbuf();
  return to_hex(fnv1a64(buf.str()));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& path, const RunManifest& manifest) {
  nlohmann::json obj;
  obj["command"] = manifest.command;
  obj["config_hash"] = manifest.config_hash;
  obj["corpus_hash"] = manifest.corpus_hash;
  obj["backend"] = {{"id", manifest.backend_id}, {"version", manifest.backend_version}};
  obj["timestamp"] = manifest.timestamp;
  obj["outputs"] = manifest.outputs;
  auto out = open_output(path);
  out << obj.dump(2) << '\n';
}

}  // namespace mtg
