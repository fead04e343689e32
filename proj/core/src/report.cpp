#include "augscout/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "augscout/errors.hpp"
#include "serde.hpp"

namespace augscout {

namespace {

/// Shortest decimal that parses back to the same double, so every printed
/// number round-trips losslessly (and matches the JSON export digit for
/// digit).
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    raise(ErrorCode::IoError, "malformed number: " + text);
  }
  return v;
}

}  // namespace

std::vector<std::string> default_class_subset(const CurveSet& curves, std::size_t count) {
  struct Spread {
    std::string name;
    double spread;
  };
  std::vector<Spread> spreads;
  for (const AccuracyCurve& curve : curves.curves) {
    if (curve.class_name == "mean" || curve.points.empty()) continue;
    double lo = curve.points.front().mean_acc, hi = lo;
    for (const CurvePoint& p : curve.points) {
      lo = std::min(lo, p.mean_acc);
      hi = std::max(hi, p.mean_acc);
    }
    spreads.push_back({curve.class_name, hi - lo});
  }
  std::stable_sort(spreads.begin(), spreads.end(), [](const Spread& a, const Spread& b) {
    if (a.spread != b.spread) return a.spread > b.spread;
    return a.name < b.name;
  });
  std::vector<std::string> subset;
  for (std::size_t i = 0; i < spreads.size() && i < count; ++i) subset.push_back(spreads[i].name);
  return subset;
}

// ---------------------------------------------------------------------------
// SVG plot + sidecar
// ---------------------------------------------------------------------------

namespace {

constexpr int kPlotW = 860, kPlotH = 540;
constexpr int kMarginL = 60, kMarginR = 180, kMarginT = 30, kMarginB = 50;

const char* line_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
                                  "#aec7e8", "#ffbb78"};
  return palette[i % (sizeof palette / sizeof palette[0])];
}

}  // namespace

PlotArtifacts render_curve_plot(const CurveSet& curves, const ReportConfig& config) {
  if (curves.curves.empty()) raise(ErrorCode::RenderFailure, "no curves to plot");

  std::vector<std::string> subset = config.class_subset;
  if (subset.empty()) {
    if (curves.class_names.size() > 20) {
      subset = default_class_subset(curves);
    } else {
      subset = curves.class_names;
    }
  }
  for (const std::string& name : subset) {
    if (curves.find(name) == nullptr) {
      raise(ErrorCode::RenderFailure, "class_subset names unknown class " + name);
    }
  }

  double alpha_lo = 0.0, alpha_hi = 0.0;
  bool first = true;
  for (const AccuracyCurve& curve : curves.curves) {
    for (const CurvePoint& p : curve.points) {
      if (first) {
        alpha_lo = alpha_hi = p.alpha.value();
        first = false;
      } else {
        alpha_lo = std::min(alpha_lo, p.alpha.value());
        alpha_hi = std::max(alpha_hi, p.alpha.value());
      }
    }
  }
  if (first) raise(ErrorCode::RenderFailure, "curves contain no points");
  if (alpha_hi <= alpha_lo) alpha_hi = alpha_lo + 1.0;

  const auto sx = [&](double alpha) {
    return kMarginL + (alpha - alpha_lo) / (alpha_hi - alpha_lo) * (kPlotW - kMarginL - kMarginR);
  };
  const auto sy = [&](double acc) {
    return kPlotH - kMarginB - acc * (kPlotH - kMarginT - kMarginB);
  };

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  const std::string stem = "curves_" + curves.dataset_id + "_" + curves.policy;
  PlotArtifacts artifacts;
  artifacts.image = config.output_dir / (stem + ".svg");
  artifacts.sidecar = config.output_dir / (stem + ".sidecar.json");

  nlohmann::json sidecar = serde::make_document("plot_sidecar");
  sidecar["dataset_id"] = curves.dataset_id;
  sidecar["architecture_id"] = curves.architecture_id;
  sidecar["policy"] = curves.policy;
  sidecar["image"] = artifacts.image.filename().string();
  sidecar["x_range"] = {alpha_lo, alpha_hi};
  sidecar["y_range"] = {0.0, 1.0};
  nlohmann::json lines = nlohmann::json::array();
  nlohmann::json verticals = nlohmann::json::array();

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlotW << "\" height=\""
      << kPlotH << "\" viewBox=\"0 0 " << kPlotW << " " << kPlotH << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  svg << "  <line x1=\"" << kMarginL << "\" y1=\"" << sy(0) << "\" x2=\"" << (kPlotW - kMarginR)
      << "\" y2=\"" << sy(0) << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << kMarginL << "\" y1=\"" << sy(0) << "\" x2=\"" << kMarginL
      << "\" y2=\"" << sy(1) << "\" stroke=\"black\"/>\n";
  for (int acc10 = 0; acc10 <= 10; acc10 += 2) {
    const double acc = acc10 / 10.0;
    svg << "  <text x=\"" << (kMarginL - 8) << "\" y=\"" << (sy(acc) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << format_double(acc) << "</text>\n";
  }
  for (double alpha = 0.0; alpha <= alpha_hi + 1e-9; alpha += 10.0) {
    if (alpha < alpha_lo) continue;
    svg << "  <text x=\"" << sx(alpha) << "\" y=\"" << (kPlotH - kMarginB + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << format_double(alpha) << "</text>\n";
  }
  svg << "  <text x=\"" << (kMarginL + (kPlotW - kMarginL - kMarginR) / 2) << "\" y=\""
      << (kPlotH - 12) << "\" font-size=\"13\" text-anchor=\"middle\">crop alpha (percent)"
      << "</text>\n";
  svg << "  <text x=\"16\" y=\"" << (kPlotH / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (kPlotH / 2)
      << ")\">test accuracy</text>\n";

  std::size_t color_ix = 0;
  int legend_y = kMarginT + 10;
  auto draw_curve = [&](const AccuracyCurve& curve, bool is_mean) {
    const std::string color = is_mean ? "#000000" : line_color(color_ix++);
    svg << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << (is_mean ? 3 : 1.5) << "\" points=\"";
    for (const CurvePoint& p : curve.points) {
      svg << sx(p.alpha.value()) << "," << sy(p.mean_acc) << " ";
    }
    svg << "\"/>\n";
    svg << "  <text x=\"" << (kPlotW - kMarginR + 10) << "\" y=\"" << legend_y
        << "\" font-size=\"11\" fill=\"" << color << "\">" << curve.class_name << "</text>\n";
    legend_y += 15;
    lines.push_back(nlohmann::json{{"class", curve.class_name},
                                   {"points", curve.points.size()},
                                   {"is_mean", is_mean}});
  };

  for (const std::string& name : subset) draw_curve(*curves.find(name), false);
  if (config.include_mean) {
    if (const AccuracyCurve* mean = curves.find("mean")) draw_curve(*mean, true);
  }

  if (config.mark_peaks) {
    for (const std::string& name : subset) {
      const PeakSummary pk = peak(*curves.find(name));
      svg << "  <line x1=\"" << sx(pk.best_alpha.value()) << "\" y1=\"" << sy(0) << "\" x2=\""
          << sx(pk.best_alpha.value()) << "\" y2=\"" << sy(1)
          << "\" stroke=\"#555555\" stroke-dasharray=\"3,4\" stroke-width=\"1\"/>\n";
      verticals.push_back(
          nlohmann::json{{"class", name}, {"alpha", serde::percent_to_json(pk.best_alpha)}});
    }
  }
  svg << "</svg>\n";

  {
    std::ofstream out(artifacts.image);
    if (!out) raise(ErrorCode::RenderFailure, "cannot write " + artifacts.image.string());
    out << svg.str();
  }
  sidecar["lines"] = std::move(lines);
  sidecar["verticals"] = std::move(verticals);
  serde::write_json_file_atomic(sidecar, artifacts.sidecar);
  return artifacts;
}

// ---------------------------------------------------------------------------
// Text table
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kAlphaLabel = "Random Crop alpha";
constexpr const char* kAccuracyLabel = "Test Accuracy";
constexpr int kTableColumns = 6;

std::string alpha_cell(const std::optional<Percent>& alpha) {
  return alpha ? alpha->str() : std::string("N/A");
}

}  // namespace

std::string render_table(const FixtureTable& table) {
  std::vector<FixtureRow> rows = table.classes;
  std::stable_sort(rows.begin(), rows.end(), [](const FixtureRow& a, const FixtureRow& b) {
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.name < b.name;
  });
  rows.push_back(table.mean_row);
  rows.push_back(table.ideal_row);

  std::ostringstream out;
  out << "best-accuracy summary (variant: " << table.variant << ")\n";
  const std::size_t label_w = std::string(kAlphaLabel).size();
  for (std::size_t begin = 0; begin < rows.size(); begin += kTableColumns) {
    const std::size_t end = std::min(rows.size(), begin + kTableColumns);
    std::vector<std::size_t> widths;
    for (std::size_t i = begin; i < end; ++i) {
      widths.push_back(std::max({rows[i].name.size(), alpha_cell(rows[i].alpha).size(),
                                 format_double(rows[i].accuracy).size()}));
    }
    auto emit_row = [&](const std::string& label, auto cell) {
      out << label << std::string(label_w - label.size() + 2, ' ');
      for (std::size_t i = begin; i < end; ++i) {
        const std::string text = cell(rows[i]);
        out << text;
        if (i + 1 < end) out << std::string(widths[i - begin] - text.size() + 2, ' ');
      }
      out << "\n";
    };
    out << "\n";
    emit_row("", [](const FixtureRow& r) { return r.name; });
    emit_row(kAlphaLabel, [](const FixtureRow& r) { return alpha_cell(r.alpha); });
    emit_row(kAccuracyLabel, [](const FixtureRow& r) { return format_double(r.accuracy); });
  }
  return out.str();
}

std::string render_table(std::span<const PeakSummary> peaks, const FixtureRow& mean_row,
                         const FixtureRow& ideal_row, const std::string& variant) {
  if (peaks.empty()) raise(ErrorCode::InvalidSpec, "render_table needs at least one class peak");
  FixtureTable table;
  table.variant = variant;
  for (const PeakSummary& p : peaks) {
    table.classes.push_back({p.class_name, p.best_alpha, p.best_accuracy});
  }
  table.mean_row = mean_row;
  table.ideal_row = ideal_row;
  return render_table(table);
}

FixtureTable parse_table(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  if (lines.empty() || lines.front().rfind("best-accuracy summary (variant: ", 0) != 0) {
    raise(ErrorCode::IoError, "not a best-accuracy summary table");
  }
  FixtureTable table;
  {
    const std::string& header = lines.front();
    const std::size_t open = header.find("variant: ") + 9;
    const std::size_t close = header.rfind(')');
    table.variant = header.substr(open, close - open);
  }

  auto split_cells = [](const std::string& line) {
    std::vector<std::string> cells;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      // Cells are padded with two or more spaces; single spaces stay inside
      // a cell ("Ankle Boot").
      while (j < line.size() && !(line[j] == ' ' && j + 1 < line.size() && line[j + 1] == ' ')) {
        ++j;
      }
      std::string cell = line.substr(i, j - i);
      while (!cell.empty() && cell.back() == ' ') cell.pop_back();
      if (!cell.empty()) cells.push_back(std::move(cell));
      i = j;
    }
    return cells;
  };

  bool saw_mean = false, saw_ideal = false;
  std::size_t i = 1;
  while (i < lines.size()) {
    if (lines[i].empty()) {
      ++i;
      continue;
    }
    if (i + 2 >= lines.size()) {
      raise(ErrorCode::IoError, "incomplete table block near line " + std::to_string(i + 1));
    }
    const std::vector<std::string> names = split_cells(lines[i]);
    std::vector<std::string> alphas = split_cells(lines[i + 1]);
    std::vector<std::string> accs = split_cells(lines[i + 2]);
    if (alphas.empty() || alphas.front() != "Random" || accs.empty() || accs.front() != "Test") {
      raise(ErrorCode::IoError, "malformed table block near line " + std::to_string(i + 1));
    }
    // Strip the row labels ("Random Crop alpha", "Test Accuracy"); the label
    // survives splitting as one cell because of the two-space padding.
    alphas = split_cells(lines[i + 1].substr(std::string(kAlphaLabel).size()));
    accs = split_cells(lines[i + 2].substr(std::string(kAccuracyLabel).size()));
    if (names.size() != alphas.size() || names.size() != accs.size()) {
      raise(ErrorCode::IoError, "table block column mismatch near line " + std::to_string(i + 1));
    }
    for (std::size_t c = 0; c < names.size(); ++c) {
      FixtureRow row;
      row.name = names[c];
      if (alphas[c] != "N/A") row.alpha = Percent::parse(alphas[c]);
      row.accuracy = parse_double(accs[c]);
      if (row.name == "mean") {
        table.mean_row = row;
        saw_mean = true;
      } else if (row.name == "ideal") {
        table.ideal_row = row;
        saw_ideal = true;
      } else {
        table.classes.push_back(std::move(row));
      }
    }
    i += 3;
  }
  if (table.classes.empty() || !saw_mean || !saw_ideal) {
    raise(ErrorCode::IoError, "table lacks class, mean, or ideal rows");
  }
  return table;
}

// ---------------------------------------------------------------------------
// CSV / JSON export
// ---------------------------------------------------------------------------

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

void export_csv(const CurveSet& curves, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  out << "dataset,arch,policy,class,alpha_percent,mean_acc,std_acc,n_runs\n";
  for (const AccuracyCurve& curve : curves.curves) {
    for (const CurvePoint& p : curve.points) {
      out << csv_escape(curves.dataset_id) << "," << csv_escape(curves.architecture_id) << ","
          << csv_escape(curves.policy) << "," << csv_escape(curve.class_name) << ","
          << p.alpha.str() << "," << format_double(p.mean_acc) << ","
          << format_double(p.std_acc) << "," << p.n_runs << "\n";
    }
  }
  if (!out) raise(ErrorCode::IoError, "short write to " + path.string());
}

CurveSet import_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "dataset,arch,policy,class,alpha_percent,mean_acc,std_acc,n_runs") {
    raise(ErrorCode::IoError, path.string() + ": unexpected CSV header");
  }
  CurveSet curves;
  std::map<std::string, std::size_t> index;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = csv_split(line);
    if (fields.size() != 8) raise(ErrorCode::IoError, path.string() + ": bad CSV row");
    if (first) {
      curves.dataset_id = fields[0];
      curves.architecture_id = fields[1];
      curves.policy = fields[2];
      first = false;
    }
    const std::string& class_name = fields[3];
    auto [it, inserted] = index.try_emplace(class_name, curves.curves.size());
    if (inserted) {
      curves.curves.push_back(AccuracyCurve{class_name, {}});
      if (class_name != "mean") curves.class_names.push_back(class_name);
    }
    CurvePoint point;
    point.alpha = Percent::parse(fields[4]);
    point.mean_acc = parse_double(fields[5]);
    point.std_acc = parse_double(fields[6]);
    point.n_runs = static_cast<int>(std::stol(fields[7]));
    curves.curves[it->second].points.push_back(point);
  }
  if (curves.curves.empty()) raise(ErrorCode::IoError, path.string() + ": no data rows");
  return curves;
}

void export_json(const CurveSet& curves, const std::filesystem::path& path) {
  serde::write_json_file_atomic(serde::curve_set_to_json(curves), path);
}

CurveSet import_json(const std::filesystem::path& path) {
  return serde::curve_set_from_json(serde::read_json_file(path));
}

}  // namespace augscout
