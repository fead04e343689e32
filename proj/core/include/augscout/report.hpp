#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "augscout/analysis.hpp"
#include "augscout/scout.hpp"

namespace augscout {

struct ReportConfig {
  std::vector<std::string> class_subset;  // empty: all classes (subset rule for K > 20)
  std::vector<std::string> formats = {"plot", "table", "csv", "json"};
  std::filesystem::path output_dir;
  bool include_mean = true;
  bool mark_peaks = true;
};

/// For legibility on high-K sweeps: the six classes with the largest
/// accuracy spread (max - min over the curve), ties by name.
std::vector<std::string> default_class_subset(const CurveSet& curves, std::size_t count = 6);

struct PlotArtifacts {
  std::filesystem::path image;    // SVG panel
  std::filesystem::path sidecar;  // JSON description of every drawn element
};

/// One axes panel: x = alpha percent, y = accuracy; one line per class, the
/// mean curve visually distinguished, and a dotted vertical at each class's
/// best alpha when mark_peaks is set. The sidecar lists lines and verticals
/// so plot correctness is testable without image diffing.
PlotArtifacts render_curve_plot(const CurveSet& curves, const ReportConfig& config);

/// Appendix-style text table: blocks of six columns with "Random Crop alpha" /
/// "Test Accuracy" rows, classes sorted by best accuracy descending (ties by
/// name), mean and ideal rows appended last. Numbers use shortest round-trip
/// decimals so the printed table re-parses losslessly.
std::string render_table(const FixtureTable& table);
std::string render_table(std::span<const PeakSummary> peaks, const FixtureRow& mean_row,
                         const FixtureRow& ideal_row, const std::string& variant);

/// Inverse of render_table; also accepts the bundled fixture layout.
FixtureTable parse_table(const std::string& text);

/// CSV: header + one row per (class curve, alpha); columns
/// dataset,arch,policy,class,alpha_percent,mean_acc,std_acc,n_runs.
void export_csv(const CurveSet& curves, const std::filesystem::path& path);
CurveSet import_csv(const std::filesystem::path& path);

/// Schema-versioned JSON curve document (augscout/1), identical in shape to
/// aggregate() output and the bundled curve fixtures.
void export_json(const CurveSet& curves, const std::filesystem::path& path);
CurveSet import_json(const std::filesystem::path& path);

}  // namespace augscout
