#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "augscout/percent.hpp"
#include "augscout/scout.hpp"

namespace augscout {

struct PeakSummary {
  std::string class_name;
  Percent best_alpha;
  double best_accuracy = 0.0;
};

struct DropoffSummary {
  std::string class_name;
  std::optional<Percent> threshold_alpha;  // absent when accuracy never collapses
  double tau = 0.5;
  int window = 2;
};

enum class PhaseLabel { increase, fall, level_off };

/// Three-phase decomposition of a mean-accuracy curve into
/// increase / fall / level_off grid intervals (contiguous, ordered; degenerate
/// phases allowed).
struct PhaseSegmentation {
  Percent rise_end;   // alpha where the increase phase ends (= peak region end)
  Percent fall_end;   // alpha where the fall phase ends
  std::vector<PhaseLabel> labels;  // one per grid interval
  std::optional<double> level_value;  // mean accuracy over the level-off points
};

/// Argmax of mean accuracy; ties go to the smallest alpha.
PeakSummary peak(const AccuracyCurve& curve);

/// Smallest grid alpha strictly after the peak where mean accuracy stays
/// below tau * peak for `window` consecutive grid points.
DropoffSummary dropoff(const AccuracyCurve& curve, double tau = 0.5, int window = 2);

/// Default slope tolerance: 2 x the mean std across the curve's points.
double default_phase_epsilon(const AccuracyCurve& curve);

/// Greedy segmentation: longest prefix of intervals with accuracy change
/// >= -epsilon, then the falling run (through the last interval dropping more
/// than epsilon), then the level tail. Needs at least 3 points.
PhaseSegmentation phases(const AccuracyCurve& mean_curve,
                         std::optional<double> epsilon = std::nullopt);

/// Unweighted mean over classes of each class's best accuracy; the "mean"
/// pseudo-class is excluded. Throws NoClasses when no class curve remains.
double ideal_accuracy(std::span<const AccuracyCurve> curves);
double ideal_accuracy(std::span<const PeakSummary> peaks);

struct PolicyShift {
  std::string class_name;
  double alpha_shift = 0.0;     // positive: policy b peaks at higher alpha
  double accuracy_shift = 0.0;  // positive: policy b peaks higher
};

struct PolicyComparison {
  std::vector<PolicyShift> shifts;  // curve order of the first argument
  double mean_alpha_shift = 0.0;
  double mean_accuracy_shift = 0.0;
};

/// Elementwise peak comparison between two sweeps (identical class sets and
/// alpha grids required; GridMismatch otherwise).
PolicyComparison compare_policies(const CurveSet& a, const CurveSet& b);

/// Descending by drop-off threshold; classes that never collapse rank first;
/// ties (including absent-vs-absent) break by class name.
std::vector<std::string> robustness_ranking(std::span<const DropoffSummary> dropoffs);

// ---------------------------------------------------------------------------
// Bundled fixtures
// ---------------------------------------------------------------------------

enum class FixtureVariant { without_flip, with_flip };

struct FixtureRow {
  std::string name;
  std::optional<Percent> alpha;  // absent for the ideal row
  double accuracy = 0.0;
};

/// Best-accuracy summary table: one row per class plus "mean" and "ideal".
struct FixtureTable {
  std::string variant;  // "without_flip" | "with_flip" | free-form for live tables
  std::vector<FixtureRow> classes;
  FixtureRow mean_row;
  FixtureRow ideal_row;

  std::vector<PeakSummary> class_peaks() const;
};

/// The bundled cifar100 best-accuracy tables (100 classes each, transcribed
/// verbatim including source typos). Parsed from embedded schema-versioned
/// documents; throws FixtureCorrupt if they fail validation.
FixtureTable load_fixtures(FixtureVariant variant);

/// Bundled accuracy-curve documents, shaped exactly like aggregate() output
/// so fixtures and live results share one code path. Reported anchor values
/// are exact; points between anchors are illustrative interpolation.
/// Names: "cifar10_mean", "fashion_mnist_flip", "fashion_mnist_noflip".
CurveSet load_curve_fixture(const std::string& name);
std::vector<std::string> curve_fixture_names();

const char* fixture_variant_name(FixtureVariant variant);

}  // namespace augscout
