#include "augscout/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "augscout/errors.hpp"

namespace augscout {

PeakSummary peak(const AccuracyCurve& curve) {
  if (curve.points.empty()) raise(ErrorCode::EmptyCurve, "peak of empty curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (curve.points[i].mean_acc > curve.points[best].mean_acc) best = i;  // ties keep smallest alpha
  }
  return PeakSummary{curve.class_name, curve.points[best].alpha, curve.points[best].mean_acc};
}

DropoffSummary dropoff(const AccuracyCurve& curve, double tau, int window) {
  if (curve.points.empty()) raise(ErrorCode::EmptyCurve, "dropoff of empty curve");
  if (!(tau > 0.0 && tau <= 1.0) || window < 1) {
    raise(ErrorCode::InvalidConfig, "dropoff needs tau in (0, 1] and window >= 1");
  }
  DropoffSummary summary;
  summary.class_name = curve.class_name;
  summary.tau = tau;
  summary.window = window;

  const PeakSummary pk = peak(curve);
  const double cutoff = tau * pk.best_accuracy;
  const auto& pts = curve.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].alpha <= pk.best_alpha) continue;
    if (i + window > pts.size()) break;  // not enough room to stay below
    bool holds = true;
    for (int k = 0; k < window; ++k) {
      if (!(pts[i + k].mean_acc < cutoff)) {
        holds = false;
        break;
      }
    }
    if (holds) {
      summary.threshold_alpha = pts[i].alpha;
      break;
    }
  }
  return summary;
}

double default_phase_epsilon(const AccuracyCurve& curve) {
  if (curve.points.empty()) return 0.0;
  double sum = 0.0;
  for (const CurvePoint& p : curve.points) sum += p.std_acc;
  return 2.0 * sum / static_cast<double>(curve.points.size());
}

PhaseSegmentation phases(const AccuracyCurve& mean_curve, std::optional<double> epsilon) {
  const auto& pts = mean_curve.points;
  if (pts.size() < 3) raise(ErrorCode::TooFewPoints, "phase segmentation needs >= 3 points");
  const double eps = epsilon.value_or(default_phase_epsilon(mean_curve));

  const std::size_t n_intervals = pts.size() - 1;
  std::vector<double> delta(n_intervals);
  for (std::size_t i = 0; i < n_intervals; ++i) {
    delta[i] = pts[i + 1].mean_acc - pts[i].mean_acc;
  }

  // Longest prefix that keeps rising (within tolerance), then the falling run
  // through the last steep drop, then the level tail.
  std::size_t rise_end = 0;
  while (rise_end < n_intervals && delta[rise_end] >= -eps) ++rise_end;
  std::size_t fall_end = rise_end;
  for (std::size_t i = rise_end; i < n_intervals; ++i) {
    if (delta[i] < -eps) fall_end = i + 1;
  }

  PhaseSegmentation seg;
  seg.labels.resize(n_intervals);
  for (std::size_t i = 0; i < n_intervals; ++i) {
    seg.labels[i] = i < rise_end    ? PhaseLabel::increase
                    : i < fall_end  ? PhaseLabel::fall
                                    : PhaseLabel::level_off;
  }
  seg.rise_end = pts[rise_end].alpha;
  seg.fall_end = pts[fall_end].alpha;
  if (fall_end < n_intervals) {
    double sum = 0.0;
    for (std::size_t i = fall_end; i < pts.size(); ++i) sum += pts[i].mean_acc;
    seg.level_value = sum / static_cast<double>(pts.size() - fall_end);
  }
  return seg;
}

double ideal_accuracy(std::span<const PeakSummary> peaks) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const PeakSummary& p : peaks) {
    if (p.class_name == "mean") continue;
    sum += p.best_accuracy;
    ++count;
  }
  if (count == 0) raise(ErrorCode::NoClasses, "ideal accuracy needs at least one class");
  return sum / static_cast<double>(count);
}

double ideal_accuracy(std::span<const AccuracyCurve> curves) {
  std::vector<PeakSummary> peaks;
  for (const AccuracyCurve& curve : curves) {
    if (curve.class_name == "mean") continue;
    peaks.push_back(peak(curve));
  }
  return ideal_accuracy(std::span<const PeakSummary>(peaks));
}

PolicyComparison compare_policies(const CurveSet& a, const CurveSet& b) {
  if (a.class_names != b.class_names) {
    raise(ErrorCode::GridMismatch, "policy comparison needs identical class sets");
  }
  PolicyComparison cmp;
  for (const AccuracyCurve& curve_a : a.curves) {
    const AccuracyCurve* curve_b = b.find(curve_a.class_name);
    if (curve_b == nullptr) {
      raise(ErrorCode::GridMismatch, "class " + curve_a.class_name + " missing from second sweep");
    }
    if (curve_a.points.size() != curve_b->points.size()) {
      raise(ErrorCode::GridMismatch, "alpha grids differ for class " + curve_a.class_name);
    }
    for (std::size_t i = 0; i < curve_a.points.size(); ++i) {
      if (curve_a.points[i].alpha != curve_b->points[i].alpha) {
        raise(ErrorCode::GridMismatch, "alpha grids differ for class " + curve_a.class_name);
      }
    }
    const PeakSummary pa = peak(curve_a);
    const PeakSummary pb = peak(*curve_b);
    PolicyShift shift;
    shift.class_name = curve_a.class_name;
    shift.alpha_shift = pb.best_alpha.value() - pa.best_alpha.value();
    shift.accuracy_shift = pb.best_accuracy - pa.best_accuracy;
    cmp.shifts.push_back(shift);
  }
  double alpha_sum = 0.0, acc_sum = 0.0;
  std::size_t count = 0;
  for (const PolicyShift& s : cmp.shifts) {
    if (s.class_name == "mean") continue;
    alpha_sum += s.alpha_shift;
    acc_sum += s.accuracy_shift;
    ++count;
  }
  if (count > 0) {
    cmp.mean_alpha_shift = alpha_sum / static_cast<double>(count);
    cmp.mean_accuracy_shift = acc_sum / static_cast<double>(count);
  }
  return cmp;
}

std::vector<std::string> robustness_ranking(std::span<const DropoffSummary> dropoffs) {
  for (const DropoffSummary& d : dropoffs) {
    if (d.tau != dropoffs.front().tau || d.window != dropoffs.front().window) {
      raise(ErrorCode::InvalidConfig, "drop-off summaries mix tau/window settings");
    }
  }
  std::vector<const DropoffSummary*> sorted;
  for (const DropoffSummary& d : dropoffs) sorted.push_back(&d);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const DropoffSummary* x, const DropoffSummary* y) {
                     const bool x_never = !x->threshold_alpha.has_value();
                     const bool y_never = !y->threshold_alpha.has_value();
                     if (x_never != y_never) return x_never;  // never-collapsing first
                     if (!x_never && *x->threshold_alpha != *y->threshold_alpha) {
                       return *x->threshold_alpha > *y->threshold_alpha;
                     }
                     return x->class_name < y->class_name;
                   });
  std::vector<std::string> ranking;
  ranking.reserve(sorted.size());
  for (const DropoffSummary* d : sorted) ranking.push_back(d->class_name);
  return ranking;
}

std::vector<PeakSummary> FixtureTable::class_peaks() const {
  std::vector<PeakSummary> peaks;
  peaks.reserve(classes.size());
  for (const FixtureRow& row : classes) {
    peaks.push_back({row.name, row.alpha.value_or(Percent::from_int(0)), row.accuracy});
  }
  return peaks;
}

const char* fixture_variant_name(FixtureVariant variant) {
  return variant == FixtureVariant::without_flip ? "without_flip" : "with_flip";
}

}  // namespace augscout
