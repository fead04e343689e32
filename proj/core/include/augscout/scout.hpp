#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "augscout/augment.hpp"
#include "augscout/dataset.hpp"
#include "augscout/trainer.hpp"

namespace augscout {

/// Which fixed supplementary transforms accompany the swept crop.
struct PolicyTemplate {
  bool flip = true;
  double flip_probability = 0.5;

  AugmentationPolicy instantiate(Percent alpha) const;
  std::string describe() const { return flip ? "crop+flip" : "crop"; }
};

struct PlanConfig {
  DatasetRef dataset;
  std::string architecture_id;
  TrainerSpec trainer;  // per-job seed is derived; trainer.seed is ignored
  PolicyTemplate policy;
  AlphaGrid grid;       // deduped by plan()
  int runs_per_alpha = 4;
  std::uint64_t master_seed = 0;
  double val_fraction = 0.10;
  int generation = 0;   // bumped by refine() so seeds stay disjoint
};

/// A fully-determined sweep: deduped grid, one derived seed per (alpha, run),
/// and a content-hash id that is stable under re-invocation.
struct ExperimentPlan {
  PlanConfig config;
  std::vector<std::vector<std::uint64_t>> seeds;  // [alpha_index][run_index]
  std::string id;

  int total_jobs() const {
    return static_cast<int>(config.grid.size()) * config.runs_per_alpha;
  }
};

ExperimentPlan plan(const PlanConfig& config);

struct BudgetReport {
  long jobs = 0;
  long baseline_jobs = 0;
  double reduction_factor = 0.0;
};

/// Job-count arithmetic against a baseline sweep of baseline_alphas x
/// baseline_runs. Throws DivisionByZero when either side is empty.
BudgetReport budget(const ExperimentPlan& p, long baseline_alphas, long baseline_runs);

// ---------------------------------------------------------------------------
// Persistent store
// ---------------------------------------------------------------------------
//
// Layout: <root>/plan.json holds the plan plus cached job states;
// <root>/runs/<alpha>_<run>.json holds one run-record document per completed
// job. A job is done iff its record document exists and validates; record
// files are finalized by atomic rename, so a killed sweep never leaves a
// half-written "done" job.

enum class JobState { pending, done, failed };

struct JobStatus {
  int alpha_index = 0;
  int run_index = 0;
  JobState state = JobState::pending;
  std::string diagnostic;
};

class ExperimentStore {
public:
  /// Initializes <root> for the plan (creates directories, writes plan.json).
  /// Opening an existing root for the same plan id is allowed; a different
  /// plan id is an InvalidConfig error.
  static ExperimentStore create(const std::filesystem::path& root, const ExperimentPlan& plan);

  /// Opens an existing store; throws IoError / InvalidConfig when absent or
  /// inconsistent.
  static ExperimentStore open(const std::filesystem::path& root);

  const ExperimentPlan& plan() const { return plan_; }
  const std::filesystem::path& root() const { return root_; }

  /// Ground truth scan: re-derives job states from the record documents on
  /// disk plus recorded failure diagnostics.
  std::vector<JobStatus> scan() const;

  std::filesystem::path record_path(int alpha_index, int run_index) const;
  bool record_exists(int alpha_index, int run_index) const;
  std::optional<RunRecord> read_record(int alpha_index, int run_index) const;
  void write_record(int alpha_index, int run_index, const RunRecord& record);

  /// Persists job states into plan.json (single-coordinator operation).
  void write_manifest(const std::vector<JobStatus>& statuses);

private:
  ExperimentStore(std::filesystem::path root, ExperimentPlan plan);

  std::filesystem::path root_;
  ExperimentPlan plan_;
};

struct ExecuteOptions {
  int workers = 1;
  /// Checked between jobs; return true to stop launching new work (the
  /// store stays consistent and a later execute() resumes cleanly).
  std::function<bool()> cancelled;
  /// Instrumentation hook, called once per actually-performed training.
  std::function<void(int alpha_index, int run_index)> on_trained;
  std::filesystem::path cache_root;  // dataset cache override
};

struct ExecuteReport {
  int trained = 0;
  int skipped = 0;
  int failed = 0;
  bool cancelled = false;
  std::vector<std::string> diagnostics;
};

/// Runs every pending job exactly once, skipping completed ones (resume).
/// Failed jobs are retried once within the same call; jobs that fail twice
/// are recorded with diagnostics and reported via Error(PartialCompletion).
/// architecture_id values starting with "exec:" are dispatched through the
/// subprocess protocol; anything else resolves in-process.
ExecuteReport execute(ExperimentStore& store, const ExecuteOptions& options = {});

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct CurvePoint {
  Percent alpha;
  double mean_acc = 0.0;
  double std_acc = 0.0;  // sample std (n-1); 0 when n == 1
  int n_runs = 0;
};

struct AccuracyCurve {
  std::string class_name;
  std::vector<CurvePoint> points;  // alphas strictly increasing
};

/// Aggregate of one sweep: per-class curves followed by a "mean" pseudo-class
/// curve built from the runs' mean accuracies.
struct CurveSet {
  std::string dataset_id;
  std::string architecture_id;
  std::string policy;  // PolicyTemplate::describe() vocabulary
  std::vector<std::string> class_names;  // excludes "mean"
  std::vector<AccuracyCurve> curves;
  std::vector<std::string> warnings;

  const AccuracyCurve* find(const std::string& class_name) const;
  const AccuracyCurve& mean_curve() const;  // throws NoData when absent
};

/// Means and sample stds over the completed runs at every alpha. Alphas with
/// no completed run are dropped; alphas with fewer runs than planned get a
/// warning. Throws NoData when nothing completed at all.
CurveSet aggregate(const ExperimentStore& store);

/// New plan over a finer grid restricted to [alpha_min, alpha_max], deduped;
/// seeds are disjoint from the parent's (generation bump). The range of
/// interest comes from the caller, typically after inspecting curves.
/// Throws EmptyRange when dedupe leaves nothing new.
ExperimentPlan refine(const ExperimentPlan& parent, Percent alpha_min, Percent alpha_max,
                      Percent step, int runs_per_alpha);

}  // namespace augscout
