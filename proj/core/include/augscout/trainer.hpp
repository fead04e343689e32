#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "augscout/augment.hpp"
#include "augscout/dataset.hpp"
#include "augscout/percent.hpp"

namespace augscout {

/// Early stopping on validation accuracy: stop after `patience` consecutive
/// epochs without strict improvement over the best metric seen, restoring the
/// best-epoch weights when restore_best is set.
struct EarlyStopSpec {
  int patience = 5;
  bool restore_best = true;

  static constexpr int kNoPatienceLimit = std::numeric_limits<int>::max();
};

struct TrainerSpec {
  std::string architecture_id;
  double learning_rate = 1e-3;
  int batch_size = 32;
  int max_epochs = 20;
  EarlyStopSpec early_stopping;
  std::uint64_t seed = 0;

  void validate() const;  // throws PluginFailure on degenerate values
};

/// Outcome of one trained model. Evaluation always happens on the untouched
/// test split; augmentation only ever touches training batches.
struct RunRecord {
  std::string dataset_id;
  std::string architecture_id;
  AugmentationPolicy policy;
  Percent alpha;  // crop intensity (0 when the policy has no crop)
  std::uint64_t seed = 0;
  std::vector<std::string> class_names;
  std::vector<double> per_class_accuracy;
  std::vector<int> test_class_counts;
  double mean_accuracy = 0.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  int epochs_trained = 0;
  int best_epoch = 0;
  double wall_seconds = 0.0;

  void validate() const;  // throws InvalidSpec on inconsistent fields
};

class EarlyStopper {
public:
  explicit EarlyStopper(const EarlyStopSpec& spec) : spec_(spec) {}

  /// Feed the metric for the next epoch (call in epoch order).
  /// Returns true when training should stop now.
  bool step(double metric);

  int best_epoch() const { return best_epoch_; }      // 1-based; 0 before any step
  double best_metric() const { return best_metric_; }
  int epochs_seen() const { return epoch_; }

private:
  EarlyStopSpec spec_;
  int epoch_ = 0;
  int best_epoch_ = 0;
  double best_metric_ = -std::numeric_limits<double>::infinity();
  int stale_epochs_ = 0;
};

/// accuracy_c = correct_c / count_c for every class in [0, K).
/// Throws EmptyClass if some class never occurs in labels.
std::vector<double> per_class_accuracy(std::span<const int> predictions,
                                       std::span<const int> labels, int num_classes);

/// Test-set-weighted mean of per-class accuracies.
double weighted_mean_accuracy(std::span<const double> per_class, std::span<const int> counts);

// ---------------------------------------------------------------------------
// Plugin registry (in-process)
// ---------------------------------------------------------------------------

using TrainerFn = std::function<RunRecord(
    const TrainerSpec& spec, const LabeledDataset& train, const LabeledDataset& val,
    const LabeledDataset& test, const AugmentationPolicy& policy)>;

void register_trainer(const std::string& architecture_id, TrainerFn fn);
bool trainer_registered(const std::string& architecture_id);
std::vector<std::string> registered_trainers();

/// Trains from scratch per the spec and evaluates on the test split.
/// architecture_id must be registered in-process (subprocess plugins are
/// dispatched by the scout orchestrator, not here).
RunRecord train_and_eval(const TrainerSpec& spec, const LabeledDataset& train,
                         const LabeledDataset& val, const LabeledDataset& test,
                         const AugmentationPolicy& policy);

// ---------------------------------------------------------------------------
// Hyperparameter tuning
// ---------------------------------------------------------------------------

struct TuneCandidate {
  double learning_rate;
  int max_epochs;
  int batch_size;
};

struct TuneResult {
  TrainerSpec spec;        // winning configuration
  double val_accuracy = 0.0;
  double train_accuracy = 0.0;
  std::vector<std::string> failures;  // diagnostics for failed candidates
};

/// Trains every candidate without augmentation, selecting by max validation
/// accuracy; ties break by smaller (train - val) gap, then by batch size
/// closest to the grid median, then by grid order.
TuneResult tune(const std::string& architecture_id, const LabeledDataset& train_full,
                const std::vector<TuneCandidate>& grid, std::uint64_t seed,
                double val_fraction = 0.10,
                const EarlyStopSpec& early_stopping = EarlyStopSpec{});

// ---------------------------------------------------------------------------
// Subprocess plugin protocol
// ---------------------------------------------------------------------------
//
// The orchestrator writes a job description document; the plugin process is
// invoked as `<command> <job.json>` and must write a run-record document to
// job.output_path. Both documents use the augscout/1 persistence schema.

struct JobDescription {
  DatasetRef dataset;
  double val_fraction = 0.10;
  std::uint64_t val_split_seed = 0;
  TrainerSpec spec;
  AugmentationPolicy policy;
  std::filesystem::path output_path;
};

void write_job_document(const JobDescription& job, const std::filesystem::path& path);
JobDescription read_job_document(const std::filesystem::path& path);

/// In-process end of the protocol: resolves the dataset, splits validation,
/// trains, and writes the run record to job.output_path. Returns the record.
RunRecord execute_job_document(const std::filesystem::path& job_file,
                               const std::filesystem::path& cache_root = default_cache_root());

/// Spawns `command <job_file>` and reads back the record from output_path.
/// Throws PluginFailure on nonzero exit or a missing/invalid output document.
RunRecord run_subprocess_job(const std::string& command, const JobDescription& job,
                             const std::filesystem::path& scratch_dir);

/// Reference plugins (registered on startup): "linear_probe" is a softmax
/// regression on raw pixels; "reference_cnn" is a two-block convnet with
/// global pooling and a linear head. Both train with Adam and are
/// bit-deterministic for a fixed seed on one machine.
void register_reference_trainers();

}  // namespace augscout
