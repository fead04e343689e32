#include "augscout/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>

#include "augscout/errors.hpp"
#include "augscout/rng.hpp"
#include "serde.hpp"

namespace augscout {

void TrainerSpec::validate() const {
  if (architecture_id.empty()) raise(ErrorCode::PluginFailure, "architecture_id is empty");
  if (!(learning_rate > 0.0)) raise(ErrorCode::PluginFailure, "learning_rate must be positive");
  if (batch_size < 1) raise(ErrorCode::PluginFailure, "batch_size must be positive");
  if (max_epochs < 1) raise(ErrorCode::PluginFailure, "max_epochs must be positive");
  if (early_stopping.patience < 0) raise(ErrorCode::PluginFailure, "patience must be >= 0");
}

void RunRecord::validate() const {
  if (class_names.empty() || per_class_accuracy.size() != class_names.size() ||
      test_class_counts.size() != class_names.size()) {
    raise(ErrorCode::InvalidSpec, "run record class arrays inconsistent");
  }
  for (double acc : per_class_accuracy) {
    if (!(acc >= 0.0 && acc <= 1.0)) raise(ErrorCode::InvalidSpec, "accuracy outside [0, 1]");
  }
  const double recomputed = weighted_mean_accuracy(per_class_accuracy, test_class_counts);
  if (std::abs(recomputed - mean_accuracy) > 1e-9) {
    raise(ErrorCode::InvalidSpec, "mean_accuracy disagrees with per-class accuracies");
  }
  if (best_epoch > epochs_trained || epochs_trained < 0) {
    raise(ErrorCode::InvalidSpec, "epoch bookkeeping inconsistent");
  }
}

bool EarlyStopper::step(double metric) {
  ++epoch_;
  if (metric > best_metric_) {
    best_metric_ = metric;
    best_epoch_ = epoch_;
    stale_epochs_ = 0;
    return false;
  }
  ++stale_epochs_;
  return stale_epochs_ >= std::max(1, spec_.patience);
}

std::vector<double> per_class_accuracy(std::span<const int> predictions,
                                       std::span<const int> labels, int num_classes) {
  if (predictions.size() != labels.size()) {
    raise(ErrorCode::InvalidSpec, "prediction/label size mismatch");
  }
  std::vector<int> correct(num_classes, 0);
  std::vector<int> count(num_classes, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int label = labels[i];
    if (label < 0 || label >= num_classes) {
      raise(ErrorCode::InvalidSpec, "label out of range");
    }
    ++count[label];
    if (predictions[i] == label) ++correct[label];
  }
  std::vector<double> acc(num_classes, 0.0);
  for (int c = 0; c < num_classes; ++c) {
    if (count[c] == 0) {
      raise(ErrorCode::EmptyClass, "class " + std::to_string(c) + " absent from labels");
    }
    acc[c] = static_cast<double>(correct[c]) / count[c];
  }
  return acc;
}

double weighted_mean_accuracy(std::span<const double> per_class, std::span<const int> counts) {
  if (per_class.size() != counts.size() || per_class.empty()) {
    raise(ErrorCode::InvalidSpec, "per-class/count size mismatch");
  }
  double weighted = 0.0;
  long total = 0;
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    weighted += per_class[c] * counts[c];
    total += counts[c];
  }
  if (total == 0) raise(ErrorCode::InvalidSpec, "empty test set");
  return weighted / static_cast<double>(total);
}

namespace {

std::map<std::string, TrainerFn>& registry() {
  static std::map<std::string, TrainerFn> trainers;
  return trainers;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void register_trainer(const std::string& architecture_id, TrainerFn fn) {
  std::lock_guard lock(registry_mutex());
  registry()[architecture_id] = std::move(fn);
}

bool trainer_registered(const std::string& architecture_id) {
  std::lock_guard lock(registry_mutex());
  return registry().count(architecture_id) > 0;
}

std::vector<std::string> registered_trainers() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> ids;
  for (const auto& [id, fn] : registry()) ids.push_back(id);
  return ids;
}

RunRecord train_and_eval(const TrainerSpec& spec, const LabeledDataset& train,
                         const LabeledDataset& val, const LabeledDataset& test,
                         const AugmentationPolicy& policy) {
  spec.validate();
  if (train.class_names != test.class_names || train.class_names != val.class_names) {
    raise(ErrorCode::InvalidSpec, "train/val/test class sets differ");
  }
  register_reference_trainers();
  TrainerFn fn;
  {
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(spec.architecture_id);
    if (it == registry().end()) {
      raise(ErrorCode::PluginFailure, "no trainer registered for '" + spec.architecture_id + "'");
    }
    fn = it->second;
  }
  RunRecord record = fn(spec, train, val, test, policy);
  record.validate();
  return record;
}

TuneResult tune(const std::string& architecture_id, const LabeledDataset& train_full,
                const std::vector<TuneCandidate>& grid, std::uint64_t seed, double val_fraction,
                const EarlyStopSpec& early_stopping) {
  if (grid.empty()) raise(ErrorCode::InvalidConfig, "tuning grid is empty");
  auto [train, val] = split_validation(train_full, val_fraction, seed);

  std::vector<double> batch_sizes;
  for (const TuneCandidate& c : grid) batch_sizes.push_back(c.batch_size);
  std::sort(batch_sizes.begin(), batch_sizes.end());
  const double median_batch = batch_sizes.size() % 2 == 1
                                  ? batch_sizes[batch_sizes.size() / 2]
                                  : 0.5 * (batch_sizes[batch_sizes.size() / 2 - 1] +
                                           batch_sizes[batch_sizes.size() / 2]);

  TuneResult result;
  bool have_best = false;
  double best_val = 0.0, best_gap = 0.0, best_batch_dist = 0.0;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    TrainerSpec spec;
    spec.architecture_id = architecture_id;
    spec.learning_rate = grid[i].learning_rate;
    spec.max_epochs = grid[i].max_epochs;
    spec.batch_size = grid[i].batch_size;
    spec.early_stopping = early_stopping;
    spec.seed = derive_seed(seed, 0x74756e65ULL, i);
    try {
      // No augmentation while tuning: the base model stays regularizer-free,
      // and the validation split doubles as the measurement set.
      const RunRecord record = train_and_eval(spec, train, val, val, AugmentationPolicy{});
      const double gap = record.train_accuracy - record.val_accuracy;
      const double batch_dist = std::abs(static_cast<double>(spec.batch_size) - median_batch);
      const bool better =
          !have_best || record.val_accuracy > best_val ||
          (record.val_accuracy == best_val &&
           (gap < best_gap || (gap == best_gap && batch_dist < best_batch_dist)));
      if (better) {
        have_best = true;
        best_val = record.val_accuracy;
        best_gap = gap;
        best_batch_dist = batch_dist;
        result.spec = spec;
        result.val_accuracy = record.val_accuracy;
        result.train_accuracy = record.train_accuracy;
      }
    } catch (const Error& e) {
      std::ostringstream os;
      os << "candidate " << i << " (lr=" << grid[i].learning_rate
         << ", epochs=" << grid[i].max_epochs << ", batch=" << grid[i].batch_size
         << ") failed: " << e.what();
      result.failures.push_back(os.str());
    }
  }
  if (!have_best) {
    std::string detail;
    for (const std::string& f : result.failures) detail += "\n  " + f;
    raise(ErrorCode::AllRunsFailed, "every tuning candidate failed" + detail);
  }
  return result;
}

void write_job_document(const JobDescription& job, const std::filesystem::path& path) {
  serde::write_json_file_atomic(serde::job_description_to_json(job), path);
}

JobDescription read_job_document(const std::filesystem::path& path) {
  return serde::job_description_from_json(serde::read_json_file(path));
}

RunRecord execute_job_document(const std::filesystem::path& job_file,
                               const std::filesystem::path& cache_root) {
  const JobDescription job = read_job_document(job_file);
  auto [train_all, test] = job.dataset.resolve(cache_root);
  auto [train, val] = split_validation(train_all, job.val_fraction, job.val_split_seed);
  RunRecord record = train_and_eval(job.spec, train, val, test, job.policy);
  serde::write_json_file_atomic(serde::run_record_to_json(record), job.output_path);
  return record;
}

RunRecord run_subprocess_job(const std::string& command, const JobDescription& job,
                             const std::filesystem::path& scratch_dir) {
  std::filesystem::create_directories(scratch_dir);
  const std::filesystem::path job_file =
      scratch_dir / ("job_" + std::to_string(job.spec.seed) + ".json");
  write_job_document(job, job_file);

  const std::string cmdline = command + " \"" + job_file.string() + "\"";
  const int rc = std::system(cmdline.c_str());
  if (rc != 0) {
    raise(ErrorCode::PluginFailure,
          "subprocess plugin exited with status " + std::to_string(rc) + ": " + cmdline);
  }
  if (!std::filesystem::exists(job.output_path)) {
    raise(ErrorCode::PluginFailure, "subprocess plugin wrote no record at " +
                                        job.output_path.string());
  }
  return serde::run_record_from_json(serde::read_json_file(job.output_path));
}

}  // namespace augscout
