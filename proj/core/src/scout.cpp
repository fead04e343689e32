#include "augscout/scout.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "augscout/errors.hpp"
#include "augscout/rng.hpp"
#include "serde.hpp"

namespace augscout {

namespace {

constexpr std::uint64_t kJobSeedSalt = 0x6a6f6273ULL;

void validate_config(const PlanConfig& config) {
  if (config.architecture_id.empty()) raise(ErrorCode::InvalidConfig, "architecture_id is empty");
  if (config.runs_per_alpha < 1) raise(ErrorCode::InvalidConfig, "runs_per_alpha must be >= 1");
  if (config.grid.alphas.empty()) raise(ErrorCode::InvalidConfig, "alpha grid is empty");
  if (config.grid.image_size < 1) raise(ErrorCode::InvalidConfig, "grid image_size must be >= 1");
  if (!(config.val_fraction > 0.0 && config.val_fraction < 1.0)) {
    raise(ErrorCode::InvalidConfig, "val_fraction must be in (0, 1)");
  }
  if (config.dataset.kind == DatasetRef::Kind::named) {
    if (config.dataset.name != "fashion_mnist" && config.dataset.name != "cifar10" &&
        config.dataset.name != "cifar100") {
      raise(ErrorCode::InvalidConfig, "unknown dataset: " + config.dataset.name);
    }
  } else {
    config.dataset.synthetic.validate();
  }
  TrainerSpec probe = config.trainer;
  probe.architecture_id = config.architecture_id;
  try {
    probe.validate();
  } catch (const Error& e) {
    raise(ErrorCode::InvalidConfig, std::string("trainer spec invalid: ") + e.what());
  }
}

std::vector<std::vector<std::uint64_t>> derive_job_seeds(const PlanConfig& config,
                                                         std::uint64_t extra_salt) {
  std::vector<std::vector<std::uint64_t>> seeds;
  std::set<std::uint64_t> seen;
  seeds.resize(config.grid.alphas.size());
  for (std::size_t a = 0; a < config.grid.alphas.size(); ++a) {
    seeds[a].resize(config.runs_per_alpha);
    for (int r = 0; r < config.runs_per_alpha; ++r) {
      std::uint64_t seed = derive_seed(config.master_seed, kJobSeedSalt + extra_salt,
                                       static_cast<std::uint64_t>(config.generation), a,
                                       static_cast<std::uint64_t>(r));
      while (!seen.insert(seed).second) ++seed;  // collisions are astronomically rare
      seeds[a][r] = seed;
    }
  }
  return seeds;
}

}  // namespace

AugmentationPolicy PolicyTemplate::instantiate(Percent alpha) const {
  AugmentationPolicy policy;
  policy.crop = CropSpec(alpha);
  if (flip) policy.flip = FlipSpec(flip_probability);
  return policy;
}

ExperimentPlan plan(const PlanConfig& config) {
  validate_config(config);
  ExperimentPlan result;
  result.config = config;
  result.config.grid = dedupe_grid(config.grid);
  result.config.trainer.architecture_id = config.architecture_id;
  result.config.trainer.seed = 0;  // per-job seeds below
  result.seeds = derive_job_seeds(result.config, 0);
  nlohmann::json identity;
  identity["config"] = serde::plan_to_json(ExperimentPlan{result.config, {}, ""})["config"];
  identity["seeds"] = result.seeds;
  result.id = serde::content_hash(identity);
  return result;
}

BudgetReport budget(const ExperimentPlan& p, long baseline_alphas, long baseline_runs) {
  BudgetReport report;
  report.jobs = p.total_jobs();
  report.baseline_jobs = baseline_alphas * baseline_runs;
  if (report.baseline_jobs <= 0 || report.jobs <= 0) {
    raise(ErrorCode::DivisionByZero, "budget needs nonzero plan and baseline job counts");
  }
  report.reduction_factor =
      static_cast<double>(report.baseline_jobs) / static_cast<double>(report.jobs);
  return report;
}

// ---------------------------------------------------------------------------
// ExperimentStore
// ---------------------------------------------------------------------------

ExperimentStore::ExperimentStore(std::filesystem::path root, ExperimentPlan plan)
    : root_(std::move(root)), plan_(std::move(plan)) {}

ExperimentStore ExperimentStore::create(const std::filesystem::path& root,
                                        const ExperimentPlan& plan) {
  std::filesystem::create_directories(root / "runs");
  const std::filesystem::path manifest = root / "plan.json";
  if (std::filesystem::exists(manifest)) {
    ExperimentPlan existing = serde::plan_from_json(serde::read_json_file(manifest));
    if (existing.id != plan.id) {
      raise(ErrorCode::InvalidConfig, "store at " + root.string() +
                                          " already holds a different plan (" + existing.id + ")");
    }
    return ExperimentStore(root, std::move(existing));
  }
  ExperimentStore store(root, plan);
  store.write_manifest(store.scan());
  return store;
}

ExperimentStore ExperimentStore::open(const std::filesystem::path& root) {
  const std::filesystem::path manifest = root / "plan.json";
  if (!std::filesystem::exists(manifest)) {
    raise(ErrorCode::IoError, "no plan.json under " + root.string());
  }
  ExperimentPlan plan = serde::plan_from_json(serde::read_json_file(manifest));
  std::filesystem::create_directories(root / "runs");
  return ExperimentStore(root, std::move(plan));
}

std::filesystem::path ExperimentStore::record_path(int alpha_index, int run_index) const {
  const Percent alpha = plan_.config.grid.alphas.at(alpha_index);
  return root_ / "runs" / (alpha.str() + "_" + std::to_string(run_index) + ".json");
}

bool ExperimentStore::record_exists(int alpha_index, int run_index) const {
  return std::filesystem::exists(record_path(alpha_index, run_index));
}

std::optional<RunRecord> ExperimentStore::read_record(int alpha_index, int run_index) const {
  const std::filesystem::path path = record_path(alpha_index, run_index);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    RunRecord record = serde::run_record_from_json(serde::read_json_file(path));
    if (record.alpha != plan_.config.grid.alphas.at(alpha_index)) return std::nullopt;
    return record;
  } catch (const std::exception&) {
    return std::nullopt;  // invalid document counts as not-done
  }
}

void ExperimentStore::write_record(int alpha_index, int run_index, const RunRecord& record) {
  serde::write_json_file_atomic(serde::run_record_to_json(record),
                                record_path(alpha_index, run_index));
}

std::vector<JobStatus> ExperimentStore::scan() const {
  std::vector<JobStatus> statuses;
  // Failure diagnostics live only in the manifest cache; completion is
  // re-derived from the record documents every time.
  std::map<std::pair<int, int>, std::string> failures;
  const std::filesystem::path manifest = root_ / "plan.json";
  if (std::filesystem::exists(manifest)) {
    const nlohmann::json doc = serde::read_json_file(manifest);
    if (doc.contains("jobs")) {
      for (const auto& j : doc["jobs"]) {
        if (j.value("state", "") == "failed") {
          failures[{j.at("alpha_index").get<int>(), j.at("run_index").get<int>()}] =
              j.value("diagnostic", "");
        }
      }
    }
  }
  for (std::size_t a = 0; a < plan_.config.grid.alphas.size(); ++a) {
    for (int r = 0; r < plan_.config.runs_per_alpha; ++r) {
      JobStatus status;
      status.alpha_index = static_cast<int>(a);
      status.run_index = r;
      if (read_record(static_cast<int>(a), r)) {
        status.state = JobState::done;
      } else if (auto it = failures.find({static_cast<int>(a), r}); it != failures.end()) {
        status.state = JobState::failed;
        status.diagnostic = it->second;
      }
      statuses.push_back(std::move(status));
    }
  }
  return statuses;
}

void ExperimentStore::write_manifest(const std::vector<JobStatus>& statuses) {
  nlohmann::json doc = serde::plan_to_json(plan_);
  nlohmann::json jobs = nlohmann::json::array();
  for (const JobStatus& s : statuses) {
    const char* state = s.state == JobState::done     ? "done"
                        : s.state == JobState::failed ? "failed"
                                                      : "pending";
    nlohmann::json j{{"alpha_index", s.alpha_index}, {"run_index", s.run_index}, {"state", state}};
    if (!s.diagnostic.empty()) j["diagnostic"] = s.diagnostic;
    jobs.push_back(std::move(j));
  }
  doc["jobs"] = std::move(jobs);
  serde::write_json_file_atomic(doc, root_ / "plan.json");
}

// ---------------------------------------------------------------------------
// execute
// ---------------------------------------------------------------------------

namespace {

struct JobOutcome {
  bool trained = false;
  bool failed = false;
  std::string diagnostic;
};

JobOutcome run_one_job(ExperimentStore& store, int alpha_index, int run_index,
                       const LabeledDataset* train_all, const LabeledDataset* test,
                       const ExecuteOptions& options) {
  const ExperimentPlan& p = store.plan();
  const Percent alpha = p.config.grid.alphas.at(alpha_index);
  const std::uint64_t seed = p.seeds.at(alpha_index).at(run_index);
  const bool subprocess = p.config.architecture_id.starts_with("exec:");

  auto attempt = [&]() {
    if (subprocess) {
      JobDescription job;
      job.dataset = p.config.dataset;
      job.val_fraction = p.config.val_fraction;
      job.val_split_seed = seed;
      job.spec = p.config.trainer;
      job.spec.architecture_id = p.config.architecture_id;
      job.spec.seed = seed;
      job.policy = p.config.policy.instantiate(alpha);
      job.output_path = store.record_path(alpha_index, run_index);
      const std::string command = p.config.architecture_id.substr(5);
      run_subprocess_job(command, job, store.root() / "jobs");
    } else {
      TrainerSpec spec = p.config.trainer;
      spec.architecture_id = p.config.architecture_id;
      spec.seed = seed;
      auto [train, val] = split_validation(*train_all, p.config.val_fraction, seed);
      RunRecord record =
          train_and_eval(spec, train, val, *test, p.config.policy.instantiate(alpha));
      store.write_record(alpha_index, run_index, record);
    }
  };

  JobOutcome outcome;
  for (int try_ix = 0; try_ix < 2; ++try_ix) {  // one retry
    try {
      attempt();
      outcome.trained = true;
      outcome.failed = false;
      return outcome;
    } catch (const std::exception& e) {
      outcome.failed = true;
      outcome.diagnostic = "alpha " + alpha.str() + " run " + std::to_string(run_index) +
                           " attempt " + std::to_string(try_ix + 1) + ": " + e.what();
    }
  }
  (void)options;
  return outcome;
}

}  // namespace

ExecuteReport execute(ExperimentStore& store, const ExecuteOptions& options) {
  const ExperimentPlan& p = store.plan();
  const bool subprocess = p.config.architecture_id.starts_with("exec:");

  LabeledDataset train_all, test;
  if (!subprocess) {
    auto resolved = options.cache_root.empty() ? p.config.dataset.resolve()
                                               : p.config.dataset.resolve(options.cache_root);
    train_all = std::move(resolved.first);
    test = std::move(resolved.second);
  }

  std::vector<JobStatus> statuses = store.scan();
  std::vector<std::size_t> pending;
  ExecuteReport report;
  for (std::size_t i = 0; i < statuses.size(); ++i) {
    if (statuses[i].state == JobState::done) {
      ++report.skipped;
    } else {
      pending.push_back(i);
    }
  }

  std::mutex state_mutex;
  std::size_t next = 0;
  auto worker = [&]() {
    while (true) {
      std::size_t job_ix;
      {
        std::lock_guard lock(state_mutex);
        if (next >= pending.size() || report.cancelled) return;
        if (options.cancelled && options.cancelled()) {
          report.cancelled = true;
          return;
        }
        job_ix = pending[next++];
      }
      JobStatus& status = statuses[job_ix];
      const JobOutcome outcome = run_one_job(store, status.alpha_index, status.run_index,
                                             &train_all, &test, options);
      std::lock_guard lock(state_mutex);
      if (outcome.trained) {
        status.state = JobState::done;
        status.diagnostic.clear();
        ++report.trained;
        if (options.on_trained) options.on_trained(status.alpha_index, status.run_index);
      } else {
        status.state = JobState::failed;
        status.diagnostic = outcome.diagnostic;
        ++report.failed;
        report.diagnostics.push_back(outcome.diagnostic);
      }
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  store.write_manifest(statuses);
  if (report.failed > 0) {
    raise(ErrorCode::PartialCompletion,
          std::to_string(report.failed) + " of " + std::to_string(p.total_jobs()) +
              " jobs failed twice; store remains consistent and resumable");
  }
  return report;
}

// ---------------------------------------------------------------------------
// aggregate
// ---------------------------------------------------------------------------

const AccuracyCurve* CurveSet::find(const std::string& class_name) const {
  for (const AccuracyCurve& curve : curves) {
    if (curve.class_name == class_name) return &curve;
  }
  return nullptr;
}

const AccuracyCurve& CurveSet::mean_curve() const {
  const AccuracyCurve* mean = find("mean");
  if (mean == nullptr) raise(ErrorCode::NoData, "curve set has no mean curve");
  return *mean;
}

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_and_sample_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

}  // namespace

CurveSet aggregate(const ExperimentStore& store) {
  const ExperimentPlan& p = store.plan();
  const std::size_t n_alphas = p.config.grid.alphas.size();

  std::vector<std::vector<RunRecord>> by_alpha(n_alphas);
  std::vector<std::string> class_names;
  for (std::size_t a = 0; a < n_alphas; ++a) {
    for (int r = 0; r < p.config.runs_per_alpha; ++r) {
      if (auto record = store.read_record(static_cast<int>(a), r)) {
        if (class_names.empty()) {
          class_names = record->class_names;
        } else if (class_names != record->class_names) {
          raise(ErrorCode::InvalidConfig, "run records disagree on class names");
        }
        by_alpha[a].push_back(std::move(*record));
      }
    }
  }

  CurveSet out;
  out.dataset_id = p.config.dataset.id();
  out.architecture_id = p.config.architecture_id;
  out.policy = p.config.policy.describe();
  std::size_t total_records = 0;
  for (const auto& records : by_alpha) total_records += records.size();
  if (total_records == 0) raise(ErrorCode::NoData, "no completed runs in store");
  out.class_names = class_names;

  out.curves.resize(class_names.size() + 1);
  for (std::size_t c = 0; c < class_names.size(); ++c) out.curves[c].class_name = class_names[c];
  out.curves.back().class_name = "mean";

  for (std::size_t a = 0; a < n_alphas; ++a) {
    const auto& records = by_alpha[a];
    const Percent alpha = p.config.grid.alphas[a];
    if (records.empty()) {
      out.warnings.push_back("alpha " + alpha.str() + ": no completed runs; point dropped");
      continue;
    }
    if (static_cast<int>(records.size()) < p.config.runs_per_alpha) {
      out.warnings.push_back("alpha " + alpha.str() + ": only " +
                             std::to_string(records.size()) + "/" +
                             std::to_string(p.config.runs_per_alpha) + " runs completed");
    }
    for (std::size_t c = 0; c < class_names.size(); ++c) {
      std::vector<double> accs;
      accs.reserve(records.size());
      for (const RunRecord& record : records) accs.push_back(record.per_class_accuracy[c]);
      const MeanStd ms = mean_and_sample_std(accs);
      out.curves[c].points.push_back(
          {alpha, ms.mean, ms.std, static_cast<int>(records.size())});
    }
    std::vector<double> means;
    means.reserve(records.size());
    for (const RunRecord& record : records) means.push_back(record.mean_accuracy);
    const MeanStd ms = mean_and_sample_std(means);
    out.curves.back().points.push_back({alpha, ms.mean, ms.std, static_cast<int>(records.size())});
  }
  return out;
}

ExperimentPlan refine(const ExperimentPlan& parent, Percent alpha_min, Percent alpha_max,
                      Percent step, int runs_per_alpha) {
  if (alpha_min.milli() < 0 || alpha_max.milli() >= 100 * Percent::kScale ||
      alpha_min > alpha_max || step.milli() <= 0) {
    raise(ErrorCode::InvalidConfig, "refine range must satisfy 0 <= min <= max < 100, step > 0");
  }
  const AlphaGrid candidates =
      make_grid(parent.config.grid.image_size, alpha_min, alpha_max, step);

  // Alphas the parent already measured carry no new information; drop them
  // before dedupe so the finer alphas in each dimension bucket survive.
  std::set<Percent> parent_alphas(parent.config.grid.alphas.begin(),
                                  parent.config.grid.alphas.end());
  AlphaGrid fresh;
  fresh.image_size = candidates.image_size;
  for (Percent alpha : candidates.alphas) {
    if (!parent_alphas.count(alpha)) fresh.alphas.push_back(alpha);
  }
  const AlphaGrid refined = dedupe_grid(fresh);
  if (refined.alphas.empty()) {
    raise(ErrorCode::EmptyRange, "refinement range [" + alpha_min.str() + ", " +
                                     alpha_max.str() + "] step " + step.str() +
                                     " adds no new effective dimensions");
  }

  PlanConfig config = parent.config;
  config.grid = refined;
  config.runs_per_alpha = runs_per_alpha;
  config.generation = parent.config.generation + 1;

  ExperimentPlan child = plan(config);
  // Seed disjointness from the parent is part of the contract.
  std::set<std::uint64_t> parent_seeds;
  for (const auto& row : parent.seeds) parent_seeds.insert(row.begin(), row.end());
  for (auto& row : child.seeds) {
    for (auto& seed : row) {
      while (parent_seeds.count(seed)) ++seed;
    }
  }
  return child;
}

}  // namespace augscout
