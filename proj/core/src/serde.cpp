#include "serde.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "augscout/errors.hpp"

namespace augscout::serde {

using nlohmann::json;

json make_document(const std::string& kind) {
  json doc;
  doc["schema"] = kSchema;
  doc["kind"] = kind;
  return doc;
}

void expect_document(const json& doc, const std::string& kind) {
  if (!doc.is_object() || doc.value("schema", "") != kSchema) {
    raise(ErrorCode::InvalidConfig, "not an " + std::string(kSchema) + " document");
  }
  if (doc.value("kind", "") != kind) {
    raise(ErrorCode::InvalidConfig,
          "expected document kind '" + kind + "', got '" + doc.value("kind", "") + "'");
  }
}

json percent_to_json(Percent p) {
  // Alphas are decimal by construction; the double is exact enough that the
  // shortest JSON rendering reproduces the same milli-percent on read.
  return p.value();
}

Percent percent_from_json(const json& j) {
  if (j.is_string()) return Percent::parse(j.get<std::string>());
  if (!j.is_number()) raise(ErrorCode::InvalidConfig, "alpha must be a number");
  const double v = j.get<double>();
  const auto milli = static_cast<std::int64_t>(std::llround(v * Percent::kScale));
  if (std::abs(v * Percent::kScale - static_cast<double>(milli)) > 1e-6) {
    raise(ErrorCode::InvalidConfig, "alpha finer than milli-percent resolution");
  }
  return Percent::from_milli(milli);
}

json policy_to_json(const AugmentationPolicy& policy) {
  json j = json::object();
  if (policy.crop) j["crop"] = {{"alpha", percent_to_json(policy.crop->alpha)}};
  if (policy.flip) j["flip"] = {{"probability", policy.flip->probability}};
  return j;
}

AugmentationPolicy policy_from_json(const json& j) {
  AugmentationPolicy policy;
  if (j.contains("crop")) policy.crop = CropSpec(percent_from_json(j["crop"]["alpha"]));
  if (j.contains("flip")) policy.flip = FlipSpec(j["flip"]["probability"].get<double>());
  return policy;
}

json trainer_spec_to_json(const TrainerSpec& spec) {
  return json{{"architecture_id", spec.architecture_id},
              {"learning_rate", spec.learning_rate},
              {"batch_size", spec.batch_size},
              {"max_epochs", spec.max_epochs},
              {"patience", spec.early_stopping.patience},
              {"restore_best", spec.early_stopping.restore_best},
              {"seed", spec.seed}};
}

TrainerSpec trainer_spec_from_json(const json& j) {
  TrainerSpec spec;
  spec.architecture_id = j.at("architecture_id").get<std::string>();
  spec.learning_rate = j.at("learning_rate").get<double>();
  spec.batch_size = j.at("batch_size").get<int>();
  spec.max_epochs = j.at("max_epochs").get<int>();
  spec.early_stopping.patience = j.at("patience").get<int>();
  spec.early_stopping.restore_best = j.at("restore_best").get<bool>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

namespace {

const char* generator_kind_name(ClassGenerator::Kind kind) {
  switch (kind) {
    case ClassGenerator::Kind::periodic: return "periodic";
    case ClassGenerator::Kind::corner_mark: return "corner_mark";
    case ClassGenerator::Kind::center_mark: return "center_mark";
    case ClassGenerator::Kind::uniform_color: return "uniform_color";
  }
  return "unknown";
}

ClassGenerator::Kind generator_kind_from_name(const std::string& name) {
  if (name == "periodic") return ClassGenerator::Kind::periodic;
  if (name == "corner_mark") return ClassGenerator::Kind::corner_mark;
  if (name == "center_mark") return ClassGenerator::Kind::center_mark;
  if (name == "uniform_color") return ClassGenerator::Kind::uniform_color;
  raise(ErrorCode::InvalidConfig, "unknown class generator: " + name);
}

}  // namespace

json synthetic_spec_to_json(const SyntheticSpec& spec) {
  json classes = json::array();
  for (const ClassGenerator& gen : spec.classes) {
    classes.push_back(json{{"kind", generator_kind_name(gen.kind)},
                           {"period", gen.period},
                           {"patch", gen.patch},
                           {"level", gen.level},
                           {"name", gen.name}});
  }
  return json{{"image_size", spec.image_size},
              {"channels", spec.channels},
              {"classes", std::move(classes)},
              {"samples_per_class", spec.samples_per_class},
              {"test_samples_per_class", spec.test_samples_per_class},
              {"noise_std", spec.noise_std},
              {"background", spec.background}};
}

SyntheticSpec synthetic_spec_from_json(const json& j) {
  SyntheticSpec spec;
  spec.image_size = j.at("image_size").get<int>();
  spec.channels = j.at("channels").get<int>();
  for (const json& c : j.at("classes")) {
    ClassGenerator gen;
    gen.kind = generator_kind_from_name(c.at("kind").get<std::string>());
    gen.period = c.at("period").get<int>();
    gen.patch = c.at("patch").get<int>();
    gen.level = c.at("level").get<double>();
    gen.name = c.at("name").get<std::string>();
    spec.classes.push_back(std::move(gen));
  }
  spec.samples_per_class = j.at("samples_per_class").get<int>();
  spec.test_samples_per_class = j.at("test_samples_per_class").get<int>();
  spec.noise_std = j.at("noise_std").get<double>();
  spec.background = j.at("background").get<double>();
  return spec;
}

json dataset_ref_to_json(const DatasetRef& ref) {
  if (ref.kind == DatasetRef::Kind::named) {
    return json{{"kind", "named"},
                {"name", ref.name},
                {"train_fraction", ref.train_fraction},
                {"subsample_seed", ref.subsample_seed}};
  }
  return json{{"kind", "synthetic"},
              {"spec", synthetic_spec_to_json(ref.synthetic)},
              {"seed", ref.synthetic_seed}};
}

DatasetRef dataset_ref_from_json(const json& j) {
  DatasetRef ref;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "named") {
    ref.kind = DatasetRef::Kind::named;
    ref.name = j.at("name").get<std::string>();
    ref.train_fraction = j.at("train_fraction").get<double>();
    ref.subsample_seed = j.at("subsample_seed").get<std::uint64_t>();
  } else if (kind == "synthetic") {
    ref.kind = DatasetRef::Kind::synthetic;
    ref.synthetic = synthetic_spec_from_json(j.at("spec"));
    ref.synthetic_seed = j.at("seed").get<std::uint64_t>();
  } else {
    raise(ErrorCode::InvalidConfig, "unknown dataset ref kind: " + kind);
  }
  return ref;
}

json run_record_to_json(const RunRecord& record) {
  json doc = make_document("run_record");
  doc["dataset_id"] = record.dataset_id;
  doc["architecture_id"] = record.architecture_id;
  doc["policy"] = policy_to_json(record.policy);
  doc["alpha"] = percent_to_json(record.alpha);
  doc["seed"] = record.seed;
  doc["class_names"] = record.class_names;
  doc["per_class_accuracy"] = record.per_class_accuracy;
  doc["test_class_counts"] = record.test_class_counts;
  doc["mean_accuracy"] = record.mean_accuracy;
  doc["train_accuracy"] = record.train_accuracy;
  doc["val_accuracy"] = record.val_accuracy;
  doc["epochs_trained"] = record.epochs_trained;
  doc["best_epoch"] = record.best_epoch;
  doc["wall_seconds"] = record.wall_seconds;
  return doc;
}

RunRecord run_record_from_json(const json& j) {
  expect_document(j, "run_record");
  RunRecord record;
  record.dataset_id = j.at("dataset_id").get<std::string>();
  record.architecture_id = j.at("architecture_id").get<std::string>();
  record.policy = policy_from_json(j.at("policy"));
  record.alpha = percent_from_json(j.at("alpha"));
  record.seed = j.at("seed").get<std::uint64_t>();
  record.class_names = j.at("class_names").get<std::vector<std::string>>();
  record.per_class_accuracy = j.at("per_class_accuracy").get<std::vector<double>>();
  record.test_class_counts = j.at("test_class_counts").get<std::vector<int>>();
  record.mean_accuracy = j.at("mean_accuracy").get<double>();
  record.train_accuracy = j.at("train_accuracy").get<double>();
  record.val_accuracy = j.at("val_accuracy").get<double>();
  record.epochs_trained = j.at("epochs_trained").get<int>();
  record.best_epoch = j.at("best_epoch").get<int>();
  record.wall_seconds = j.at("wall_seconds").get<double>();
  record.validate();
  return record;
}

namespace {

json grid_to_json(const AlphaGrid& grid) {
  json alphas = json::array();
  for (Percent a : grid.alphas) alphas.push_back(percent_to_json(a));
  return json{{"image_size", grid.image_size}, {"alphas", std::move(alphas)}};
}

AlphaGrid grid_from_json(const json& j) {
  AlphaGrid grid;
  grid.image_size = j.at("image_size").get<int>();
  for (const json& a : j.at("alphas")) grid.alphas.push_back(percent_from_json(a));
  return grid;
}

json plan_config_to_json(const PlanConfig& config) {
  return json{{"dataset", dataset_ref_to_json(config.dataset)},
              {"architecture_id", config.architecture_id},
              {"trainer", trainer_spec_to_json(config.trainer)},
              {"policy", {{"flip", config.policy.flip},
                          {"flip_probability", config.policy.flip_probability}}},
              {"grid", grid_to_json(config.grid)},
              {"runs_per_alpha", config.runs_per_alpha},
              {"master_seed", config.master_seed},
              {"val_fraction", config.val_fraction},
              {"generation", config.generation}};
}

PlanConfig plan_config_from_json(const json& j) {
  PlanConfig config;
  config.dataset = dataset_ref_from_json(j.at("dataset"));
  config.architecture_id = j.at("architecture_id").get<std::string>();
  config.trainer = trainer_spec_from_json(j.at("trainer"));
  config.policy.flip = j.at("policy").at("flip").get<bool>();
  config.policy.flip_probability = j.at("policy").at("flip_probability").get<double>();
  config.grid = grid_from_json(j.at("grid"));
  config.runs_per_alpha = j.at("runs_per_alpha").get<int>();
  config.master_seed = j.at("master_seed").get<std::uint64_t>();
  config.val_fraction = j.at("val_fraction").get<double>();
  config.generation = j.at("generation").get<int>();
  return config;
}

}  // namespace

json plan_to_json(const ExperimentPlan& plan) {
  json doc = make_document("plan");
  doc["id"] = plan.id;
  doc["config"] = plan_config_to_json(plan.config);
  doc["seeds"] = plan.seeds;
  return doc;
}

ExperimentPlan plan_from_json(const json& j) {
  expect_document(j, "plan");
  ExperimentPlan plan;
  plan.id = j.at("id").get<std::string>();
  plan.config = plan_config_from_json(j.at("config"));
  plan.seeds = j.at("seeds").get<std::vector<std::vector<std::uint64_t>>>();
  return plan;
}

json curve_set_to_json(const CurveSet& curves) {
  json doc = make_document("curves");
  doc["dataset_id"] = curves.dataset_id;
  doc["architecture_id"] = curves.architecture_id;
  doc["policy"] = curves.policy;
  doc["class_names"] = curves.class_names;
  doc["warnings"] = curves.warnings;
  json arr = json::array();
  for (const AccuracyCurve& curve : curves.curves) {
    json points = json::array();
    for (const CurvePoint& p : curve.points) {
      points.push_back(json{{"alpha", percent_to_json(p.alpha)},
                            {"mean_acc", p.mean_acc},
                            {"std_acc", p.std_acc},
                            {"n_runs", p.n_runs}});
    }
    arr.push_back(json{{"class", curve.class_name}, {"points", std::move(points)}});
  }
  doc["curves"] = std::move(arr);
  return doc;
}

CurveSet curve_set_from_json(const json& j) {
  expect_document(j, "curves");
  CurveSet curves;
  curves.dataset_id = j.at("dataset_id").get<std::string>();
  curves.architecture_id = j.at("architecture_id").get<std::string>();
  curves.policy = j.at("policy").get<std::string>();
  curves.class_names = j.at("class_names").get<std::vector<std::string>>();
  curves.warnings = j.value("warnings", std::vector<std::string>{});
  for (const json& c : j.at("curves")) {
    AccuracyCurve curve;
    curve.class_name = c.at("class").get<std::string>();
    for (const json& p : c.at("points")) {
      CurvePoint point;
      point.alpha = percent_from_json(p.at("alpha"));
      point.mean_acc = p.at("mean_acc").get<double>();
      point.std_acc = p.at("std_acc").get<double>();
      point.n_runs = p.at("n_runs").get<int>();
      curve.points.push_back(point);
    }
    curves.curves.push_back(std::move(curve));
  }
  return curves;
}

json fixture_table_to_json(const FixtureTable& table) {
  auto row_to_json = [](const FixtureRow& row) {
    json j{{"name", row.name}, {"accuracy", row.accuracy}};
    if (row.alpha) j["alpha"] = percent_to_json(*row.alpha);
    return j;
  };
  json doc = make_document("fixture_table");
  doc["variant"] = table.variant;
  json classes = json::array();
  for (const FixtureRow& row : table.classes) classes.push_back(row_to_json(row));
  doc["classes"] = std::move(classes);
  doc["mean"] = row_to_json(table.mean_row);
  doc["ideal"] = row_to_json(table.ideal_row);
  return doc;
}

FixtureTable fixture_table_from_json(const json& j) {
  expect_document(j, "fixture_table");
  auto row_from_json = [](const json& r) {
    FixtureRow row;
    row.name = r.at("name").get<std::string>();
    row.accuracy = r.at("accuracy").get<double>();
    if (r.contains("alpha")) row.alpha = percent_from_json(r.at("alpha"));
    return row;
  };
  FixtureTable table;
  table.variant = j.at("variant").get<std::string>();
  for (const json& r : j.at("classes")) table.classes.push_back(row_from_json(r));
  table.mean_row = row_from_json(j.at("mean"));
  table.ideal_row = row_from_json(j.at("ideal"));
  return table;
}

json job_description_to_json(const JobDescription& job) {
  json doc = make_document("job");
  doc["dataset"] = dataset_ref_to_json(job.dataset);
  doc["val_fraction"] = job.val_fraction;
  doc["val_split_seed"] = job.val_split_seed;
  doc["trainer"] = trainer_spec_to_json(job.spec);
  doc["policy"] = policy_to_json(job.policy);
  doc["output_path"] = job.output_path.string();
  return doc;
}

JobDescription job_description_from_json(const json& j) {
  expect_document(j, "job");
  JobDescription job;
  job.dataset = dataset_ref_from_json(j.at("dataset"));
  job.val_fraction = j.at("val_fraction").get<double>();
  job.val_split_seed = j.at("val_split_seed").get<std::uint64_t>();
  job.spec = trainer_spec_from_json(j.at("trainer"));
  job.policy = policy_from_json(j.at("policy"));
  job.output_path = j.at("output_path").get<std::string>();
  return job;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    raise(ErrorCode::IoError, path.string() + ": " + e.what());
  }
  return doc;
}

void write_json_file_atomic(const json& doc, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) raise(ErrorCode::IoError, "cannot write " + tmp.string());
    out << doc.dump(2) << "\n";
    if (!out) raise(ErrorCode::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) raise(ErrorCode::IoError, "rename to " + path.string() + ": " + ec.message());
}

std::string content_hash(const json& j) {
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace augscout::serde
