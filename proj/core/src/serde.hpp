#pragma once

// Internal JSON (de)serialization for the augscout/1 persistence schema.
// Not installed; public APIs speak files and strings.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "augscout/analysis.hpp"
#include "augscout/scout.hpp"
#include "augscout/trainer.hpp"

namespace augscout::serde {

inline constexpr const char* kSchema = "augscout/1";

nlohmann::json make_document(const std::string& kind);
void expect_document(const nlohmann::json& doc, const std::string& kind);

nlohmann::json percent_to_json(Percent p);
Percent percent_from_json(const nlohmann::json& j);

nlohmann::json policy_to_json(const AugmentationPolicy& policy);
AugmentationPolicy policy_from_json(const nlohmann::json& j);

nlohmann::json trainer_spec_to_json(const TrainerSpec& spec);
TrainerSpec trainer_spec_from_json(const nlohmann::json& j);

nlohmann::json synthetic_spec_to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);

nlohmann::json dataset_ref_to_json(const DatasetRef& ref);
DatasetRef dataset_ref_from_json(const nlohmann::json& j);

nlohmann::json run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const nlohmann::json& j);

nlohmann::json curve_set_to_json(const CurveSet& curves);
CurveSet curve_set_from_json(const nlohmann::json& j);

nlohmann::json fixture_table_to_json(const FixtureTable& table);
FixtureTable fixture_table_from_json(const nlohmann::json& j);

nlohmann::json job_description_to_json(const JobDescription& job);
JobDescription job_description_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Writes via a sibling temp file finalized by rename.
void write_json_file_atomic(const nlohmann::json& doc, const std::filesystem::path& path);

/// Canonical content hash used for plan ids (FNV-1a over compact JSON).
std::string content_hash(const nlohmann::json& j);

}  // namespace augscout::serde
