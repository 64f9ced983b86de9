#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "madd/model.hpp"
#include "madd/objective.hpp"
#include "madd/record.hpp"

namespace madd {

// "%.17g": enough digits to round-trip any double.
std::string format_real(double v);

// Records CSV: header `proba,group,label`; proba with 17 significant digits,
// group 0|1, label 0|1 or empty when absent.
std::string records_to_csv(std::span<const ScoredRecord> records);

// Accepts a missing `label` column (all labels absent). Throws ParseError for
// malformed fields, InvalidProbability for probabilities outside [0,1].
std::vector<ScoredRecord> records_from_csv(const CsvTable& table);
std::vector<ScoredRecord> read_records(const std::filesystem::path& path);
void write_records(const std::filesystem::path& path, std::span<const ScoredRecord> records);

// Header `lambda,accuracy_loss,fairness_loss,total_loss`, one row per grid point.
std::string sweep_to_csv(const SweepResult& result);

nlohmann::json config_to_json(const ObjectiveConfig& config);
nlohmann::json sweep_to_json(const SweepResult& result, const ObjectiveConfig& config);

nlohmann::json model_to_json(const LogisticModel& model, const FeatureEncoder& encoder);

struct StoredModel {
  LogisticModel model;
  FeatureEncoder encoder;
};
StoredModel model_from_json(const nlohmann::json& j);

// Written next to every CLI output so a run can be repeated.
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::size_t rows_g0 = 0;
  std::size_t rows_g1 = 0;
  std::chrono::system_clock::time_point started;
  std::chrono::system_clock::time_point finished;
  std::string version = MADD_VERSION;
  nlohmann::json extra = nlohmann::json::object();
};

std::string iso8601_utc(std::chrono::system_clock::time_point t);
nlohmann::json manifest_to_json(const RunManifest& manifest);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace madd
