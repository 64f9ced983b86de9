#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "madd/model.hpp"
#include "madd/objective.hpp"
#include "madd/record.hpp"

namespace madd {

struct PipelineConfig {
  std::string sensitive = "gender";
  ObjectiveConfig objective;
  SplitRatios ratios;
  TrainConfig train;
  std::uint64_t seed = 42;
};

struct EvaluationMetrics {
  double accuracy_loss = 0.0;
  double fairness_loss = 0.0;
  double total_loss = 0.0;
  std::size_t rows_g0 = 0;
  std::size_t rows_g1 = 0;
};

// Losses of labelled records whose probabilities are `probas`.
EvaluationMetrics evaluate(std::span<const ScoredRecord> records, std::span<const double> probas,
                           const ObjectiveConfig& config);

// Scores `data` with the model and tags rows by the sensitive column.
std::vector<ScoredRecord> score_dataset(const LogisticModel& model, const FeatureEncoder& encoder,
                                        const TabularDataset& data, const std::string& sensitive);

struct PipelineResult {
  FeatureEncoder encoder;
  TrainingReport training;
  std::size_t train_rows = 0;
  std::size_t validation_rows = 0;
  std::size_t test_rows = 0;
  std::size_t dropped_rows = 0;
  std::vector<ScoredRecord> validation_records;
  std::vector<ScoredRecord> test_records;
  SweepResult validation_sweep;
  double lambda_star = 0.0;
  std::vector<double> test_post_processed;
  EvaluationMetrics test_before;
  EvaluationMetrics test_after;
};

// Train on the training split, sweep lambda on the validation split, then
// post-process the test split with the selected lambda. The sensitive column
// must be binary (EncodingError otherwise).
PipelineResult run_pipeline(const TabularDataset& data, const PipelineConfig& config = {});

nlohmann::json metrics_to_json(const PipelineResult& result);

}  // namespace madd
