#include "madd/pipeline.hpp"

#include "madd/error.hpp"
#include "madd/transport.hpp"

namespace madd {

EvaluationMetrics evaluate(std::span<const ScoredRecord> records, std::span<const double> probas,
                           const ObjectiveConfig& config) {
  if (records.size() != probas.size()) {
    throw Error(ErrorCode::LengthMismatch, "probabilities do not match records");
  }
  std::vector<ScoredRecord> scored(records.begin(), records.end());
  for (std::size_t i = 0; i < scored.size(); ++i) scored[i].proba = probas[i];
  const auto labels = labels_of(scored);

  EvaluationMetrics m;
  m.accuracy_loss = config.sample_loss ? accuracy_loss(probas, labels, config.sample_loss)
                                       : accuracy_loss(apply_threshold(probas, config.threshold), labels);
  m.fairness_loss = fairness_loss(scored, config.bins);
  m.total_loss = total_loss(m.accuracy_loss, m.fairness_loss, config.theta);
  m.rows_g0 = count_of(scored, Group::G0);
  m.rows_g1 = count_of(scored, Group::G1);
  return m;
}

std::vector<ScoredRecord> score_dataset(const LogisticModel& model, const FeatureEncoder& encoder,
                                        const TabularDataset& data, const std::string& sensitive) {
  const auto groups = sensitive_codes(data, sensitive);
  const auto probas = predict_proba(model, encoder.transform(data));
  std::vector<ScoredRecord> records(data.rows());
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i] = {probas[i], groups[i] == 0 ? Group::G0 : Group::G1, data.labels[i]};
  }
  return records;
}

PipelineResult run_pipeline(const TabularDataset& data, const PipelineConfig& config) {
  config.objective.validate();
  // Fail on a bad sensitive column before any training happens.
  (void)sensitive_codes(data, config.sensitive);

  const auto parts = split(data, config.ratios, config.seed);

  PipelineResult result{FeatureEncoder::fit(parts.train), {}, parts.train.rows(), parts.validation.rows(),
                        parts.test.rows(), data.dropped_rows, {}, {}, {}, 0.0, {}, {}, {}};
  result.training = train_logistic(result.encoder.transform(parts.train), parts.train.labels, config.train);
  const auto& model = result.training.model;

  result.validation_records = score_dataset(model, result.encoder, parts.validation, config.sensitive);
  result.test_records = score_dataset(model, result.encoder, parts.test, config.sensitive);

  result.validation_sweep = sweep(result.validation_records, config.objective);
  result.lambda_star = result.validation_sweep.lambda_star;

  std::vector<double> raw(result.test_records.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = result.test_records[i].proba;
  result.test_before = evaluate(result.test_records, raw, config.objective);
  result.test_post_processed = fip(result.test_records, result.lambda_star, config.objective.transport());
  result.test_after = evaluate(result.test_records, result.test_post_processed, config.objective);
  return result;
}

namespace {

nlohmann::json to_json(const EvaluationMetrics& m) {
  return {{"accuracy_loss", m.accuracy_loss},
          {"fairness_loss", m.fairness_loss},
          {"madd", 2.0 * m.fairness_loss},
          {"total_loss", m.total_loss},
          {"rows", {{"g0", m.rows_g0}, {"g1", m.rows_g1}}}};
}

}  // namespace

nlohmann::json metrics_to_json(const PipelineResult& r) {
  const auto& before = r.test_before;
  const auto& after = r.test_after;
  const double relative =
      before.fairness_loss > 0.0 ? (before.fairness_loss - after.fairness_loss) / before.fairness_loss : 0.0;
  return {
      {"lambda_star", r.lambda_star},
      {"validation_min_total_loss", r.validation_sweep.min_total_loss},
      {"split", {{"train", r.train_rows}, {"validation", r.validation_rows}, {"test", r.test_rows}}},
      {"dropped_rows", r.dropped_rows},
      {"test_before", to_json(before)},
      {"test_after", to_json(after)},
      {"fairness_loss_relative_reduction", relative},
      {"accuracy_loss_change", after.accuracy_loss - before.accuracy_loss},
  };
}

}  // namespace madd
