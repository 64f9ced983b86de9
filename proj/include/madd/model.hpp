#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "madd/csv.hpp"

namespace madd {

enum class ColumnKind { Binary, Ordinal, Numerical };

std::string_view to_string(ColumnKind kind);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Numerical;
  // Ordinal levels, lowest first. Unused for other kinds.
  std::vector<std::string> levels;
  // Other header names accepted for this column.
  std::vector<std::string> aliases;
};

struct DatasetSchema {
  std::vector<ColumnSpec> columns;
  std::string label_column = "final_result";
  std::vector<std::string> label_aliases = {"label"};
  std::vector<std::string> positive_labels = {"1", "Pass", "Distinction"};
  std::vector<std::string> negative_labels = {"0", "Fail", "Withdrawn"};

  // gender, age, disability, highest_education, poverty (imd_band),
  // num_of_prev_attempts, studied_credits, sum_click.
  static DatasetSchema oulad();
};

struct DatasetColumn {
  std::string name;
  ColumnKind kind = ColumnKind::Numerical;
  // Binary: the observed values sorted lexicographically (code = position).
  // Ordinal: the schema levels.
  std::vector<std::string> levels;
  std::vector<std::string> values;
};

// Raw feature columns plus binary labels. Rows with a missing value in any
// used column are dropped at ingestion and counted.
struct TabularDataset {
  std::vector<DatasetColumn> columns;
  std::vector<int> labels;
  std::size_t dropped_rows = 0;

  std::size_t rows() const noexcept { return labels.size(); }
  // Throws EncodingError when absent.
  const DatasetColumn& column(std::string_view name) const;
  TabularDataset subset(std::span<const std::size_t> indices) const;
};

// Columns of the schema missing from the header are skipped; at least one
// feature and the label column must be present (EncodingError otherwise).
TabularDataset parse_dataset(const CsvTable& table, const DatasetSchema& schema = DatasetSchema::oulad());
TabularDataset load_dataset(const std::filesystem::path& path, const DatasetSchema& schema = DatasetSchema::oulad());

// Integer code of a binary or ordinal value; throws EncodingError for a
// value outside the column's levels.
int category_code(const DatasetColumn& column, std::string_view value);

// Binary sensitive attribute per row (0 -> G0, 1 -> G1). Throws
// EncodingError unless the column is binary.
std::vector<int> sensitive_codes(const TabularDataset& data, std::string_view column);

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

// Binary columns map to their level code, ordinal columns to their rank,
// numerical columns are standardised with statistics of the fitting data.
class FeatureEncoder {
 public:
  static constexpr double kVarianceFloor = 1e-12;

  static FeatureEncoder fit(const TabularDataset& train);

  Matrix transform(const TabularDataset& data) const;

  std::span<const std::string> names() const noexcept { return names_; }
  std::span<const ColumnKind> kinds() const noexcept { return kinds_; }
  std::span<const std::vector<std::string>> levels() const noexcept { return levels_; }
  std::span<const double> means() const noexcept { return means_; }
  std::span<const double> scales() const noexcept { return scales_; }

  // Rebuilds an encoder from serialised parts.
  static FeatureEncoder from_parts(std::vector<std::string> names, std::vector<ColumnKind> kinds,
                                   std::vector<std::vector<std::string>> levels, std::vector<double> means,
                                   std::vector<double> scales);

 private:
  std::vector<std::string> names_;
  std::vector<ColumnKind> kinds_;
  std::vector<std::vector<std::string>> levels_;
  std::vector<double> means_;   // 0 for non-numerical columns
  std::vector<double> scales_;  // 1 for non-numerical columns
};

struct SplitRatios {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

// Seeded Fisher-Yates shuffle, then contiguous train | validation | test.
// Validation and test take floor(n * ratio) rows, train the remainder.
// Throws InvalidRatios unless the ratios are non-negative and sum to 1
// within 1e-9, EmptyPopulation for n == 0.
SplitIndices split_indices(std::size_t n, const SplitRatios& ratios, std::uint64_t seed);

struct DatasetSplit {
  TabularDataset train;
  TabularDataset validation;
  TabularDataset test;
};

DatasetSplit split(const TabularDataset& data, const SplitRatios& ratios, std::uint64_t seed);

struct TrainConfig {
  double l2 = 1e-4;
  double learning_rate = 0.1;
  std::size_t max_iterations = 2000;
  double gradient_tolerance = 1e-6;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  bool trained = false;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> weights;
  double bias = 0.0;
};

// Mean binary cross-entropy plus (l2 / 2) * ||w||^2 (bias unpenalised) and
// its gradient.
LossGradient loss_and_gradient(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                               double bias, double l2);

struct TrainingReport {
  LogisticModel model;
  std::vector<double> loss_history;  // loss before each step, then the final loss
  std::size_t iterations = 0;
  bool converged = false;
};

// Full-batch gradient descent from zero. Throws TrainingDiverged if the loss
// becomes non-finite.
TrainingReport train_logistic(const Matrix& x, std::span<const int> y, const TrainConfig& config = {});

LogisticModel train(const Matrix& x, std::span<const int> y, const TrainConfig& config = {});

double sigmoid(double z);

// Throws NotTrained for an untrained model, LengthMismatch for a column
// count that does not match the weights.
std::vector<double> predict_proba(const LogisticModel& model, const Matrix& x);

}  // namespace madd
