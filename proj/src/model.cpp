#include "madd/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <string>

#include "madd/error.hpp"
#include "madd/simulate.hpp"

namespace madd {

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::Binary: return "binary";
    case ColumnKind::Ordinal: return "ordinal";
    case ColumnKind::Numerical: return "numerical";
  }
  return "unknown";
}

DatasetSchema DatasetSchema::oulad() {
  DatasetSchema s;
  s.columns = {
      {"gender", ColumnKind::Binary, {}, {}},
      {"age", ColumnKind::Ordinal, {"0-35", "35-55", "55<="}, {"age_band"}},
      {"disability", ColumnKind::Binary, {}, {}},
      {"highest_education",
       ColumnKind::Ordinal,
       {"No Formal quals", "Lower Than A Level", "A Level or Equivalent", "HE Qualification",
        "Post Graduate Qualification"},
       {}},
      {"poverty",
       ColumnKind::Ordinal,
       {"0-10", "10-20", "20-30", "30-40", "40-50", "50-60", "60-70", "70-80", "80-90", "90-100"},
       {"imd_band"}},
      {"num_of_prev_attempts", ColumnKind::Numerical, {}, {}},
      {"studied_credits", ColumnKind::Numerical, {}, {}},
      {"sum_click", ColumnKind::Numerical, {}, {}},
  };
  return s;
}

namespace {

bool is_missing(std::string_view v) { return v.empty() || v == "?" || v == "NA" || v == "NaN"; }

std::string_view trim(std::string_view v) {
  while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
  while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
  return v;
}

// OULAD writes most IMD bands with a trailing '%' but not all of them.
std::string_view strip_percent(std::string_view v) {
  if (!v.empty() && v.back() == '%') v.remove_suffix(1);
  return v;
}

int find_column(const CsvTable& table, std::string_view name, const std::vector<std::string>& aliases) {
  int idx = table.column(name);
  for (std::size_t i = 0; idx < 0 && i < aliases.size(); ++i) idx = table.column(aliases[i]);
  return idx;
}

double parse_number(std::string_view v, std::string_view column) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw Error(ErrorCode::EncodingError,
                "non-numeric value '" + std::string(v) + "' in numerical column " + std::string(column));
  }
  return out;
}

bool contains(const std::vector<std::string>& set, std::string_view v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

}  // namespace

const DatasetColumn& TabularDataset::column(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c;
  }
  throw Error(ErrorCode::EncodingError, "dataset has no column '" + std::string(name) + "'");
}

TabularDataset TabularDataset::subset(std::span<const std::size_t> indices) const {
  TabularDataset out;
  out.dropped_rows = 0;
  for (const auto& c : columns) {
    DatasetColumn sub{c.name, c.kind, c.levels, {}};
    sub.values.reserve(indices.size());
    for (std::size_t i : indices) sub.values.push_back(c.values.at(i));
    out.columns.push_back(std::move(sub));
  }
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(labels.at(i));
  return out;
}

TabularDataset parse_dataset(const CsvTable& table, const DatasetSchema& schema) {
  const int label_idx = find_column(table, schema.label_column, schema.label_aliases);
  if (label_idx < 0) {
    throw Error(ErrorCode::EncodingError, "dataset has no label column '" + schema.label_column + "'");
  }
  std::vector<std::pair<const ColumnSpec*, int>> used;
  for (const auto& spec : schema.columns) {
    const int idx = find_column(table, spec.name, spec.aliases);
    if (idx >= 0) used.emplace_back(&spec, idx);
  }
  if (used.empty()) {
    throw Error(ErrorCode::EncodingError, "dataset has none of the schema's feature columns");
  }

  TabularDataset data;
  for (const auto& [spec, idx] : used) data.columns.push_back({spec->name, spec->kind, spec->levels, {}});

  for (const auto& row : table.rows) {
    const auto label_raw = trim(row[static_cast<std::size_t>(label_idx)]);
    bool missing = is_missing(label_raw);
    for (const auto& [spec, idx] : used) missing = missing || is_missing(trim(row[static_cast<std::size_t>(idx)]));
    if (missing) {
      ++data.dropped_rows;
      continue;
    }
    int label = 0;
    if (contains(schema.positive_labels, label_raw)) {
      label = 1;
    } else if (!contains(schema.negative_labels, label_raw)) {
      throw Error(ErrorCode::EncodingError, "unknown label value '" + std::string(label_raw) + "'");
    }
    data.labels.push_back(label);
    for (std::size_t c = 0; c < used.size(); ++c) {
      data.columns[c].values.emplace_back(trim(row[static_cast<std::size_t>(used[c].second)]));
    }
  }

  for (auto& column : data.columns) {
    if (column.kind == ColumnKind::Binary) {
      const std::set<std::string> distinct(column.values.begin(), column.values.end());
      if (distinct.size() > 2) {
        throw Error(ErrorCode::EncodingError, "binary column " + column.name + " has " +
                                                  std::to_string(distinct.size()) + " distinct values");
      }
      column.levels.assign(distinct.begin(), distinct.end());
    } else if (column.kind == ColumnKind::Numerical) {
      for (const auto& v : column.values) parse_number(v, column.name);
    } else {
      for (const auto& v : column.values) category_code(column, v);
    }
  }
  return data;
}

TabularDataset load_dataset(const std::filesystem::path& path, const DatasetSchema& schema) {
  return parse_dataset(read_csv(path), schema);
}

int category_code(const DatasetColumn& column, std::string_view value) {
  const bool ordinal = column.kind == ColumnKind::Ordinal;
  const auto key = ordinal ? strip_percent(value) : value;
  for (std::size_t i = 0; i < column.levels.size(); ++i) {
    const std::string_view level = ordinal ? strip_percent(column.levels[i]) : column.levels[i];
    if (level == key) return static_cast<int>(i);
  }
  throw Error(ErrorCode::EncodingError,
              "unknown category '" + std::string(value) + "' in column " + column.name);
}

std::vector<int> sensitive_codes(const TabularDataset& data, std::string_view name) {
  const auto& column = data.column(name);
  if (column.kind != ColumnKind::Binary) {
    throw Error(ErrorCode::EncodingError, "sensitive column " + column.name + " is " +
                                              std::string(to_string(column.kind)) + ", not binary");
  }
  std::vector<int> codes;
  codes.reserve(column.values.size());
  for (const auto& v : column.values) codes.push_back(category_code(column, v));
  return codes;
}

FeatureEncoder FeatureEncoder::fit(const TabularDataset& train) {
  if (train.rows() == 0) {
    throw Error(ErrorCode::EmptyPopulation, "cannot fit an encoder on an empty dataset");
  }
  FeatureEncoder enc;
  for (const auto& column : train.columns) {
    enc.names_.push_back(column.name);
    enc.kinds_.push_back(column.kind);
    enc.levels_.push_back(column.levels);
    double mean = 0.0, scale = 1.0;
    if (column.kind == ColumnKind::Numerical) {
      const auto n = static_cast<double>(column.values.size());
      for (const auto& v : column.values) mean += parse_number(v, column.name);
      mean /= n;
      double var = 0.0;
      for (const auto& v : column.values) {
        const double d = parse_number(v, column.name) - mean;
        var += d * d;
      }
      var /= n;
      scale = std::sqrt(std::max(var, kVarianceFloor));
    }
    enc.means_.push_back(mean);
    enc.scales_.push_back(scale);
  }
  return enc;
}

FeatureEncoder FeatureEncoder::from_parts(std::vector<std::string> names, std::vector<ColumnKind> kinds,
                                          std::vector<std::vector<std::string>> levels,
                                          std::vector<double> means, std::vector<double> scales) {
  const std::size_t n = names.size();
  if (kinds.size() != n || levels.size() != n || means.size() != n || scales.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "encoder parts have inconsistent lengths");
  }
  FeatureEncoder enc;
  enc.names_ = std::move(names);
  enc.kinds_ = std::move(kinds);
  enc.levels_ = std::move(levels);
  enc.means_ = std::move(means);
  enc.scales_ = std::move(scales);
  return enc;
}

Matrix FeatureEncoder::transform(const TabularDataset& data) const {
  Matrix x(data.rows(), names_.size());
  for (std::size_t c = 0; c < names_.size(); ++c) {
    const auto& column = data.column(names_[c]);
    if (column.kind != kinds_[c]) {
      throw Error(ErrorCode::EncodingError, "column " + names_[c] + " changed kind");
    }
    // Codes come from the encoder's levels, not the dataset's, so every
    // split is encoded identically.
    const DatasetColumn reference{names_[c], kinds_[c], levels_[c], {}};
    for (std::size_t r = 0; r < data.rows(); ++r) {
      const auto& v = column.values[r];
      if (kinds_[c] == ColumnKind::Numerical) {
        x(r, c) = (parse_number(v, names_[c]) - means_[c]) / scales_[c];
      } else {
        x(r, c) = category_code(reference, v);
      }
    }
  }
  return x;
}

SplitIndices split_indices(std::size_t n, const SplitRatios& ratios, std::uint64_t seed) {
  if (!(ratios.train >= 0.0 && ratios.validation >= 0.0 && ratios.test >= 0.0) ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidRatios, "split ratios must be non-negative and sum to 1");
  }
  if (n == 0) {
    throw Error(ErrorCode::EmptyPopulation, "cannot split an empty dataset");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  // The tolerance keeps e.g. 20 * 0.15 from flooring to 2.
  auto take = [n](double r) { return static_cast<std::size_t>(std::floor(static_cast<double>(n) * r + 1e-9)); };
  const std::size_t n_val = take(ratios.validation);
  const std::size_t n_test = take(ratios.test);
  const std::size_t n_train = n - n_val - n_test;

  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                        order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  return out;
}

DatasetSplit split(const TabularDataset& data, const SplitRatios& ratios, std::uint64_t seed) {
  const auto idx = split_indices(data.rows(), ratios, seed);
  return {data.subset(idx.train), data.subset(idx.validation), data.subset(idx.test)};
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_shapes(const Matrix& x, std::span<const int> y) {
  if (x.rows != y.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(x.rows) + " rows for " + std::to_string(y.size()) + " labels");
  }
  if (x.rows == 0) {
    throw Error(ErrorCode::EmptyPopulation, "cannot train on an empty design matrix");
  }
}

}  // namespace

LossGradient loss_and_gradient(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                               double bias, double l2) {
  check_shapes(x, y);
  if (weights.size() != x.cols) {
    throw Error(ErrorCode::LengthMismatch, "weight count does not match feature count");
  }
  LossGradient out;
  out.weights.assign(x.cols, 0.0);
  const auto n = static_cast<double>(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const auto row = x.row(r);
    double z = bias;
    for (std::size_t c = 0; c < x.cols; ++c) z += weights[c] * row[c];
    out.loss += softplus(z) - y[r] * z;
    const double residual = sigmoid(z) - y[r];
    for (std::size_t c = 0; c < x.cols; ++c) out.weights[c] += residual * row[c];
    out.bias += residual;
  }
  out.loss /= n;
  out.bias /= n;
  double penalty = 0.0;
  for (std::size_t c = 0; c < x.cols; ++c) {
    out.weights[c] = out.weights[c] / n + l2 * weights[c];
    penalty += weights[c] * weights[c];
  }
  out.loss += 0.5 * l2 * penalty;
  return out;
}

TrainingReport train_logistic(const Matrix& x, std::span<const int> y, const TrainConfig& config) {
  check_shapes(x, y);
  TrainingReport report;
  auto& model = report.model;
  model.weights.assign(x.cols, 0.0);
  model.bias = 0.0;

  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    const auto g = loss_and_gradient(x, y, model.weights, model.bias, config.l2);
    if (!std::isfinite(g.loss)) {
      throw Error(ErrorCode::TrainingDiverged, "training loss became non-finite at iteration " + std::to_string(it));
    }
    report.loss_history.push_back(g.loss);
    double norm = g.bias * g.bias;
    for (double v : g.weights) norm += v * v;
    if (std::sqrt(norm) < config.gradient_tolerance) {
      report.converged = true;
      break;
    }
    for (std::size_t c = 0; c < x.cols; ++c) model.weights[c] -= config.learning_rate * g.weights[c];
    model.bias -= config.learning_rate * g.bias;
    ++report.iterations;
  }
  const auto final_loss = loss_and_gradient(x, y, model.weights, model.bias, config.l2).loss;
  if (!std::isfinite(final_loss)) {
    throw Error(ErrorCode::TrainingDiverged, "training loss became non-finite");
  }
  if (!report.converged) report.loss_history.push_back(final_loss);
  model.trained = true;
  return report;
}

LogisticModel train(const Matrix& x, std::span<const int> y, const TrainConfig& config) {
  return train_logistic(x, y, config).model;
}

std::vector<double> predict_proba(const LogisticModel& model, const Matrix& x) {
  if (!model.trained) {
    throw Error(ErrorCode::NotTrained, "model has not been trained");
  }
  if (x.cols != model.weights.size()) {
    throw Error(ErrorCode::LengthMismatch, "design matrix has " + std::to_string(x.cols) +
                                               " columns, model expects " + std::to_string(model.weights.size()));
  }
  // Keep probabilities strictly inside (0,1) even when the logit saturates.
  constexpr double kEdge = 1e-15;
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const auto row = x.row(r);
    double z = model.bias;
    for (std::size_t c = 0; c < x.cols; ++c) z += model.weights[c] * row[c];
    out[r] = std::clamp(sigmoid(z), kEdge, 1.0 - kEdge);
  }
  return out;
}

}  // namespace madd
