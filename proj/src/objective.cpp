#include "madd/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "madd/densities.hpp"
#include "madd/error.hpp"

namespace madd {

std::vector<double> even_grid(std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {0.0};
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

void ObjectiveConfig::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "theta must lie in [0,1], got " + std::to_string(theta));
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "threshold must lie in (0,1), got " + std::to_string(threshold));
  }
  if (bins < 2) {
    throw Error(ErrorCode::InvalidBinCount, "bin count must be at least 2, got " + std::to_string(bins));
  }
  if (lambda_grid.empty()) {
    throw Error(ErrorCode::InvalidConfig, "lambda grid is empty");
  }
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const double l = lambda_grid[i];
    if (!(l >= 0.0 && l <= 1.0)) {
      throw Error(ErrorCode::InvalidLambda, "lambda grid value outside [0,1]: " + std::to_string(l));
    }
    if (i > 0 && l < lambda_grid[i - 1]) {
      throw Error(ErrorCode::InvalidConfig, "lambda grid must be sorted");
    }
  }
}

std::vector<int> apply_threshold(std::span<const double> probas, double t) {
  std::vector<int> out(probas.size());
  for (std::size_t i = 0; i < probas.size(); ++i) out[i] = probas[i] >= t ? 1 : 0;
  return out;
}

double accuracy_loss(std::span<const int> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(preds.size()) + " predictions for " +
                                               std::to_string(labels.size()) + " labels");
  }
  if (preds.empty()) {
    throw Error(ErrorCode::EmptyPopulation, "accuracy loss of an empty population");
  }
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) wrong += preds[i] != labels[i];
  return static_cast<double>(wrong) / static_cast<double>(preds.size());
}

double accuracy_loss(std::span<const double> probas, std::span<const int> labels, const SampleLoss& loss) {
  if (probas.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(probas.size()) + " probabilities for " +
                                               std::to_string(labels.size()) + " labels");
  }
  if (probas.empty()) {
    throw Error(ErrorCode::EmptyPopulation, "accuracy loss of an empty population");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probas.size(); ++i) sum += loss(probas[i], labels[i]);
  return sum / static_cast<double>(probas.size());
}

double fairness_loss(std::span<const ScoredRecord> records, std::size_t m) {
  const auto p0 = probas_of(records, Group::G0);
  const auto p1 = probas_of(records, Group::G1);
  if (p0.empty() || p1.empty()) {
    throw Error(ErrorCode::EmptyGroup, "fairness loss needs both groups to be non-empty");
  }
  return 0.5 * madd(build_density_vector(p0, m), build_density_vector(p1, m));
}

double total_loss(double accuracy, double fairness, double theta) {
  return (1.0 - theta) * accuracy + theta * fairness;
}

std::vector<int> labels_of(std::span<const ScoredRecord> records) {
  std::vector<int> labels(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].label) {
      throw Error(ErrorCode::MissingLabels, "record " + std::to_string(i) + " has no label");
    }
    labels[i] = *records[i].label;
  }
  return labels;
}

namespace {

struct SweepContext {
  const GroupCdfs& cdfs;
  std::span<const ScoredRecord> records;
  std::span<const double> quantiles;
  std::span<const int> labels;
  const ObjectiveConfig& config;
};

SweepRow evaluate(const SweepContext& ctx, double lambda) {
  const auto mixed0 = mix_cdfs(ctx.cdfs.group(Group::G0), ctx.cdfs.pooled(), lambda);
  const auto mixed1 = mix_cdfs(ctx.cdfs.group(Group::G1), ctx.cdfs.pooled(), lambda);

  const std::size_t n = ctx.records.size();
  std::vector<double> mapped(n);
  std::vector<double> mapped0, mapped1;
  mapped0.reserve(ctx.cdfs.group_size(Group::G0));
  mapped1.reserve(ctx.cdfs.group_size(Group::G1));
  for (std::size_t i = 0; i < n; ++i) {
    const bool first = ctx.records[i].group == Group::G0;
    mapped[i] = std::clamp((first ? mixed0 : mixed1).inverse(ctx.quantiles[i]), 0.0, 1.0);
    (first ? mapped0 : mapped1).push_back(mapped[i]);
  }

  SweepRow row;
  row.lambda = lambda;
  if (ctx.config.sample_loss) {
    row.accuracy_loss = accuracy_loss(mapped, ctx.labels, ctx.config.sample_loss);
  } else {
    row.accuracy_loss = accuracy_loss(apply_threshold(mapped, ctx.config.threshold), ctx.labels);
  }
  row.fairness_loss = 0.5 * madd(build_density_vector(mapped0, ctx.config.bins),
                                 build_density_vector(mapped1, ctx.config.bins));
  row.total_loss = total_loss(row.accuracy_loss, row.fairness_loss, ctx.config.theta);
  return row;
}

}  // namespace

SweepResult sweep(std::span<const ScoredRecord> records, const ObjectiveConfig& config) {
  config.validate();
  const auto labels = labels_of(records);
  const auto cdfs = GroupCdfs::fit(records, config.transport());
  const auto quantiles = cdfs.quantiles(records);
  const SweepContext ctx{cdfs, records, quantiles, labels, config};

  const std::size_t rows = config.lambda_grid.size();
  SweepResult result;
  result.rows.resize(rows);

  unsigned workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, rows));
  auto run = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < rows; i += stride) result.rows[i] = evaluate(ctx, config.lambda_grid[i]);
  };
  if (workers <= 1) {
    run(0, 1);
  } else {
    // Rows are independent; any exception is rethrown after the join.
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            run(w, workers);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  result.best_index = 0;
  for (std::size_t i = 1; i < rows; ++i) {
    if (result.rows[i].total_loss <= result.rows[result.best_index].total_loss) result.best_index = i;
  }
  result.lambda_star = result.rows[result.best_index].lambda;
  result.min_total_loss = result.rows[result.best_index].total_loss;
  return result;
}

}  // namespace madd
