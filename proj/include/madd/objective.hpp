#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "madd/record.hpp"
#include "madd/transport.hpp"

namespace madd {

// Per-record loss l(probability, label) averaged into the accuracy loss.
using SampleLoss = std::function<double(double proba, int label)>;

// `points` evenly spaced values covering [0,1], both ends included.
std::vector<double> even_grid(std::size_t points);

struct ObjectiveConfig {
  double theta = 0.5;      // weight of the fairness loss
  double threshold = 0.5;  // classification threshold t
  std::size_t bins = kDefaultBins;
  std::vector<double> lambda_grid = even_grid(1000);
  CdfMethod cdf_method = CdfMethod::InterpolatedDensity;
  std::size_t cdf_grid_nodes = kDefaultCdfGridNodes;
  // Empty means the 0/1 loss on predictions thresholded at `threshold`.
  SampleLoss sample_loss;
  // Worker threads for the sweep; 0 picks the hardware concurrency.
  unsigned threads = 0;

  // Throws InvalidConfig (InvalidBinCount for bins < 2).
  void validate() const;
  TransportOptions transport() const { return {bins, cdf_method, cdf_grid_nodes}; }
};

// 1 where proba >= t.
std::vector<int> apply_threshold(std::span<const double> probas, double t);

// Fraction of mismatched predictions, i.e. 1 - accuracy.
double accuracy_loss(std::span<const int> preds, std::span<const int> labels);

// Mean of `loss` over (proba, label) pairs.
double accuracy_loss(std::span<const double> probas, std::span<const int> labels, const SampleLoss& loss);

// Half the MADD between the two groups' density vectors, in [0,1].
double fairness_loss(std::span<const ScoredRecord> records, std::size_t m = kDefaultBins);

double total_loss(double accuracy, double fairness, double theta);

struct SweepRow {
  double lambda = 0.0;
  double accuracy_loss = 0.0;
  double fairness_loss = 0.0;
  double total_loss = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double lambda_star = 0.0;
  double min_total_loss = 0.0;
  // Index of the lambda_star row.
  std::size_t best_index = 0;
};

// Labels of all records; throws MissingLabels if any is absent.
std::vector<int> labels_of(std::span<const ScoredRecord> records);

// Evaluates every grid lambda and picks the argmin of the total loss, ties
// going to the largest lambda.
SweepResult sweep(std::span<const ScoredRecord> records, const ObjectiveConfig& config = {});

}  // namespace madd
