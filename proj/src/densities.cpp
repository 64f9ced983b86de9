#include "madd/densities.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "madd/error.hpp"

namespace madd {

namespace {

void check_bin_count(std::size_t m) {
  if (m < 2) {
    throw Error(ErrorCode::InvalidBinCount, "bin count must be at least 2, got " + std::to_string(m));
  }
}

void check_same_bins(const DensityVector& a, const DensityVector& b) {
  if (a.bin_count() != b.bin_count()) {
    throw Error(ErrorCode::BinCountMismatch, "density vectors have " + std::to_string(a.bin_count()) +
                                                 " and " + std::to_string(b.bin_count()) + " bins");
  }
}

}  // namespace

DensityVector DensityVector::from_proportions(std::vector<double> proportions, std::size_t n) {
  check_bin_count(proportions.size());
  double total = 0.0;
  for (double v : proportions) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::InvalidProbability, "density proportions must be finite and non-negative");
    }
    total += v;
  }
  if (n > 0 && std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidProbability, "density proportions sum to " + std::to_string(total));
  }
  if (n == 0 && total != 0.0) {
    throw Error(ErrorCode::InvalidProbability, "an empty density vector must be all zeros");
  }
  return DensityVector(std::move(proportions), n);
}

double bin_edge(std::size_t k, std::size_t m) {
  return static_cast<double>(k) / static_cast<double>(m);
}

std::size_t bin_index(double p, std::size_t m) {
  if (p >= 1.0) return m - 1;
  auto k = static_cast<std::size_t>(p * static_cast<double>(m));
  if (k >= m) k = m - 1;
  // p * m can round across an edge; settle against the edges themselves.
  while (k > 0 && p < bin_edge(k, m)) --k;
  while (k + 1 < m && p >= bin_edge(k + 1, m)) ++k;
  return k;
}

DensityVector build_density_vector(std::span<const double> probas, std::size_t m) {
  check_bin_count(m);
  if (probas.empty()) {
    throw Error(ErrorCode::EmptyPopulation, "cannot build a density vector from an empty population");
  }
  std::vector<std::size_t> counts(m, 0);
  for (double p : probas) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorCode::InvalidProbability, "probability outside [0,1]: " + std::to_string(p));
    }
    ++counts[bin_index(p, m)];
  }
  const auto n = static_cast<double>(probas.size());
  std::vector<double> bins(m);
  for (std::size_t k = 0; k < m; ++k) bins[k] = static_cast<double>(counts[k]) / n;
  return DensityVector::from_proportions(std::move(bins), probas.size());
}

DensityVector pool_density_vectors(const DensityVector& d0, const DensityVector& d1) {
  check_same_bins(d0, d1);
  const std::size_t n = d0.size() + d1.size();
  if (n == 0) {
    throw Error(ErrorCode::EmptyPopulation, "cannot pool two empty density vectors");
  }
  const auto n0 = static_cast<double>(d0.size());
  const auto n1 = static_cast<double>(d1.size());
  const auto total = static_cast<double>(n);
  std::vector<double> bins(d0.bin_count());
  for (std::size_t k = 0; k < bins.size(); ++k) {
    // n_g * d_g,k recovers the bin count, so this is (N0k + N1k) / (n0 + n1).
    bins[k] = (n0 * d0[k] + n1 * d1[k]) / total;
  }
  return DensityVector::from_proportions(std::move(bins), n);
}

DensityVector mix_density_vectors(const DensityVector& a, const DensityVector& b, double lambda) {
  check_same_bins(a, b);
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidLambda, "mixing weight outside [0,1]: " + std::to_string(lambda));
  }
  std::vector<double> bins(a.bin_count());
  for (std::size_t k = 0; k < bins.size(); ++k) bins[k] = (1.0 - lambda) * a[k] + lambda * b[k];
  return DensityVector::from_proportions(std::move(bins), a.size());
}

double madd(const DensityVector& d0, const DensityVector& d1) {
  check_same_bins(d0, d1);
  double sum = 0.0;
  for (std::size_t k = 0; k < d0.bin_count(); ++k) sum += std::abs(d0[k] - d1[k]);
  return sum;
}

std::vector<CurvePoint> kde_plot_curve(const DensityVector& d, double bandwidth, std::size_t points) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(ErrorCode::InvalidBandwidth, "KDE bandwidth must be positive");
  }
  if (points < 2) {
    throw Error(ErrorCode::InvalidConfig, "KDE grid needs at least 2 points");
  }
  const std::size_t m = d.bin_count();
  const double norm = 1.0 / (bandwidth * std::sqrt(2.0 * std::numbers::pi));
  auto kernel = [&](double u) { return norm * std::exp(-0.5 * u * u / (bandwidth * bandwidth)); };

  std::vector<CurvePoint> curve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(points - 1);
    double y = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (d[k] == 0.0) continue;
      const double c = (static_cast<double>(k) + 0.5) / static_cast<double>(m);
      y += d[k] * (kernel(x - c) + kernel(x + c) + kernel(x - (2.0 - c)));
    }
    curve[i] = {x, y};
  }
  return curve;
}

}  // namespace madd
