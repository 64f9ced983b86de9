#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace madd {

inline constexpr std::size_t kDefaultBins = 100;
inline constexpr double kDefaultBandwidth = 0.05;

// Histogram of predicted probabilities over m equal sub-intervals of [0,1].
// Bin k (0-based) holds [k/m, (k+1)/m); the last bin is closed on the right.
//
// Values are immutable once built. `size()` is the sample count the vector
// was estimated from and is used as the mixture weight when pooling.
class DensityVector {
 public:
  // Validates: m >= 2, every proportion >= 0 and, for n > 0, a total of 1
  // within 1e-9. An n == 0 vector must be all zeros.
  static DensityVector from_proportions(std::vector<double> proportions, std::size_t n);

  std::size_t bin_count() const noexcept { return bins_.size(); }
  std::size_t size() const noexcept { return n_; }
  std::span<const double> bins() const noexcept { return bins_; }
  double operator[](std::size_t k) const { return bins_[k]; }

 private:
  DensityVector(std::vector<double> bins, std::size_t n) : bins_(std::move(bins)), n_(n) {}

  std::vector<double> bins_;
  std::size_t n_ = 0;
};

// Lower edge of bin k, i.e. k/m. Shared by histograms and CDF knots so a
// value on an edge is classified the same way everywhere.
double bin_edge(std::size_t k, std::size_t m);

// 0-based bin holding `p`; requires p in [0,1] and m >= 2.
std::size_t bin_index(double p, std::size_t m);

DensityVector build_density_vector(std::span<const double> probas, std::size_t m = kDefaultBins);

// Mixture weighted by sample counts; equals the histogram of the
// concatenated samples.
DensityVector pool_density_vectors(const DensityVector& d0, const DensityVector& d1);

// (1 - lambda) * a + lambda * b, binwise. The result keeps a's sample count.
DensityVector mix_density_vectors(const DensityVector& a, const DensityVector& b, double lambda);

// Model Absolute Density Distance: sum of absolute binwise differences, in [0,2].
double madd(const DensityVector& d0, const DensityVector& d1);

struct CurvePoint {
  double x = 0.0;
  double density = 0.0;
};

// Gaussian-kernel smoothing of the histogram for plotting only. Kernels
// centred on bin midpoints, reflected at 0 and 1 so mass stays in [0,1].
// Evaluated on `points` evenly spaced abscissae covering [0,1].
std::vector<CurvePoint> kde_plot_curve(const DensityVector& d,
                                       double bandwidth = kDefaultBandwidth,
                                       std::size_t points = 201);

}  // namespace madd
