#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "madd/densities.hpp"
#include "madd/record.hpp"

namespace madd {

// How a group CDF is estimated from its density vector.
//
// ExactMass: knots at the m+1 bin edges, cumulative bin masses, linear in
// between. Every bin keeps exactly its mass.
//
// InterpolatedDensity: the bin heights are anchored at the left bin edges
// (the last height also at x = 1), joined linearly into a density, and
// integrated by cumulative trapezoids over an even grid, then normalised.
// This is the smoother estimate and the default for the post-processor.
enum class CdfMethod { ExactMass, InterpolatedDensity };

inline constexpr std::size_t kDefaultCdfGridNodes = 10001;

std::string_view to_string(CdfMethod method);
CdfMethod parse_cdf_method(std::string_view name);

// Monotone CDF on [0,1] given by knots; linear interpolation in between.
class PiecewiseLinearCdf {
 public:
  // knots_x strictly increasing from 0 to 1, knots_y non-decreasing from 0
  // to 1 (within 1e-9; the ends are snapped to exactly 0 and 1).
  static PiecewiseLinearCdf from_knots(std::vector<double> knots_x, std::vector<double> knots_y);

  std::span<const double> knots_x() const noexcept { return xs_; }
  std::span<const double> knots_y() const noexcept { return ys_; }

  // CDF(x); x is clamped to [0,1].
  double operator()(double x) const;

  // inf{x : CDF(x) >= u} for u already known to be in [0,1].
  double inverse(double u) const;

 private:
  PiecewiseLinearCdf(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {}

  friend PiecewiseLinearCdf mix_cdfs(const PiecewiseLinearCdf&, const PiecewiseLinearCdf&, double);

  std::vector<double> xs_;
  std::vector<double> ys_;
};

PiecewiseLinearCdf build_cdf(const DensityVector& d);
PiecewiseLinearCdf build_interpolated_cdf(const DensityVector& d,
                                          std::size_t grid_nodes = kDefaultCdfGridNodes);
PiecewiseLinearCdf build_cdf(const DensityVector& d, CdfMethod method,
                             std::size_t grid_nodes = kDefaultCdfGridNodes);

// Throws InvalidQuantile when u is outside [0,1].
double generalized_inverse(const PiecewiseLinearCdf& cdf, double u);

// (1 - lambda) * a + lambda * b knotwise. Both CDFs must share knots_x.
PiecewiseLinearCdf mix_cdfs(const PiecewiseLinearCdf& a, const PiecewiseLinearCdf& b, double lambda);

struct TransportOptions {
  std::size_t bins = kDefaultBins;
  CdfMethod method = CdfMethod::InterpolatedDensity;
  std::size_t grid_nodes = kDefaultCdfGridNodes;
};

// The post-processing map for one lambda: each record keeps its quantile
// under its own group CDF and is sent to the same quantile of the mixed CDF
// (1 - lambda) * group + lambda * pooled.
struct FipMap {
  double lambda = 0.0;
  PiecewiseLinearCdf cdf_g0;
  PiecewiseLinearCdf cdf_g1;
  PiecewiseLinearCdf cdf_all;
  PiecewiseLinearCdf mixed_g0;
  PiecewiseLinearCdf mixed_g1;

  const PiecewiseLinearCdf& group_cdf(Group g) const { return g == Group::G0 ? cdf_g0 : cdf_g1; }
  const PiecewiseLinearCdf& mixed_cdf(Group g) const { return g == Group::G0 ? mixed_g0 : mixed_g1; }

  double operator()(double proba, Group g) const;
  std::vector<double> apply(std::span<const ScoredRecord> records) const;
};

// Group and pooled CDFs estimated once from a batch of records. The pooled
// CDF comes from the count-weighted pooled density vector.
class GroupCdfs {
 public:
  static GroupCdfs fit(std::span<const ScoredRecord> records, const TransportOptions& options = {});

  const PiecewiseLinearCdf& group(Group g) const { return g == Group::G0 ? g0_ : g1_; }
  const PiecewiseLinearCdf& pooled() const { return all_; }
  std::size_t group_size(Group g) const { return g == Group::G0 ? n0_ : n1_; }

  // Throws InvalidLambda outside [0,1].
  FipMap at(double lambda) const;

  // CDF of each record's own group evaluated at its probability.
  std::vector<double> quantiles(std::span<const ScoredRecord> records) const;

 private:
  GroupCdfs(PiecewiseLinearCdf g0, PiecewiseLinearCdf g1, PiecewiseLinearCdf all, std::size_t n0, std::size_t n1)
      : g0_(std::move(g0)), g1_(std::move(g1)), all_(std::move(all)), n0_(n0), n1_(n1) {}

  PiecewiseLinearCdf g0_;
  PiecewiseLinearCdf g1_;
  PiecewiseLinearCdf all_;
  std::size_t n0_ = 0;
  std::size_t n1_ = 0;
};

void check_lambda(double lambda);

// fairness_improved_prediction: new probabilities in input order.
std::vector<double> fip(std::span<const ScoredRecord> records, double lambda,
                        const TransportOptions& options = {});

}  // namespace madd
