#include "madd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "madd/error.hpp"

namespace madd {

std::string_view to_string(CdfMethod method) {
  return method == CdfMethod::ExactMass ? "exact" : "interpolated";
}

CdfMethod parse_cdf_method(std::string_view name) {
  if (name == "exact") return CdfMethod::ExactMass;
  if (name == "interpolated") return CdfMethod::InterpolatedDensity;
  throw Error(ErrorCode::InvalidConfig, "unknown CDF method '" + std::string(name) + "'");
}

PiecewiseLinearCdf PiecewiseLinearCdf::from_knots(std::vector<double> knots_x, std::vector<double> knots_y) {
  if (knots_x.size() < 2 || knots_x.size() != knots_y.size()) {
    throw Error(ErrorCode::InvalidConfig, "a CDF needs at least two knots with matching x and y");
  }
  if (knots_x.front() != 0.0 || knots_x.back() != 1.0) {
    throw Error(ErrorCode::InvalidConfig, "CDF knots must span [0,1]");
  }
  for (std::size_t i = 1; i < knots_x.size(); ++i) {
    if (!(knots_x[i] > knots_x[i - 1])) {
      throw Error(ErrorCode::InvalidConfig, "CDF knot abscissae must be strictly increasing");
    }
    if (knots_y[i] < knots_y[i - 1]) {
      throw Error(ErrorCode::InvalidConfig, "CDF knot values must be non-decreasing");
    }
  }
  if (std::abs(knots_y.front()) > 1e-9 || std::abs(knots_y.back() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidConfig, "CDF must run from 0 to 1");
  }
  knots_y.front() = 0.0;
  knots_y.back() = 1.0;
  for (double& y : knots_y) y = std::clamp(y, 0.0, 1.0);
  return PiecewiseLinearCdf(std::move(knots_x), std::move(knots_y));
}

double PiecewiseLinearCdf::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  // First knot strictly right of x; the segment is [j-1, j].
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const auto j = static_cast<std::size_t>(it - xs_.begin());
  const double x0 = xs_[j - 1], x1 = xs_[j];
  const double y0 = ys_[j - 1], y1 = ys_[j];
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

double PiecewiseLinearCdf::inverse(double u) const {
  if (!(u > 0.0)) return 0.0;
  // First knot whose value reaches u. Knots before it are all < u, so the
  // infimum lies inside segment [j-1, j] and the segment is not flat.
  const auto it = std::lower_bound(ys_.begin(), ys_.end(), u);
  if (it == ys_.end()) return 1.0;
  const auto j = static_cast<std::size_t>(it - ys_.begin());
  const double y0 = ys_[j - 1], y1 = ys_[j];
  const double x0 = xs_[j - 1], x1 = xs_[j];
  const double x = x0 + (u - y0) / (y1 - y0) * (x1 - x0);
  return std::clamp(x, x0, x1);
}

PiecewiseLinearCdf build_cdf(const DensityVector& d) {
  const std::size_t m = d.bin_count();
  std::vector<double> xs(m + 1), ys(m + 1);
  double cumulative = 0.0;
  xs[0] = 0.0;
  ys[0] = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    cumulative += d[k];
    xs[k + 1] = bin_edge(k + 1, m);
    ys[k + 1] = cumulative;
  }
  if (d.size() == 0) {
    throw Error(ErrorCode::EmptyPopulation, "cannot build a CDF from an empty density vector");
  }
  return PiecewiseLinearCdf::from_knots(std::move(xs), std::move(ys));
}

PiecewiseLinearCdf build_interpolated_cdf(const DensityVector& d, std::size_t grid_nodes) {
  if (d.size() == 0) {
    throw Error(ErrorCode::EmptyPopulation, "cannot build a CDF from an empty density vector");
  }
  if (grid_nodes < 3) {
    throw Error(ErrorCode::InvalidConfig, "interpolated CDF grid needs at least 3 nodes");
  }
  const std::size_t m = d.bin_count();
  const auto md = static_cast<double>(m);
  auto height = [&](double x) {
    const std::size_t k = bin_index(x, m);
    const double left = d[k];
    const double right = k + 1 < m ? d[k + 1] : d[m - 1];
    const double t = std::clamp((x - bin_edge(k, m)) * md, 0.0, 1.0);
    return left + (right - left) * t;
  };

  const double step = 1.0 / static_cast<double>(grid_nodes - 1);
  std::vector<double> xs(grid_nodes), ys(grid_nodes);
  xs[0] = 0.0;
  ys[0] = 0.0;
  double previous = height(0.0);
  for (std::size_t i = 1; i < grid_nodes; ++i) {
    xs[i] = i + 1 == grid_nodes ? 1.0 : static_cast<double>(i) * step;
    const double current = height(xs[i]);
    ys[i] = ys[i - 1] + 0.5 * (previous + current) * (xs[i] - xs[i - 1]);
    previous = current;
  }
  const double total = ys.back();
  for (double& y : ys) y /= total;
  return PiecewiseLinearCdf::from_knots(std::move(xs), std::move(ys));
}

PiecewiseLinearCdf build_cdf(const DensityVector& d, CdfMethod method, std::size_t grid_nodes) {
  return method == CdfMethod::ExactMass ? build_cdf(d) : build_interpolated_cdf(d, grid_nodes);
}

double generalized_inverse(const PiecewiseLinearCdf& cdf, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw Error(ErrorCode::InvalidQuantile, "quantile level outside [0,1]: " + std::to_string(u));
  }
  return cdf.inverse(u);
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidLambda, "lambda must lie in [0,1], got " + std::to_string(lambda));
  }
}

PiecewiseLinearCdf mix_cdfs(const PiecewiseLinearCdf& a, const PiecewiseLinearCdf& b, double lambda) {
  check_lambda(lambda);
  if (a.xs_ != b.xs_) {
    throw Error(ErrorCode::BinCountMismatch, "cannot mix CDFs with different knots");
  }
  std::vector<double> ys(a.ys_.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    ys[i] = std::min(1.0, (1.0 - lambda) * a.ys_[i] + lambda * b.ys_[i]);
  }
  // Knotwise convex combination of two CDFs is a CDF; only rounding can
  // break monotonicity, and min() above cannot.
  for (std::size_t i = 1; i < ys.size(); ++i) ys[i] = std::max(ys[i], ys[i - 1]);
  ys.back() = 1.0;
  return PiecewiseLinearCdf(a.xs_, std::move(ys));
}

double FipMap::operator()(double proba, Group g) const {
  return std::clamp(mixed_cdf(g).inverse(group_cdf(g)(proba)), 0.0, 1.0);
}

std::vector<double> FipMap::apply(std::span<const ScoredRecord> records) const {
  std::vector<double> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) out[i] = (*this)(records[i].proba, records[i].group);
  return out;
}

GroupCdfs GroupCdfs::fit(std::span<const ScoredRecord> records, const TransportOptions& options) {
  const auto p0 = probas_of(records, Group::G0);
  const auto p1 = probas_of(records, Group::G1);
  if (p0.empty() || p1.empty()) {
    throw Error(ErrorCode::EmptyGroup, "both groups need at least one record (G0: " +
                                           std::to_string(p0.size()) + ", G1: " + std::to_string(p1.size()) + ")");
  }
  const auto d0 = build_density_vector(p0, options.bins);
  const auto d1 = build_density_vector(p1, options.bins);
  const auto all = pool_density_vectors(d0, d1);
  return GroupCdfs(build_cdf(d0, options.method, options.grid_nodes),
                   build_cdf(d1, options.method, options.grid_nodes),
                   build_cdf(all, options.method, options.grid_nodes), p0.size(), p1.size());
}

FipMap GroupCdfs::at(double lambda) const {
  check_lambda(lambda);
  return FipMap{lambda, g0_, g1_, all_, mix_cdfs(g0_, all_, lambda), mix_cdfs(g1_, all_, lambda)};
}

std::vector<double> GroupCdfs::quantiles(std::span<const ScoredRecord> records) const {
  std::vector<double> u(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) u[i] = group(records[i].group)(records[i].proba);
  return u;
}

std::vector<double> fip(std::span<const ScoredRecord> records, double lambda, const TransportOptions& options) {
  check_lambda(lambda);
  return GroupCdfs::fit(records, options).at(lambda).apply(records);
}

}  // namespace madd
