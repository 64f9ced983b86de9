#include "madd/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "madd/error.hpp"

namespace madd {

std::uint64_t Rng::below(std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v = 0;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

double raw_density_g0(double x, const SimulationSpec& spec) {
  const double z = spec.gamma_xscale * x;
  if (z <= 0.0) return 0.0;
  const double k = spec.gamma_shape;
  const double rate = spec.gamma_rate;
  return std::pow(rate, k) * std::pow(z, k - 1.0) * std::exp(-rate * z) / std::tgamma(k);
}

double raw_density_g1(double x, const SimulationSpec& spec) {
  const double z = (spec.normal_xscale * x - spec.normal_mean * spec.normal_xscale) / spec.normal_sd;
  return std::exp(-0.5 * z * z) / (spec.normal_sd * std::sqrt(2.0 * std::numbers::pi));
}

namespace {

// Composite Simpson over the even grid on [0,1]; values.size() is odd.
double simpson(const std::vector<double>& values) {
  const std::size_t n = values.size() - 1;
  const double h = 1.0 / static_cast<double>(n);
  double sum = values.front() + values.back();
  for (std::size_t i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  return sum * h / 3.0;
}

std::vector<double> cumulative_table(const std::vector<double>& nodes, const std::vector<double>& values) {
  std::vector<double> table(nodes.size(), 0.0);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    table[i] = table[i - 1] + 0.5 * (values[i] + values[i - 1]) * (nodes[i] - nodes[i - 1]);
  }
  const double total = table.back();
  for (double& v : table) v /= total;
  table.back() = 1.0;
  return table;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto j = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return ys[j - 1] + t * (ys[j] - ys[j - 1]);
}

}  // namespace

Simulator::Simulator(SimulationSpec spec) : spec_(spec) {
  if (spec_.table_nodes < 3 || spec_.table_nodes % 2 == 0) {
    throw Error(ErrorCode::InvalidConfig, "table_nodes must be odd and at least 3");
  }
  if (!(spec_.gamma_shape > 0.0 && spec_.gamma_rate > 0.0 && spec_.gamma_xscale > 0.0 &&
        spec_.normal_sd > 0.0 && spec_.normal_xscale > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "simulation shape, rate, sd and scales must be positive");
  }
  const std::size_t n = spec_.table_nodes;
  nodes_.resize(n);
  std::vector<double> f0(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes_[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    f0[i] = raw_density_g0(nodes_[i], spec_);
    f1[i] = raw_density_g1(nodes_[i], spec_);
  }
  c0_ = simpson(f0);
  c1_ = simpson(f1);
  if (!(c0_ > 0.0 && c1_ > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "a simulated density has no mass on [0,1]");
  }
  table_g0_ = cumulative_table(nodes_, f0);
  table_g1_ = cumulative_table(nodes_, f1);
}

double Simulator::pdf_g0(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  return raw_density_g0(x, spec_) / c0_;
}

double Simulator::pdf_g1(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  return raw_density_g1(x, spec_) / c1_;
}

double Simulator::cdf(Group g, double x) const {
  return interpolate(nodes_, g == Group::G0 ? table_g0_ : table_g1_, x);
}

double Simulator::quantile(Group g, double u) const {
  const auto& table = g == Group::G0 ? table_g0_ : table_g1_;
  if (u <= 0.0) {
    // Leftmost point of the support.
    const auto it = std::upper_bound(table.begin(), table.end(), 0.0);
    return nodes_[static_cast<std::size_t>(it - table.begin()) - 1];
  }
  if (u >= 1.0) return 1.0;
  const auto j = static_cast<std::size_t>(std::lower_bound(table.begin(), table.end(), u) - table.begin());
  const double t = (u - table[j - 1]) / (table[j] - table[j - 1]);
  return std::clamp(nodes_[j - 1] + t * (nodes_[j] - nodes_[j - 1]), 0.0, 1.0);
}

std::vector<ScoredRecord> Simulator::sample() const {
  if (spec_.n_g0 == 0 || spec_.n_g1 == 0) {
    throw Error(ErrorCode::EmptyPopulation, "both simulated groups need at least one sample");
  }
  Rng rng(spec_.seed);
  std::vector<ScoredRecord> records;
  records.reserve(spec_.n_g0 + spec_.n_g1);
  auto draw = [&](Group g, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const double p = quantile(g, rng.uniform());
      const int y = rng.bernoulli(p) ? 1 : 0;
      records.push_back({p, g, y});
    }
  };
  draw(Group::G0, spec_.n_g0);
  draw(Group::G1, spec_.n_g1);
  return records;
}

std::vector<ScoredRecord> sample(const SimulationSpec& spec) { return Simulator(spec).sample(); }

}  // namespace madd
