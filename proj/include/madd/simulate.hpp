#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "madd/record.hpp"

namespace madd {

// Seeded 64-bit Mersenne Twister with a portable [0,1) draw. The standard
// distributions are implementation-defined, so nothing here relies on them.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // 53 random bits scaled into [0,1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// Parameters of the two simulated score distributions on [0,1].
//
// G0: the Gamma(shape, rate) density evaluated at gamma_xscale * x.
// G1: a normal density with standard deviation normal_sd evaluated at
//     normal_xscale * x and centred so its mode sits at normal_mean on the
//     [0,1] axis, i.e. the N(normal_mean * normal_xscale, normal_sd) density
//     at normal_xscale * x.
// Both are truncated to [0,1] and divided by their mass there (c0, c1).
struct SimulationSpec {
  std::size_t n_g0 = 10000;
  std::size_t n_g1 = 10000;
  double gamma_shape = 4.0;
  double gamma_rate = 1.0;
  double gamma_xscale = 11.0;
  double normal_mean = 0.55;
  double normal_sd = 1.0;
  double normal_xscale = 10.0;
  std::uint64_t seed = 42;
  std::size_t table_nodes = 10001;  // odd, for Simpson's rule
};

// Unnormalised source densities, before truncation.
double raw_density_g0(double x, const SimulationSpec& spec);
double raw_density_g1(double x, const SimulationSpec& spec);

class Simulator {
 public:
  // Throws InvalidConfig for non-positive scales or an unusable node count.
  explicit Simulator(SimulationSpec spec);

  const SimulationSpec& spec() const noexcept { return spec_; }
  double c0() const noexcept { return c0_; }
  double c1() const noexcept { return c1_; }

  // Normalised truncated densities; zero outside [0,1].
  double pdf_g0(double x) const;
  double pdf_g1(double x) const;
  double pdf(Group g, double x) const { return g == Group::G0 ? pdf_g0(x) : pdf_g1(x); }

  // Tabulated CDFs used for inverse-transform sampling.
  double cdf(Group g, double x) const;
  double quantile(Group g, double u) const;

  // n_g0 G0 records then n_g1 G1 records. Per record the generator yields
  // one draw for the probability and one for its Bernoulli label.
  std::vector<ScoredRecord> sample() const;

 private:
  SimulationSpec spec_;
  double c0_ = 0.0;
  double c1_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> table_g0_;
  std::vector<double> table_g1_;
};

std::vector<ScoredRecord> sample(const SimulationSpec& spec);

}  // namespace madd
