#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "madd/error.hpp"
#include "madd/simulate.hpp"
#include "oracles.hpp"

using namespace madd;

namespace {

// Regularised lower incomplete gamma P(4, x) in closed form.
double gamma4_cdf(double x) {
  return 1.0 - std::exp(-x) * (1.0 + x + x * x / 2.0 + x * x * x / 6.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Independent trapezoid CDF of a density on a fine uniform grid.
struct QuadratureCdf {
  std::vector<double> values;
  std::size_t intervals;

  QuadratureCdf(const std::function<double(double)>& pdf, std::size_t n) : intervals(n) {
    values.assign(n + 1, 0.0);
    double prev = pdf(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
      const double cur = pdf(static_cast<double>(i) / static_cast<double>(n));
      values[i] = values[i - 1] + 0.5 * (prev + cur) / static_cast<double>(n);
      prev = cur;
    }
    for (double& v : values) v /= values.back();
  }

  double operator()(double x) const {
    const double pos = std::clamp(x, 0.0, 1.0) * static_cast<double>(intervals);
    const auto i = std::min(static_cast<std::size_t>(pos), intervals - 1);
    const double frac = pos - static_cast<double>(i);
    return values[i] + frac * (values[i + 1] - values[i]);
  }
};

std::vector<double> probas_in(const std::vector<ScoredRecord>& records, Group g) {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.group == g) out.push_back(r.proba);
  return out;
}

double ks_distance(std::vector<double> xs, const QuadratureCdf& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

}  // namespace

TEST_CASE("pdf_g0 vanishes at zero and outside the unit interval") {
  const Simulator sim(SimulationSpec{});
  CHECK(sim.pdf_g0(0.0) == 0.0);
  CHECK(sim.pdf_g0(-0.1) == 0.0);
  CHECK(sim.pdf_g0(1.1) == 0.0);
  CHECK(sim.pdf_g1(-0.1) == 0.0);
  CHECK(sim.pdf_g1(1.1) == 0.0);
}

TEST_CASE("normalisation constants match closed forms") {
  const Simulator sim(SimulationSpec{});
  const double c0 = gamma4_cdf(11.0) / 11.0;
  const double c1 = (normal_cdf(4.5) - normal_cdf(-5.5)) / 10.0;
  CHECK(std::abs(sim.c0() - c0) / c0 <= 1e-6);
  CHECK(std::abs(sim.c1() - c1) / c1 <= 1e-6);
  CHECK(sim.c0() > 0.0);
  CHECK(sim.c1() > 0.0);
}

TEST_CASE("normalisation constants match an independent quadrature") {
  const SimulationSpec spec;
  const Simulator sim(spec);
  const auto g0 = [&](double x) { return raw_density_g0(x, spec); };
  const auto g1 = [&](double x) { return raw_density_g1(x, spec); };
  const double q0 = oracle::simpson(g0, 0.0, 1.0, 20000);
  const double q1 = oracle::simpson(g1, 0.0, 1.0, 20000);
  CHECK(std::abs(sim.c0() - q0) / q0 <= 1e-6);
  CHECK(std::abs(sim.c1() - q1) / q1 <= 1e-6);
}

TEST_CASE("both densities integrate to one") {
  const Simulator sim(SimulationSpec{});
  // 10,000-interval trapezoid.
  for (Group g : {Group::G0, Group::G1}) {
    const std::size_t n = 10000;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = static_cast<double>(i) / n, b = static_cast<double>(i + 1) / n;
      total += 0.5 * (sim.pdf(g, a) + sim.pdf(g, b)) / n;
    }
    CHECK(std::abs(total - 1.0) <= 1e-6);
  }
}

TEST_CASE("pdf_g1 peaks at the configured mode") {
  const Simulator sim(SimulationSpec{});
  double best_x = 0.0, best = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = i / 10000.0;
    if (sim.pdf_g1(x) > best) {
      best = sim.pdf_g1(x);
      best_x = x;
    }
  }
  CHECK(best_x == doctest::Approx(0.55).epsilon(1e-9));
}

TEST_CASE("pdf_g0 peaks at the gamma mode under x-scaling") {
  const Simulator sim(SimulationSpec{});
  double best_x = 0.0, best = -1.0;
  for (int i = 0; i <= 11000; ++i) {
    const double x = i / 11000.0;
    if (sim.pdf_g0(x) > best) {
      best = sim.pdf_g0(x);
      best_x = x;
    }
  }
  // Gamma(4, 1) mode at 3.
  CHECK(best_x == doctest::Approx(3.0 / 11.0).epsilon(1e-9));
}

TEST_CASE("tabulated CDF and quantile are mutually consistent") {
  const Simulator sim(SimulationSpec{});
  for (Group g : {Group::G0, Group::G1}) {
    CHECK(sim.cdf(g, 0.0) == 0.0);
    CHECK(sim.cdf(g, 1.0) == doctest::Approx(1.0));
    for (double u : {0.01, 0.1, 0.3, 0.5, 0.77, 0.99}) {
      CHECK(sim.cdf(g, sim.quantile(g, u)) == doctest::Approx(u).epsilon(1e-9));
    }
  }
}

TEST_CASE("sample layout, range and determinism") {
  SimulationSpec spec;
  spec.n_g0 = 300;
  spec.n_g1 = 200;
  spec.seed = 7;
  const auto a = sample(spec);
  const auto b = sample(spec);
  REQUIRE(a.size() == 500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].group == (i < 300 ? Group::G0 : Group::G1));
    CHECK(a[i].proba >= 0.0);
    CHECK(a[i].proba <= 1.0);
    REQUIRE(a[i].label.has_value());
    CHECK((*a[i].label == 0 || *a[i].label == 1));
    CHECK(a[i].proba == b[i].proba);
    CHECK(a[i].label == b[i].label);
  }
  spec.seed = 8;
  const auto c = sample(spec);
  CHECK(std::ranges::count_if(c, [&, i = std::size_t{0}](const ScoredRecord& r) mutable {
          return r.proba != a[i++].proba;
        }) > 400);
}

TEST_CASE("sample moments and goodness of fit at n = 10,000") {
  const SimulationSpec spec;
  const Simulator sim(spec);
  const auto records = sim.sample();
  const QuadratureCdf cdf0([&](double x) { return sim.pdf_g0(x); }, 40000);
  const QuadratureCdf cdf1([&](double x) { return sim.pdf_g1(x); }, 40000);

  const auto p0 = probas_in(records, Group::G0);
  const auto p1 = probas_in(records, Group::G1);
  REQUIRE(p0.size() == 10000);
  REQUIRE(p1.size() == 10000);

  const double m0 = oracle::simpson([&](double x) { return x * sim.pdf_g0(x); }, 0.0, 1.0, 20000);
  double mean0 = 0.0;
  for (double p : p0) mean0 += p / p0.size();
  CHECK(std::abs(mean0 - m0) <= 0.01);

  for (Group g : {Group::G0, Group::G1}) {
    double pm = 0.0, lm = 0.0, n = 0.0;
    for (const auto& r : records) {
      if (r.group != g) continue;
      pm += r.proba;
      lm += *r.label;
      n += 1.0;
    }
    CHECK(std::abs(pm / n - lm / n) <= 0.02);
  }

  CHECK(ks_distance(p0, cdf0) <= 0.02);
  CHECK(ks_distance(p1, cdf1) <= 0.02);
}

TEST_CASE("simulation errors") {
  SimulationSpec spec;
  spec.n_g0 = 0;
  try {
    sample(spec);
    FAIL("expected EmptyPopulation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyPopulation);
  }
  spec = {};
  spec.gamma_xscale = 0.0;
  CHECK_THROWS_AS(Simulator{spec}, Error);
  spec = {};
  spec.table_nodes = 2;
  CHECK_THROWS_AS(Simulator{spec}, Error);
}
