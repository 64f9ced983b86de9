#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "madd/densities.hpp"
#include "madd/error.hpp"
#include "oracles.hpp"

using namespace madd;

namespace {

std::vector<double> to_vec(const DensityVector& d) { return {d.bins().begin(), d.bins().end()}; }

void check_close(const DensityVector& d, const std::vector<double>& expected, double tol = 1e-12) {
  REQUIRE(d.bin_count() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK(d[k] == doctest::Approx(expected[k]).epsilon(tol));
}

DensityVector dv(std::vector<double> bins, std::size_t n = 10) {
  return DensityVector::from_proportions(std::move(bins), n);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("build_density_vector counts half-open bins") {
  check_close(build_density_vector(std::vector{0.1, 0.2, 0.9}, 2), {2.0 / 3.0, 1.0 / 3.0});
  check_close(build_density_vector(std::vector{1.0}, 4), {0, 0, 0, 1});
}

TEST_CASE("edge values follow the brute-force bin assigner") {
  const std::vector<double> values{0.0, 0.25, 0.5, 0.75};
  const auto expected = oracle::brute_force_histogram(values, 4);
  CHECK(expected == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  check_close(build_density_vector(values, 4), expected);
}

TEST_CASE("bin assignment agrees with the oracle on random and edge-heavy input") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + gen() % 150;
    auto values = oracle::random_probas(gen, 1 + gen() % 60);
    // Exact edges k/m as doubles.
    for (int e = 0; e < 5; ++e) values.push_back(static_cast<double>(gen() % (m + 1)) / static_cast<double>(m));
    const auto d = build_density_vector(values, m);
    const auto expected = oracle::brute_force_histogram(values, m);
    for (std::size_t k = 0; k < m; ++k) REQUIRE(d[k] == doctest::Approx(expected[k]).epsilon(1e-14));
    CHECK(std::accumulate(expected.begin(), expected.end(), 0.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("build_density_vector errors") {
  CHECK(code_of([] { build_density_vector(std::vector<double>{}, 10); }) == ErrorCode::EmptyPopulation);
  CHECK(code_of([] { build_density_vector(std::vector{0.2, 1.5}, 10); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { build_density_vector(std::vector{-0.1}, 10); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { build_density_vector(std::vector{std::nan("")}, 10); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { build_density_vector(std::vector{0.5}, 1); }) == ErrorCode::InvalidBinCount);
}

TEST_CASE("from_proportions validates invariants") {
  CHECK(code_of([] { dv({0.5, 0.6}); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { dv({-0.5, 1.5}); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { dv({1.0}); }) == ErrorCode::InvalidBinCount);
  CHECK(code_of([] { dv({0.5, 0.5}, 0); }) == ErrorCode::InvalidProbability);
  CHECK(dv({0.0, 0.0}, 0).size() == 0);
}

TEST_CASE("pool_density_vectors weights by sample counts") {
  check_close(pool_density_vectors(dv({1, 0}, 10), dv({0, 1}, 10)), {0.5, 0.5});
  check_close(pool_density_vectors(dv({1, 0}, 30), dv({0, 1}, 10)), {0.75, 0.25});
  check_close(pool_density_vectors(dv({0.4, 0.6}, 3), dv({0.4, 0.6}, 17)), {0.4, 0.6});
  check_close(pool_density_vectors(dv({0.4, 0.6}, 5), dv({0.0, 0.0}, 0)), {0.4, 0.6});
  CHECK(pool_density_vectors(dv({1, 0}, 30), dv({0, 1}, 10)).size() == 40);

  CHECK(code_of([] { pool_density_vectors(dv({1, 0}), dv({1, 0, 0})); }) == ErrorCode::BinCountMismatch);
  CHECK(code_of([] { pool_density_vectors(dv({0, 0}, 0), dv({0, 0}, 0)); }) == ErrorCode::EmptyPopulation);
}

TEST_CASE("pooling equals the histogram of the concatenated samples") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + gen() % 120;
    const auto a = oracle::random_probas(gen, 1 + gen() % 500);
    const auto b = oracle::random_probas(gen, 1 + gen() % 500);
    auto both = a;
    both.insert(both.end(), b.begin(), b.end());
    const auto pooled = pool_density_vectors(build_density_vector(a, m), build_density_vector(b, m));
    const auto direct = build_density_vector(both, m);
    for (std::size_t k = 0; k < m; ++k) REQUIRE(std::abs(pooled[k] - direct[k]) <= 1e-12);
  }
}

TEST_CASE("madd examples") {
  CHECK(madd::madd(dv({0.3, 0.7}), dv({0.3, 0.7})) == 0.0);
  CHECK(madd::madd(dv({0.5, 0.5, 0, 0}), dv({0, 0, 0.5, 0.5})) == doctest::Approx(2.0));
  CHECK(madd::madd(dv({0.6, 0.4}), dv({0.4, 0.6})) == doctest::Approx(0.4));
  CHECK(code_of([] { madd::madd(dv({1, 0}), dv({1, 0, 0})); }) == ErrorCode::BinCountMismatch);
}

TEST_CASE("madd properties on random vectors") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 2 + gen() % 100;
    const auto a = dv(oracle::random_proportions(gen, m));
    const auto b = dv(oracle::random_proportions(gen, m));
    const auto pooled = pool_density_vectors(a, b);
    const double lambda = u(gen);
    const double value = madd::madd(a, b);
    REQUIRE(value == madd::madd(b, a));
    REQUIRE(value >= 0.0);
    REQUIRE(value <= 2.0 + 1e-12);
    REQUIRE(madd::madd(a, a) == 0.0);
    const double mixed = madd::madd(mix_density_vectors(a, pooled, lambda), mix_density_vectors(b, pooled, lambda));
    REQUIRE(std::abs(mixed - (1.0 - lambda) * value) <= 1e-12);
  }
}

TEST_CASE("madd is 2 exactly for disjoint supports") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 4 + gen() % 50;
    const std::size_t cut = 1 + gen() % (m - 1);
    auto a = oracle::random_proportions(gen, m);
    auto b = oracle::random_proportions(gen, m);
    std::fill(a.begin() + static_cast<long>(cut), a.end(), 0.0);
    std::fill(b.begin(), b.begin() + static_cast<long>(cut), 0.0);
    const double sa = std::accumulate(a.begin(), a.end(), 0.0);
    const double sb = std::accumulate(b.begin(), b.end(), 0.0);
    if (sa == 0.0 || sb == 0.0) continue;
    for (auto& x : a) x /= sa;
    for (auto& x : b) x /= sb;
    CHECK(madd::madd(dv(a), dv(b)) == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("kde_plot_curve") {
  SUBCASE("uniform histogram gives a nearly flat curve") {
    const auto d = dv(std::vector<double>(100, 0.01));
    const auto curve = kde_plot_curve(d, 0.1, 201);
    const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end(),
                                              [](auto& a, auto& b) { return a.density < b.density; });
    CHECK(hi->density - lo->density < 0.05);
    CHECK(curve.front().x == 0.0);
    CHECK(curve.back().x == 1.0);
  }
  SUBCASE("point mass peaks at its bin centre") {
    std::vector<double> bins(10, 0.0);
    bins[3] = 1.0;
    const auto curve = kde_plot_curve(dv(bins), 0.05, 1001);
    const auto peak = std::max_element(curve.begin(), curve.end(),
                                       [](auto& a, auto& b) { return a.density < b.density; });
    CHECK(peak->x == doctest::Approx(0.35).epsilon(1e-3));
    // Unimodal: rises to the peak, falls after it.
    for (auto it = curve.begin(); it + 1 <= peak; ++it) REQUIRE((it + 1)->density >= it->density);
    for (auto it = peak; it + 1 != curve.end(); ++it) REQUIRE((it + 1)->density <= it->density);
  }
  SUBCASE("mirrored histograms give mirrored curves") {
    const auto a = kde_plot_curve(dv({0.5, 0.5, 0, 0}), 0.05, 101);
    const auto b = kde_plot_curve(dv({0, 0, 0.5, 0.5}), 0.05, 101);
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(std::abs(a[i].density - b[a.size() - 1 - i].density) <= 1e-9);
    }
  }
  SUBCASE("errors") {
    CHECK(code_of([] { kde_plot_curve(dv({0.5, 0.5}), 0.0); }) == ErrorCode::InvalidBandwidth);
    CHECK(code_of([] { kde_plot_curve(dv({0.5, 0.5}), -1.0); }) == ErrorCode::InvalidBandwidth);
  }
}
