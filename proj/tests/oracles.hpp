#pragma once

// Test-only reference computations. Nothing here calls into the library's
// binning, CDF or inverse code, so the tests that compare against these
// check the implementation by an independent route.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Histogram by scanning the intervals [k/m, (k+1)/m) one by one; the last
// interval is closed.
inline std::vector<double> brute_force_histogram(const std::vector<double>& values, std::size_t m) {
  std::vector<double> counts(m, 0.0);
  for (double v : values) {
    for (std::size_t k = 0; k < m; ++k) {
      const double lo = static_cast<double>(k) / static_cast<double>(m);
      const double hi = static_cast<double>(k + 1) / static_cast<double>(m);
      const bool last = k + 1 == m;
      if (v >= lo && (v < hi || (last && v <= hi))) {
        counts[k] += 1.0;
        break;
      }
    }
  }
  for (double& c : counts) c /= static_cast<double>(values.size());
  return counts;
}

// Exact-mass CDF evaluated by summing whole bins plus the fraction of the
// current one.
inline double exact_mass_cdf(const std::vector<double>& bins, double x) {
  const std::size_t m = bins.size();
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double lo = static_cast<double>(k) / static_cast<double>(m);
    const double hi = static_cast<double>(k + 1) / static_cast<double>(m);
    if (x >= hi) {
      total += bins[k];
    } else {
      total += bins[k] * (x - lo) / (hi - lo);
      break;
    }
  }
  return total;
}

// inf{x : F(x) >= u} for a continuous non-decreasing F on [0,1], by
// bisection.
inline double bisect_inverse(const std::function<double(double)>& cdf, double u) {
  if (u <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  if (cdf(lo) >= u) return 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) >= u ? hi : lo) = mid;
  }
  return hi;
}

// Composite Simpson's rule with `intervals` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals) {
  const double h = (b - a) / static_cast<double>(intervals);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  return s * h / 3.0;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Random proportions over m bins, some of them zero.
inline std::vector<double> random_proportions(std::mt19937_64& gen, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(m);
  double total = 0.0;
  for (auto& x : v) {
    x = u(gen) < 0.3 ? 0.0 : u(gen);
    total += x;
  }
  if (total == 0.0) {
    v[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : v) x /= total;
  return v;
}

// Samples in [0,1] from a randomly skewed power law, occasionally rounded to
// two decimals so bin edges get hit.
inline std::vector<double> random_probas(std::mt19937_64& gen, std::size_t n, bool allow_rounding = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double power = 0.3 + 3.0 * u(gen);
  const bool rounded = allow_rounding && u(gen) < 0.3;
  std::vector<double> v(n);
  for (auto& x : v) {
    x = std::pow(u(gen), power);
    if (rounded) x = std::round(x * 100.0) / 100.0;
  }
  return v;
}

}  // namespace oracle
