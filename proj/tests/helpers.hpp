#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "pgsa/measures.hpp"
#include "pgsa/rng.hpp"

namespace testutil {

/// Kolmogorov-Smirnov statistic of a sample against a CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = cdf(sample[k]);
    d = std::max(d, std::abs(f - (k + 1) / n));
    d = std::max(d, std::abs(f - k / n));
  }
  return d;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

/// Smooth random centered test function: a low-order trigonometric mix.
struct SmoothTestFunction {
  double a0, a1, a2, b1, lo, len;
  double operator()(double x) const {
    const double t = (x - lo) / len;
    return a0 * t + a1 * std::sin(M_PI * t) + a2 * std::cos(2 * M_PI * t) +
           b1 * t * t;
  }
  double derivative(double x) const {
    const double t = (x - lo) / len;
    return (a0 + a1 * M_PI * std::cos(M_PI * t) -
            a2 * 2 * M_PI * std::sin(2 * M_PI * t) + 2 * b1 * t) /
           len;
  }
};

inline SmoothTestFunction random_smooth(pgsa::RandomStream& rng, const pgsa::Interval& s) {
  auto u = [&rng] { return 2.0 * rng.uniform01() - 1.0; };
  return SmoothTestFunction{u(), u(), u(), u(), s.a, s.length()};
}

}  // namespace testutil
