#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "zetalab/core.hpp"

namespace zetalab {

/// Pairwise summation with a fixed split, so the result depends only on the
/// order of the input.
template <class T>
T pairwise_sum(std::span<const T> xs) {
  if (xs.empty()) return T{};
  if (xs.size() <= 16) {
    T acc{};
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs));
}

template <class T>
T mean_of(const std::vector<T>& xs) {
  if (xs.empty()) fail(ErrorKind::InvalidArgument, "mean of an empty sample");
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

/// Standard error of the mean (sample standard deviation / sqrt(n)); works
/// for real and complex samples via |x - mean|^2.
template <class T>
double standard_error(const std::vector<T>& xs) {
  if (xs.size() < 2) return 0.0;
  const T m = mean_of(xs);
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = std::abs(xs[i] - m);
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) fail(ErrorKind::InvalidArgument, "KS statistic needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// One-sample KS statistic against the uniform law on [0, 1).
inline double ks_uniform(std::vector<double> u) {
  if (u.empty()) fail(ErrorKind::InvalidArgument, "KS statistic needs a non-empty sample");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = std::clamp(u[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - x, x - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace zetalab
