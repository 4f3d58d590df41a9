#pragma once

// Euler-Maclaurin machinery shared by the Hurwitz-type evaluators.
//
//   zeta(s,a) = sum_{m<N} (m+a)^{-s} + x^{1-s}/(s-1) + x^{-s}/2
//             + sum_{j=1}^{J} B_{2j}/(2j)! (s)_{2j-1} x^{-s-2j+1} + R,   x = N + a,
//
//   |R| <= 4 |(s)_{2J}| / (2 pi)^{2J} * x^{-(sigma+2J-1)} / (sigma+2J-1)
//
// (Johansson 2015). The order J is fixed; the cut N is solved from the bound.
// Validity region: sigma > 1 - 2J.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "zetalab/core.hpp"

namespace zetalab::detail {

inline constexpr int kEmOrder = 48;

/// zeta(2j) for j = 0..kEmOrder (entry 0 unused).
inline const std::array<long double, kEmOrder + 1>& even_zeta_values() {
  static const std::array<long double, kEmOrder + 1> table = [] {
    std::array<long double, kEmOrder + 1> z{};
    z[1] = kPiL * kPiL / 6.0L;
    z[2] = kPiL * kPiL * kPiL * kPiL / 90.0L;
    for (int j = 3; j <= kEmOrder; ++j) {
      long double acc = 0.0L;
      for (int n = 4000; n >= 1; --n) acc += std::pow(static_cast<long double>(n), -2.0L * j);
      z[j] = acc;
    }
    return z;
  }();
  return table;
}

/// Ratio c_j / c_{j-1} with c_j = B_{2j}/(2j)! = (-1)^{j+1} 2 zeta(2j) / (2 pi)^{2j}.
inline double bernoulli_ratio(int j) {
  const auto& z = even_zeta_values();
  return static_cast<double>(-z[j] / (z[j - 1] * kTwoPiL * kTwoPiL));
}

struct VerticalBox {
  double sigma_lo;
  double sigma_hi;
  double t_abs_max;
};

/// log of the remainder bound at x, for every s in the box.
inline double em_log_remainder(const VerticalBox& box, double log_x) {
  const int two_j = 2 * kEmOrder;
  double log_poch = 0.0;
  for (int i = 0; i < two_j; ++i) {
    const double re = std::max(std::abs(box.sigma_lo + i), std::abs(box.sigma_hi + i));
    log_poch += 0.5 * std::log(re * re + box.t_abs_max * box.t_abs_max);
  }
  const double e = box.sigma_lo + two_j - 1;
  return std::log(4.0) + log_poch - two_j * std::log(2.0 * kPi) - e * log_x - std::log(e);
}

/// Smallest number of direct terms N such that the remainder is below tol
/// for every point of the box, with shift parameter a.
inline std::int64_t em_cut(const VerticalBox& box, double a, double tol) {
  const int two_j = 2 * kEmOrder;
  const double e = box.sigma_lo + two_j - 1;
  if (!(e > 0.0)) fail(ErrorKind::DomainError, "Euler-Maclaurin order too low for this real part");
  // Solve em_log_remainder(box, log_x) = log(tol) for log_x.
  const double at_one = em_log_remainder(box, 0.0);
  const double log_x = std::max(0.0, (at_one - std::log(tol)) / e);
  double x = std::exp(log_x);
  // Keep the asymptotic terms decreasing from the first one.
  const double s_abs = std::hypot(std::max(std::abs(box.sigma_lo), std::abs(box.sigma_hi)), box.t_abs_max);
  x = std::max(x, (s_abs + two_j) / (2.0 * kPi));
  const double n = std::ceil(x - a);
  return n < 1.0 ? 1 : static_cast<std::int64_t>(n);
}

/// x^{-s}/2 + sum_j B_{2j}/(2j)! (s)_{2j-1} x^{-s-2j+1}, given log x in
/// extended precision. The x^{1-s}/(s-1) term is left to the caller.
inline cplx em_correction(double sigma, long double t, long double log_x) {
  const cplx x_pow = pow_neg(log_x, sigma, t);  // x^{-s}
  const double x = std::exp(static_cast<double>(log_x));
  const double inv_x2 = 1.0 / (x * x);
  const cplx s{sigma, static_cast<double>(t)};
  cplx term = (1.0 / 12.0) * s * x_pow / x;  // j = 1
  cplx acc = 0.5 * x_pow + term;
  for (int j = 2; j <= kEmOrder; ++j) {
    term *= bernoulli_ratio(j) * (s + (2.0 * j - 3.0)) * (s + (2.0 * j - 2.0)) * inv_x2;
    acc += term;
  }
  return acc;
}

/// (x^{1-s} - 1)/(s - 1), finite at s = 1.
inline cplx em_integral_regular(double sigma, long double t, long double log_x) {
  const cplx s{sigma, static_cast<double>(t)};
  const cplx z = (1.0 - s) * static_cast<double>(log_x);
  if (std::abs(z) < 0.5) return -static_cast<double>(log_x) * exprel(z);
  const cplx x_pow = pow_neg(log_x, sigma - 1.0, t);  // x^{1-s}
  return (x_pow - 1.0) / (s - 1.0);
}

}  // namespace zetalab::detail
