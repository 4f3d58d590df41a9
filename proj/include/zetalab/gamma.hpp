#pragma once

#include <array>
#include <complex>

#include "zetalab/core.hpp"

namespace zetalab {

namespace detail {

// log sin(pi z), stable for large |Im z|.
inline cplx log_sin_pi(cplx z) {
  const cplx i{0.0, 1.0};
  const cplx piz = kPi * z;
  if (z.imag() >= 0.0) {
    return -i * piz + std::log((std::exp(2.0 * i * piz) - 1.0) / (2.0 * i));
  }
  return i * piz + std::log((1.0 - std::exp(-2.0 * i * piz)) / (2.0 * i));
}

}  // namespace detail

/// log Gamma(z) by the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula for Re z < 1/2. Relative accuracy ~1e-15; the branch of
/// the imaginary part is not normalised.
inline cplx log_gamma(cplx z) {
  static constexpr std::array<double, 9> p = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    return std::log(kPi) - detail::log_sin_pi(z) - log_gamma(1.0 - z);
  }
  const cplx zm = z - 1.0;
  cplx acc = p[0];
  for (std::size_t i = 1; i < p.size(); ++i) acc += p[i] / (zm + static_cast<double>(i));
  const cplx t = zm + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(acc);
}

inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

}  // namespace zetalab
