#pragma once

// Rational shifts h with exp(2 pi / h) = a/b, torus character indices and
// the empirical Fourier transform g_Nh along the discrete orbit.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "zetalab/core.hpp"
#include "zetalab/primes.hpp"

namespace zetalab {

struct RationalShift {
  std::uint64_t a = 2;
  std::uint64_t b = 1;
  long double log_ratio = 0.0L;  // log(a/b)
  long double h = 0.0L;          // 2 pi / log(a/b)
  std::map<std::uint64_t, int> alpha;  // p -> alpha_p, positive on P1, negative on P2
  std::set<std::uint64_t> P1;
  std::set<std::uint64_t> P2;
  std::set<std::uint64_t> P0;

  double h_double() const { return static_cast<double>(h); }
  int alpha_of(std::uint64_t p) const {
    auto it = alpha.find(p);
    return it == alpha.end() ? 0 : it->second;
  }
};

inline RationalShift shift_from_rational(std::uint64_t a, std::uint64_t b) {
  if (b < 1 || a <= b) fail(ErrorKind::NotGreater, "shift needs a > b >= 1");
  if (std::gcd(a, b) != 1) fail(ErrorKind::NotCoprime, "a and b must be coprime");
  RationalShift out;
  out.a = a;
  out.b = b;
  out.log_ratio = std::log1p(static_cast<long double>(a - b) / static_cast<long double>(b));
  out.h = kTwoPiL / out.log_ratio;
  for (auto [p, e] : factorize(a)) {
    out.alpha[p] = e;
    out.P1.insert(p);
    out.P0.insert(p);
  }
  for (auto [p, e] : factorize(b)) {
    out.alpha[p] = -e;
    out.P2.insert(p);
    out.P0.insert(p);
  }
  return out;
}

/// Rebuild (a, b) from the exponent map in exact integer arithmetic.
inline std::pair<std::uint64_t, std::uint64_t> reconstruct(const RationalShift& shift) {
  std::uint64_t a = 1;
  std::uint64_t b = 1;
  for (auto [p, e] : shift.alpha) {
    const std::uint64_t q = checked_pow(p, std::abs(e));
    if (e > 0) {
      a *= q;
    } else {
      b *= q;
    }
  }
  return {a, b};
}

/// Finitely supported character data (k_p), (l_m), l.
/// The index set {m : p_m in P0} of the source is called M0 here; l_m below
/// is indexed by non-negative integers m and refers to the Hurwitz coordinates.
struct CharacterIndex {
  std::map<std::uint64_t, std::int64_t> k;
  std::map<std::uint64_t, std::int64_t> l_m;
  std::int64_t l = 0;

  void validate() const {
    for (const auto& [p, v] : k) {
      if (!is_prime(p)) fail(ErrorKind::InvalidArgument, "k index key " + std::to_string(p) + " is not prime");
    }
  }
};

/// (K-3): k_p = 0 off P0, l_m = 0 for all m, and k_p = r alpha_p on P0 for a single r.
inline std::pair<bool, std::optional<std::int64_t>> k3_satisfied(const CharacterIndex& idx,
                                                                  const RationalShift& shift) {
  for (const auto& [m, v] : idx.l_m) {
    if (v != 0) return {false, std::nullopt};
  }
  for (const auto& [p, v] : idx.k) {
    if (v != 0 && !shift.P0.contains(p)) return {false, std::nullopt};
  }
  std::optional<std::int64_t> r;
  for (std::uint64_t p : shift.P0) {
    auto it = idx.k.find(p);
    const std::int64_t kp = it == idx.k.end() ? 0 : it->second;
    const std::int64_t ap = shift.alpha_of(p);
    if (kp % ap != 0) return {false, std::nullopt};
    const std::int64_t q = kp / ap;
    if (r && *r != q) return {false, std::nullopt};
    r = q;
  }
  return {true, r.value_or(0)};
}

/// X = sum_{p not in P0} k_p log p + sum_{p in P0} (k_p + l alpha_p) log p + sum_m l_m log(m + alpha).
inline long double phase_X(const CharacterIndex& idx, const RationalShift& shift, double alpha) {
  long double x = 0.0L;
  std::set<std::uint64_t> primes(shift.P0.begin(), shift.P0.end());
  for (const auto& [p, v] : idx.k) primes.insert(p);
  for (std::uint64_t p : primes) {
    auto it = idx.k.find(p);
    std::int64_t coef = it == idx.k.end() ? 0 : it->second;
    coef += idx.l * shift.alpha_of(p);
    if (coef != 0) x += static_cast<long double>(coef) * std::log(static_cast<long double>(p));
  }
  for (const auto& [m, v] : idx.l_m) {
    if (v != 0) x += static_cast<long double>(v) * std::log(static_cast<long double>(m) + alpha);
  }
  return x;
}

namespace detail {

/// h X reduced to (-pi, pi].
inline long double orbit_angle(const CharacterIndex& idx, const RationalShift& shift, double alpha) {
  return reduce_angle(shift.h * phase_X(idx, shift, alpha));
}

}  // namespace detail

/// |1 - exp(-i h X)|.
inline double resonance_gap(const CharacterIndex& idx, const RationalShift& shift, double alpha) {
  const long double theta = detail::orbit_angle(idx, shift, alpha);
  return static_cast<double>(2.0L * std::abs(std::sin(theta / 2.0L)));
}

/// g_Nh = (1/(N+1)) sum_{k=0}^N exp(-i k h X).
inline cplx fourier_g(std::int64_t N, const CharacterIndex& idx, const RationalShift& shift, double alpha) {
  if (N < 0) fail(ErrorKind::InvalidArgument, "N must be >= 0");
  const long double theta = detail::orbit_angle(idx, shift, alpha);
  const double gap = static_cast<double>(2.0L * std::abs(std::sin(theta / 2.0L)));
  const double count = static_cast<double>(N + 1);
  if (gap > 1e-8) {
    const cplx num = 1.0 - unit_phase_neg(static_cast<long double>(N + 1) * theta);
    const cplx den = 1.0 - unit_phase_neg(theta);
    return num / (count * den);
  }
  // Near resonance: Kahan-compensated direct sum.
  cplx sum{};
  cplx comp{};
  for (std::int64_t k = 0; k <= N; ++k) {
    const cplx y = unit_phase_neg(static_cast<long double>(k) * theta) - comp;
    const cplx t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / count;
}

/// 2 / ((N+1) |1 - exp(-i h X)|); infinite at resonance.
inline double fourier_g_bound(std::int64_t N, const CharacterIndex& idx, const RationalShift& shift, double alpha) {
  const double gap = resonance_gap(idx, shift, alpha);
  if (gap == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 / (static_cast<double>(N + 1) * gap);
}

/// Numeric witness that exp(-i h X) != 1 for an index violating (K-3).
inline bool claim2_certificate(const CharacterIndex& idx, const RationalShift& shift, double alpha) {
  if (k3_satisfied(idx, shift).first) {
    fail(ErrorKind::PreconditionViolated, "index satisfies (K-3); Claim 2 does not apply");
  }
  return resonance_gap(idx, shift, alpha) > 1e-9;
}

struct FourierRow {
  std::int64_t N;
  cplx value;
  double bound;
};

inline std::vector<FourierRow> fourier_rows(const std::vector<std::int64_t>& Ns, const CharacterIndex& idx,
                                            const RationalShift& shift, double alpha) {
  std::vector<FourierRow> rows;
  rows.reserve(Ns.size());
  for (std::int64_t n : Ns) rows.push_back({n, fourier_g(n, idx, shift, alpha), fourier_g_bound(n, idx, shift, alpha)});
  return rows;
}

}  // namespace zetalab
