#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "zetalab/core.hpp"

namespace zetalab {

/// Primes <= limit by the sieve of Eratosthenes.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

/// Smallest-prime-factor table for 0..limit (entries 0 and 1 are 0).
inline std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t limit) {
  std::vector<std::uint32_t> spf(static_cast<std::size_t>(limit) + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i] != 0) continue;
    for (std::uint64_t j = i; j <= limit; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  return spf;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % p == 0) return n == p;
  }
  for (std::uint64_t d = 17; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Prime factorization by trial division; returns prime -> exponent.
/// Desk-scale inputs only: the cost is O(sqrt(largest prime factor)).
inline std::map<std::uint64_t, int> factorize(std::uint64_t n) {
  std::map<std::uint64_t, int> out;
  if (n < 2) return out;
  static const std::vector<std::uint64_t> small = primes_up_to(1000);
  for (std::uint64_t p : small) {
    if (p > n / p) break;
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  for (std::uint64_t d = 1001; d <= n / d; d += 2) {
    while (n % d == 0) {
      ++out[d];
      n /= d;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

/// Exact p^e, failing on overflow of unsigned 64-bit.
inline std::uint64_t checked_pow(std::uint64_t p, int e) {
  unsigned __int128 acc = 1;
  for (int i = 0; i < e; ++i) {
    acc *= p;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      fail(ErrorKind::InvalidArgument, "integer overflow in prime power");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace zetalab
