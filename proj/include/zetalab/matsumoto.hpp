#pragma once

// Polynomial Euler products
//   phi(s) = prod_m prod_{j<=g(m)} (1 - a_m^{(j)} p_m^{-(s+alpha0+beta0) f(j,m)})^{-1}
//          = sum_k c_k k^{-s},   c_k = c~_k k^{-(alpha0+beta0)}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zetalab/arithmetic_h.hpp"
#include "zetalab/core.hpp"
#include "zetalab/primes.hpp"
#include "zetalab/special_functions.hpp"

namespace zetalab {

struct LocalRoot {
  int f = 1;
  cplx a{1.0, 0.0};
};

/// Local roots for all primes p = residue (mod modulus) that are not stored
/// explicitly. Residues absent from the map get the trivial factor 1.
struct FactorRule {
  std::uint64_t modulus = 1;
  std::map<std::uint64_t, std::vector<LocalRoot>> by_residue;
};

struct SteudingMeta {
  double sigma_star = 0.5;
  double kappa = 1.0;
  double sigma_phi = 0.0;

  void validate() const {
    if (!(sigma_star >= 0.5 && sigma_star < 1.0)) fail(ErrorKind::InvalidArgument, "sigma_star must lie in [1/2, 1)");
    if (!(kappa > 0.0)) fail(ErrorKind::InvalidArgument, "kappa must be positive");
    if (!(sigma_phi < 1.0)) fail(ErrorKind::InvalidArgument, "sigma_phi must be < 1");
  }
};

/// Built-in instances that have a constructive continuation into the strip.
enum class Instance { Generic, Riemann, DirichletChi4 };

struct MatsumotoSpec {
  double alpha0 = 0.0;
  double beta0 = 0.0;
  double growth_constant = 1.0;  // C1 in g(m) <= C1 p_m^{alpha0}
  std::map<std::uint64_t, std::vector<LocalRoot>> local_factors;
  std::optional<FactorRule> default_rule;
  std::vector<cplx> declared_poles;
  double sigma0 = 0.75;
  std::optional<SteudingMeta> steuding;
  Instance instance = Instance::Generic;

  double shift() const { return alpha0 + beta0; }

  /// Roots at prime p: explicit entry first, then the residue rule.
  const std::vector<LocalRoot>& roots(std::uint64_t p) const {
    static const std::vector<LocalRoot> none;
    if (auto it = local_factors.find(p); it != local_factors.end()) return it->second;
    if (default_rule) {
      auto it = default_rule->by_residue.find(p % default_rule->modulus);
      if (it != default_rule->by_residue.end()) return it->second;
    }
    return none;
  }

  std::uint64_t largest_stored_prime() const { return local_factors.empty() ? 0 : local_factors.rbegin()->first; }

  void validate() const {
    if (!(alpha0 >= 0.0) || !(beta0 >= 0.0)) fail(ErrorKind::InvalidArgument, "alpha0 and beta0 must be >= 0");
    if (!(growth_constant > 0.0)) fail(ErrorKind::InvalidArgument, "growth constant must be positive");
    if (!(sigma0 >= 0.5 && sigma0 < 1.0)) fail(ErrorKind::InvalidArgument, "sigma0 must lie in [1/2, 1)");
    if (steuding) steuding->validate();
    auto check = [&](std::uint64_t p, const std::vector<LocalRoot>& rs) {
      const double pd = static_cast<double>(p);
      if (static_cast<double>(rs.size()) > growth_constant * std::pow(pd, alpha0) * (1.0 + 1e-12)) {
        fail(ErrorKind::InvalidArgument, "g(m) exceeds C1 p^alpha0 at p = " + std::to_string(p));
      }
      for (const LocalRoot& r : rs) {
        if (r.f < 1) fail(ErrorKind::InvalidArgument, "f(j,m) must be a positive integer");
        if (!is_finite(r.a)) fail(ErrorKind::InvalidArgument, "non-finite local root");
        if (std::abs(r.a) > std::pow(pd, beta0) * (1.0 + 1e-12)) {
          fail(ErrorKind::InvalidArgument, "|a| exceeds p^beta0 at p = " + std::to_string(p));
        }
      }
    };
    for (const auto& [p, rs] : local_factors) {
      if (!is_prime(p)) fail(ErrorKind::InvalidArgument, "local factor key " + std::to_string(p) + " is not prime");
      check(p, rs);
    }
    if (default_rule) {
      if (default_rule->modulus < 1) fail(ErrorKind::InvalidArgument, "rule modulus must be >= 1");
      // Both bounds are monotone in p, so the smallest prime of each class decides.
      for (const auto& [res, rs] : default_rule->by_residue) {
        if (res >= default_rule->modulus) fail(ErrorKind::InvalidArgument, "rule residue out of range");
        for (std::uint64_t p = res == 0 ? default_rule->modulus : res; p < 100000; p += default_rule->modulus) {
          if (is_prime(p) && !local_factors.contains(p)) {
            check(p, rs);
            break;
          }
        }
      }
    }
  }

  static MatsumotoSpec riemann() {
    MatsumotoSpec s;
    s.default_rule = FactorRule{1, {{0, {LocalRoot{1, {1.0, 0.0}}}}}};
    s.declared_poles = {cplx{1.0, 0.0}};
    s.steuding = SteudingMeta{0.5, 1.0, 0.0};
    s.instance = Instance::Riemann;
    return s;
  }

  /// L(s, chi_4), chi_4 the non-principal character mod 4.
  static MatsumotoSpec dirichlet_chi4() {
    MatsumotoSpec s;
    s.default_rule = FactorRule{4, {{1, {LocalRoot{1, {1.0, 0.0}}}}, {3, {LocalRoot{1, {-1.0, 0.0}}}}}};
    s.steuding = SteudingMeta{0.5, 1.0, 0.0};
    s.instance = Instance::DirichletChi4;
    return s;
  }
};

namespace detail {

/// Primes up to 2^22, shared read-only.
inline const std::vector<std::uint64_t>& prime_table() {
  static const std::vector<std::uint64_t> table = primes_up_to(std::uint64_t{1} << 22);
  return table;
}

inline std::vector<std::uint64_t> primes_through(std::uint64_t limit) {
  const auto& t = prime_table();
  if (limit <= t.back()) return {t.begin(), std::upper_bound(t.begin(), t.end(), limit)};
  return primes_up_to(limit);
}

/// Upper bound for sum_{p > P} p^{-s}, s > 1, from pi(x) < 1.25506 x / log x.
inline double prime_tail_sum(double s, double P) {
  return 1.25506 * s * std::pow(P, 1.0 - s) / ((s - 1.0) * std::log(P));
}

/// Bound on log of the product of all local majorant factors at primes > P:
///   sum_{p > P} sum_j -log(1 - |a_j| p^{-f s~}),  s~ = sigma + alpha0 + beta0.
inline double euler_tail_log_bound(const MatsumotoSpec& spec, double sigma, std::uint64_t P) {
  const double st = sigma + spec.shift();
  double out = 0.0;
  for (auto it = spec.local_factors.upper_bound(P); it != spec.local_factors.end(); ++it) {
    for (const LocalRoot& r : it->second) {
      out += -std::log1p(-std::abs(r.a) * std::pow(static_cast<double>(it->first), -r.f * st));
    }
  }
  if (spec.default_rule) {
    double g = 0.0;
    double amax = 0.0;
    for (const auto& [res, rs] : spec.default_rule->by_residue) {
      g = std::max(g, static_cast<double>(rs.size()));
      for (const LocalRoot& r : rs) amax = std::max(amax, std::abs(r.a));
    }
    if (g > 0.0 && amax > 0.0) {
      const double Pd = std::max(2.0, static_cast<double>(P));
      const double x_max = amax * std::pow(Pd, -st);
      if (x_max >= 1.0) return std::numeric_limits<double>::infinity();
      // -log(1-x) <= x / (1 - x_max), and f >= 1 only shrinks x.
      out += g * amax * prime_tail_sum(st, Pd) / (1.0 - x_max);
    }
  }
  return out;
}

/// Coefficients of prod_j (1 - a_j x^{f_j})^{-1} up to x^{e_max}.
inline std::vector<cplx> local_expansion(const std::vector<LocalRoot>& roots, int e_max) {
  std::vector<cplx> c(static_cast<std::size_t>(e_max) + 1, cplx{});
  c[0] = 1.0;
  for (const LocalRoot& r : roots) {
    // Multiply by the geometric series sum_i a^i x^{f i}.
    for (int e = r.f; e <= e_max; ++e) c[static_cast<std::size_t>(e)] += r.a * c[static_cast<std::size_t>(e - r.f)];
  }
  return c;
}

inline std::vector<double> abs_roots_expansion(const std::vector<LocalRoot>& roots, int e_max) {
  std::vector<double> c(static_cast<std::size_t>(e_max) + 1, 0.0);
  c[0] = 1.0;
  for (const LocalRoot& r : roots) {
    const double a = std::abs(r.a);
    for (int e = r.f; e <= e_max; ++e) c[static_cast<std::size_t>(e)] += a * c[static_cast<std::size_t>(e - r.f)];
  }
  return c;
}

}  // namespace detail

/// Dirichlet coefficients c_1..c_K of the shifted product (index 0 unused),
/// and optionally the coefficients of the majorant product with |a| in place of a.
inline std::vector<cplx> dirichlet_coefficients(const MatsumotoSpec& spec, std::uint32_t K,
                                                std::vector<double>* majorant = nullptr) {
  std::vector<cplx> c(static_cast<std::size_t>(K) + 1, cplx{});
  if (majorant) majorant->assign(static_cast<std::size_t>(K) + 1, 0.0);
  if (K == 0) return c;
  const auto spf = smallest_prime_factors(K);
  std::map<std::uint64_t, std::vector<cplx>> expansions;
  std::map<std::uint64_t, std::vector<double>> abs_expansions;
  c[1] = 1.0;
  if (majorant) (*majorant)[1] = 1.0;
  for (std::uint32_t k = 2; k <= K; ++k) {
    const std::uint64_t p = spf[k];
    std::uint32_t rest = k;
    int e = 0;
    while (rest % p == 0) {
      rest /= static_cast<std::uint32_t>(p);
      ++e;
    }
    auto it = expansions.find(p);
    if (it == expansions.end()) {
      int e_max = 0;
      for (std::uint64_t q = p; q <= K; q *= p) ++e_max;
      it = expansions.emplace(p, detail::local_expansion(spec.roots(p), e_max)).first;
      if (majorant) abs_expansions.emplace(p, detail::abs_roots_expansion(spec.roots(p), e_max));
    }
    c[k] = c[rest] * it->second[static_cast<std::size_t>(e)];
    if (majorant) (*majorant)[k] = (*majorant)[rest] * abs_expansions[p][static_cast<std::size_t>(e)];
  }
  const double shift = spec.shift();
  if (shift != 0.0) {
    for (std::uint32_t k = 2; k <= K; ++k) {
      const double scale = std::pow(static_cast<double>(k), -shift);
      c[k] *= scale;
      if (majorant) (*majorant)[k] *= scale;
    }
  }
  return c;
}

/// prod_j (1 - a_j p^{-(s+alpha0+beta0) f_j})^{-1} at a single prime.
inline cplx euler_factor(ComplexPoint s, const MatsumotoSpec& spec, std::uint64_t p) {
  const long double log_p = std::log(static_cast<long double>(p));
  cplx out{1.0, 0.0};
  for (const LocalRoot& r : spec.roots(p)) {
    const cplx x = r.a * pow_neg(log_p * r.f, s.sigma + spec.shift(), s.t);
    const cplx d = 1.0 - x;
    if (std::abs(d) < 1e-14) {
      fail(ErrorKind::SingularFactor, "local factor vanishes at p = " + std::to_string(p));
    }
    out /= d;
  }
  return out;
}

namespace detail {

inline Evaluation euler_product(ComplexPoint s, const MatsumotoSpec& spec, std::uint64_t cutoff,
                                const std::set<std::uint64_t>& excluded) {
  if (!(s.sigma > 1.0)) fail(ErrorKind::DomainError, "Euler product needs sigma > 1");
  if (cutoff < 2) fail(ErrorKind::InvalidArgument, "prime cutoff must be >= 2");
  cplx value{1.0, 0.0};
  std::size_t factors = 0;
  for (std::uint64_t p : primes_through(cutoff)) {
    if (excluded.contains(p)) continue;
    value *= euler_factor(s, spec, p);
    ++factors;
  }
  // Stored primes beyond the cutoff are covered by the tail bound.
  const double tail = euler_tail_log_bound(spec, s.sigma, cutoff);
  const double rel = std::expm1(tail);
  const double roundoff = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(factors + 1);
  return {value, std::abs(value) * (rel + roundoff)};
}

}  // namespace detail

/// Truncated Euler product over primes <= prime_cutoff with a bound on the
/// omitted factors from |a| <= p^{beta0}.
inline Evaluation matsumoto_product(ComplexPoint s, const MatsumotoSpec& spec, std::uint64_t prime_cutoff,
                                    const AccuracyBudget& acc = {}) {
  acc.validate();
  return detail::euler_product(s, spec, prime_cutoff, {});
}

/// phi_h: the product with the primes of P0 removed.
inline Evaluation partial_matsumoto(ComplexPoint s, const MatsumotoSpec& spec, const RationalShift& shift,
                                    std::uint64_t prime_cutoff, const AccuracyBudget& acc = {}) {
  acc.validate();
  return detail::euler_product(s, spec, prime_cutoff, shift.P0);
}

/// prod_{p in P0} of the local factors, so that phi = phi_h * this.
inline cplx removed_factors(ComplexPoint s, const MatsumotoSpec& spec, const RationalShift& shift) {
  cplx out{1.0, 0.0};
  for (std::uint64_t p : shift.P0) out *= euler_factor(s, spec, p);
  return out;
}

namespace detail {

/// Upper bound for the majorant sum sum_k |c_k| k^{-sigma} (full product).
inline double majorant_total(const MatsumotoSpec& spec, double sigma) {
  const double st = sigma + spec.shift();
  double log_total = 0.0;
  for (std::uint64_t p : prime_table()) {
    const double pd = static_cast<double>(p);
    for (const LocalRoot& r : spec.roots(p)) log_total += -std::log1p(-std::abs(r.a) * std::pow(pd, -r.f * st));
  }
  log_total += euler_tail_log_bound(spec, sigma, prime_table().back());
  return std::exp(log_total);
}

}  // namespace detail

/// Coefficients c_1..c_K with K large enough that the majorant tail
/// sum_{k>K} |c_k| k^{-sigma} is below abs_tol/2 (or abs_tol at the term cap).
/// Reusable for every point on the line Re s = sigma and for twisted sums.
struct SeriesPlan {
  double sigma = 2.0;
  std::vector<cplx> coeffs;  // index 0 unused
  double tail = 0.0;         // majorant tail plus roundoff
};

inline SeriesPlan plan_matsumoto_series(double sigma, const MatsumotoSpec& spec, const AccuracyBudget& acc = {}) {
  acc.validate();
  if (!(sigma > 1.0)) fail(ErrorKind::DomainError, "Dirichlet series needs sigma > 1");
  const double total = detail::majorant_total(spec, sigma);
  std::int64_t K = 1024;
  for (;;) {
    if (K > acc.max_terms || K > std::numeric_limits<std::uint32_t>::max() / 2) {
      fail(ErrorKind::BudgetExceeded, "Dirichlet series cannot meet abs_tol within max_terms");
    }
    std::vector<double> major;
    auto c = dirichlet_coefficients(spec, static_cast<std::uint32_t>(K), &major);
    double partial_major = 0.0;
    for (std::int64_t k = K; k >= 1; --k) {
      partial_major += major[static_cast<std::size_t>(k)] * std::pow(static_cast<double>(k), -sigma);
    }
    const double tail = std::max(0.0, total - partial_major);
    const double roundoff = 4.0 * std::numeric_limits<double>::epsilon() * total * std::log2(static_cast<double>(K));
    if (tail + roundoff <= 0.5 * acc.abs_tol || K * 2 > acc.max_terms) {
      if (tail + roundoff > acc.abs_tol) {
        fail(ErrorKind::BudgetExceeded, "Dirichlet series cannot meet abs_tol within max_terms");
      }
      return {sigma, std::move(c), tail + roundoff};
    }
    K *= 2;
  }
}

/// sum_{k<=K} c_k w_k k^{-(sigma + i t)}; w = nullptr means w_k = 1.
inline cplx evaluate_plan(const SeriesPlan& plan, long double t, const std::vector<cplx>* twist = nullptr) {
  cplx value{};
  for (std::size_t k = plan.coeffs.size() - 1; k >= 1; --k) {
    cplx ck = plan.coeffs[k];
    if (ck == cplx{}) continue;
    if (twist) ck *= (*twist)[k];
    value += ck * pow_neg(std::log(static_cast<long double>(k)), plan.sigma, t);
  }
  return value;
}

/// Dirichlet series sum c_k k^{-s} for sigma > 1, truncated where the
/// majorant tail meets the budget.
inline Evaluation matsumoto_series(ComplexPoint s, const MatsumotoSpec& spec, const AccuracyBudget& acc = {}) {
  const SeriesPlan plan = plan_matsumoto_series(s.sigma, spec, acc);
  return {evaluate_plan(plan, s.t), plan.tail};
}

struct SmoothingParam {
  std::int64_t n = 1000;
  double sigma_star1 = 1.0;

  SmoothingParam() = default;
  SmoothingParam(std::int64_t n_, double c) : n(n_), sigma_star1(c) { validate(); }
  void validate() const {
    if (n < 1) fail(ErrorKind::InvalidArgument, "smoothing n must be positive");
    if (!(sigma_star1 > 0.5)) fail(ErrorKind::InvalidArgument, "sigma*_1 must exceed 1/2");
  }
};

/// v1(m, n) = exp(-(m/n)^{sigma*_1}).
inline double v1(double m, double n, double c) { return std::exp(-std::pow(m / n, c)); }
/// v2(m, n, alpha) = exp(-((m+alpha)/(n+alpha))^{sigma*_1}).
inline double v2(double m, double n, double alpha, double c) { return std::exp(-std::pow((m + alpha) / (n + alpha), c)); }

namespace detail {

/// Upper bound for sum_{x = x0, x0+1, ...} exp(-(x/X)^c):
///   exp(-(x0/X)^c) + (X/c) Gamma(1/c, (x0/X)^c).
inline double stretched_exp_tail(double x0, double X, double c) {
  const double u = std::pow(x0 / X, c);
  const double a = 1.0 / c;
  double upper_gamma;
  if (a <= 1.0) {
    upper_gamma = std::pow(u, a - 1.0) * std::exp(-u);
  } else if (u > 2.0 * (a - 1.0)) {
    upper_gamma = std::pow(u, a - 1.0) * std::exp(-u) / (1.0 - (a - 1.0) / u);
  } else {
    upper_gamma = std::tgamma(a);
  }
  return std::exp(-u) + X / c * upper_gamma;
}

}  // namespace detail

/// phi_n(s) = sum c_k v1(k, n) k^{-s}, sigma > 1/2. The tail assumes
/// |c_k| <= B k^{1/4} with B the maximum of |c_k| k^{-1/4} over the computed
/// range; this holds for every instance with c~_k = O(k^{alpha0+beta0+1/4}).
inline Evaluation smoothed_phi_n(ComplexPoint s, const MatsumotoSpec& spec, const SmoothingParam& smooth,
                                 const AccuracyBudget& acc = {}) {
  acc.validate();
  smooth.validate();
  if (!(s.sigma > 0.5)) fail(ErrorKind::DomainError, "smoothed series needs sigma > 1/2");
  const double n = static_cast<double>(smooth.n);
  const double c = smooth.sigma_star1;
  const double beta = 0.25 - s.sigma;
  std::int64_t K = std::max<std::int64_t>(smooth.n, 16);
  std::vector<cplx> coeffs;
  double tail = 0.0;
  for (;;) {
    if (K > acc.max_terms) fail(ErrorKind::BudgetExceeded, "smoothed series cannot meet abs_tol within max_terms");
    coeffs = dirichlet_coefficients(spec, static_cast<std::uint32_t>(K));
    double B = 0.0;
    for (std::int64_t k = 1; k <= K; ++k) {
      B = std::max(B, std::abs(coeffs[static_cast<std::size_t>(k)]) * std::pow(static_cast<double>(k), -0.25));
    }
    const double Kd = static_cast<double>(K + 1);
    tail = B * std::pow(Kd, beta) * detail::stretched_exp_tail(Kd, n, c);
    if (tail <= 0.5 * acc.abs_tol) break;
    K *= 2;
  }
  cplx value{};
  double abs_sum = 0.0;
  for (std::int64_t k = static_cast<std::int64_t>(coeffs.size()) - 1; k >= 1; --k) {
    const cplx ck = coeffs[static_cast<std::size_t>(k)];
    if (ck == cplx{}) continue;
    const double w = v1(static_cast<double>(k), n, c);
    if (w == 0.0) continue;
    const cplx term = ck * w * pow_neg(std::log(static_cast<long double>(k)), s.sigma, s.t);
    value += term;
    abs_sum += std::abs(term);
  }
  const double roundoff = 4.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::log2(static_cast<double>(K));
  return {value, tail + roundoff};
}

/// zeta_n(s, alpha; B) = sum b_m v2(m, n, alpha) (m+alpha)^{-s}, sigma > 1/2.
inline Evaluation smoothed_periodic_zeta_n(ComplexPoint s, HurwitzParam alpha, const PeriodicSequence& b,
                                           const SmoothingParam& smooth, const AccuracyBudget& acc = {}) {
  acc.validate();
  smooth.validate();
  if (!(s.sigma > 0.5)) fail(ErrorKind::DomainError, "smoothed series needs sigma > 1/2");
  if (b.all_zero()) return {};
  const double X = static_cast<double>(smooth.n) + alpha.alpha;
  const double c = smooth.sigma_star1;
  const double bmax = b.max_abs();
  std::int64_t M = std::max<std::int64_t>(smooth.n, 16);
  auto tail = [&](std::int64_t m) {
    const double x0 = static_cast<double>(m) + alpha.alpha;
    return bmax * std::pow(x0, -s.sigma) * detail::stretched_exp_tail(x0, X, c);
  };
  while (tail(M) > 0.5 * acc.abs_tol) {
    M *= 2;
    if (M > acc.max_terms) fail(ErrorKind::BudgetExceeded, "smoothed series cannot meet abs_tol within max_terms");
  }
  cplx value{};
  double abs_sum = 0.0;
  for (std::int64_t m = M - 1; m >= 0; --m) {
    const cplx bm = b[static_cast<std::uint64_t>(m)];
    if (bm == cplx{}) continue;
    const double x = static_cast<double>(m) + alpha.alpha;
    const double w = std::exp(-std::pow(x / X, c));
    if (w == 0.0) continue;
    const cplx term = bm * w * pow_neg(std::log(static_cast<long double>(m) + alpha.alpha), s.sigma, s.t);
    value += term;
    abs_sum += std::abs(term);
  }
  const double roundoff = 4.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::log2(static_cast<double>(M));
  return {value, tail(M) + roundoff};
}

}  // namespace zetalab
