#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "zetalab/core.hpp"
#include "zetalab/euler_maclaurin.hpp"
#include "zetalab/gamma.hpp"

namespace zetalab {

/// Hurwitz shift parameter. The transcendence flag is the caller's assertion;
/// nothing in the library can check it, and all computations treat alpha as
/// the double it is stored as.
struct HurwitzParam {
  double alpha = 1.0;
  bool transcendental_flag = false;

  HurwitzParam() = default;
  explicit HurwitzParam(double a, bool transcendental = false) : alpha(a), transcendental_flag(transcendental) {
    if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0, 1]");
  }
};

/// Periodic coefficients b_0..b_{k-1}; the period must be minimal.
class PeriodicSequence {
 public:
  explicit PeriodicSequence(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) fail(ErrorKind::InvalidArgument, "periodic sequence needs at least one coefficient");
    for (const cplx& b : coeffs_) {
      if (!is_finite(b)) fail(ErrorKind::InvalidArgument, "non-finite coefficient");
    }
    const std::size_t k = coeffs_.size();
    for (std::size_t d = 1; d < k; ++d) {
      if (k % d != 0) continue;
      bool periodic = true;
      for (std::size_t m = d; m < k && periodic; ++m) periodic = coeffs_[m] == coeffs_[m - d];
      if (periodic) {
        fail(ErrorKind::InvalidArgument,
             "period " + std::to_string(k) + " is not minimal (divisor " + std::to_string(d) + " works)");
      }
    }
  }

  std::size_t period() const { return coeffs_.size(); }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx operator[](std::uint64_t m) const { return coeffs_[m % coeffs_.size()]; }

  cplx sum() const { return std::accumulate(coeffs_.begin(), coeffs_.end(), cplx{}); }
  double max_abs() const {
    double out = 0.0;
    for (const cplx& b : coeffs_) out = std::max(out, std::abs(b));
    return out;
  }
  bool all_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx b) { return b == cplx{}; });
  }
  /// Residue of zeta(s, alpha; B) at s = 1.
  cplx residue() const { return sum() / static_cast<double>(period()); }

 private:
  std::vector<cplx> coeffs_;
};

namespace detail {

/// k^{-s} sum_l b_l zeta(s, (l+alpha)/k), each Hurwitz term by Euler-Maclaurin.
/// Evaluates at sigma + i t with t in extended precision.
inline Evaluation hurwitz_combination(double sigma, long double t, double alpha, const PeriodicSequence& b,
                                      const AccuracyBudget& acc) {
  acc.validate();
  const std::size_t k = b.period();
  const double kd = static_cast<double>(k);
  const cplx s{sigma, static_cast<double>(t)};
  const bool at_one = sigma == 1.0 && t == 0.0L;
  if (at_one && b.sum() != cplx{}) fail(ErrorKind::PoleAt1, "zeta(s, alpha; B) has a pole at s = 1");
  if (b.all_zero()) return {};

  const double weight = std::pow(kd, -sigma) * [&] {
    double w = 0.0;
    for (const cplx& c : b.coeffs()) w += std::abs(c);
    return w;
  }();
  const double em_tol = 0.5 * acc.abs_tol / weight;
  const VerticalBox box{sigma, sigma, std::abs(static_cast<double>(t))};

  std::int64_t n_terms = 0;
  for (std::size_t l = 0; l < k; ++l) {
    n_terms = std::max(n_terms, em_cut(box, (static_cast<double>(l) + alpha) / kd, em_tol));
  }
  if (n_terms * static_cast<std::int64_t>(k) > acc.max_terms) {
    fail(ErrorKind::BudgetExceeded,
         "Euler-Maclaurin needs " + std::to_string(n_terms * static_cast<std::int64_t>(k)) + " terms");
  }

  const long double log_k = std::log(static_cast<long double>(k));
  const cplx k_pow = pow_neg(log_k, sigma, t);  // k^{-s}
  cplx total{};
  double abs_sum = 0.0;
  cplx regular{};
  for (std::size_t l = 0; l < k; ++l) {
    if (b.coeffs()[l] == cplx{}) continue;
    const long double a = (static_cast<long double>(l) + alpha) / static_cast<long double>(k);
    cplx partial{};
    for (std::int64_t m = 0; m < n_terms; ++m) {
      const long double log_term = std::log(static_cast<long double>(m) + a);
      const cplx term = pow_neg(log_term, sigma, t);
      partial += term;
      abs_sum += std::abs(b.coeffs()[l]) * std::abs(term);
    }
    const long double log_x = std::log(static_cast<long double>(n_terms) + a);
    partial += em_correction(sigma, t, log_x);
    regular += b.coeffs()[l] * em_integral_regular(sigma, t, log_x);
    total += b.coeffs()[l] * partial;
  }
  if (!at_one) {
    const cplx bsum = b.sum();
    if (bsum != cplx{}) regular += bsum / (s - 1.0);
  }
  total = k_pow * (total + regular);

  const double roundoff = 8.0 * std::numeric_limits<double>::epsilon() *
                          (static_cast<double>(n_terms) + kEmOrder) * std::max(1.0, abs_sum + std::abs(total));
  return {total, 0.5 * acc.abs_tol + roundoff};
}

}  // namespace detail

/// Hurwitz zeta(s, alpha), continued to C \ {1} by Euler-Maclaurin.
inline Evaluation hurwitz_zeta(ComplexPoint s, HurwitzParam alpha, const AccuracyBudget& acc = {}) {
  return detail::hurwitz_combination(s.sigma, s.t, alpha.alpha, PeriodicSequence({cplx{1.0, 0.0}}), acc);
}

/// zeta(s, alpha; B) through the linear combination
///   k^{-s} sum_{l<k} b_l zeta(s, (l+alpha)/k),
/// valid on C \ {1}; finite at s = 1 when sum b_l = 0.
inline Evaluation periodic_hurwitz_zeta(ComplexPoint s, HurwitzParam alpha, const PeriodicSequence& b,
                                        const AccuracyBudget& acc = {}) {
  return detail::hurwitz_combination(s.sigma, s.t, alpha.alpha, b, acc);
}

/// Plain summation of sum_m b_m (m+alpha)^{-s} for sigma > 1, with the tail
/// bounded by max|b| * integral comparison.
inline Evaluation periodic_hurwitz_zeta_direct(ComplexPoint s, HurwitzParam alpha, const PeriodicSequence& b,
                                               const AccuracyBudget& acc = {}) {
  acc.validate();
  if (!(s.sigma > 1.0)) fail(ErrorKind::DomainError, "direct series needs sigma > 1");
  if (b.all_zero()) return {};
  const double bmax = b.max_abs();
  // Tail after M terms: bmax * ((M+alpha)^{-sigma} + (M+alpha)^{1-sigma}/(sigma-1)).
  auto tail = [&](double m) {
    const double x = m + alpha.alpha;
    return bmax * (std::pow(x, -s.sigma) + std::pow(x, 1.0 - s.sigma) / (s.sigma - 1.0));
  };
  const double target = 0.5 * acc.abs_tol;
  double m_needed = std::pow(bmax / (target * (s.sigma - 1.0)), 1.0 / (s.sigma - 1.0));
  if (!(m_needed < static_cast<double>(acc.max_terms)) || !std::isfinite(m_needed)) {
    fail(ErrorKind::BudgetExceeded, "direct series cannot meet abs_tol within max_terms");
  }
  auto m_end = static_cast<std::int64_t>(std::ceil(m_needed));
  while (m_end > 1 && tail(static_cast<double>(m_end) / 2.0) <= target) m_end /= 2;
  while (tail(static_cast<double>(m_end)) > target) {
    m_end = m_end * 2;
    if (m_end > acc.max_terms) fail(ErrorKind::BudgetExceeded, "direct series cannot meet abs_tol within max_terms");
  }
  // Sum smallest terms first.
  cplx total{};
  double abs_sum = 0.0;
  for (std::int64_t m = m_end - 1; m >= 0; --m) {
    const cplx bm = b[static_cast<std::uint64_t>(m)];
    if (bm == cplx{}) continue;
    const cplx term = bm * pow_neg(std::log(static_cast<long double>(m) + alpha.alpha), s.sigma, s.t);
    total += term;
    abs_sum += std::abs(term);
  }
  const double roundoff = 4.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::log2(static_cast<double>(m_end) + 2.0);
  return {total, tail(static_cast<double>(m_end)) + roundoff};
}

/// sum_m b_m (m+alpha)^{-s} summed term by term over the first `periods` full
/// periods; the rest of each residue class l is
///   k^{-s} sum_{j >= J} (j + (l+alpha)/k)^{-s},
/// a Hurwitz tail at the large parameter J + (l+alpha)/k. This takes a
/// different route from the combination formula (no rescaling of the whole
/// series, a different Euler-Maclaurin cut), so the two cross-check each other.
inline Evaluation periodic_hurwitz_zeta_series(ComplexPoint s, HurwitzParam alpha, const PeriodicSequence& b,
                                               std::int64_t periods = 4096, const AccuracyBudget& acc = {}) {
  acc.validate();
  if (periods < 1) fail(ErrorKind::InvalidArgument, "periods must be positive");
  if (s.sigma == 1.0 && s.t == 0.0 && b.sum() != cplx{}) fail(ErrorKind::PoleAt1, "pole at s = 1");
  const std::size_t k = b.period();
  const std::int64_t M = periods * static_cast<std::int64_t>(k);
  cplx head{};
  double abs_sum = 0.0;
  for (std::int64_t m = M - 1; m >= 0; --m) {
    const cplx bm = b[static_cast<std::uint64_t>(m)];
    if (bm == cplx{}) continue;
    const cplx term = bm * pow_neg(std::log(static_cast<long double>(m) + alpha.alpha), s.sigma, s.t);
    head += term;
    abs_sum += std::abs(term);
  }
  const cplx k_pow = pow_neg(std::log(static_cast<long double>(k)), s.sigma, s.t);
  AccuracyBudget tail_acc = acc;
  tail_acc.abs_tol = 0.5 * acc.abs_tol / (b.max_abs() * static_cast<double>(k) * std::max(1.0, std::abs(k_pow)));
  cplx tail{};
  double err = 0.0;
  for (std::size_t l = 0; l < k; ++l) {
    if (b.coeffs()[l] == cplx{}) continue;
    const double a = static_cast<double>(periods) + (static_cast<double>(l) + alpha.alpha) / static_cast<double>(k);
    const Evaluation e = detail::hurwitz_combination(s.sigma, s.t, a, PeriodicSequence({cplx{1.0, 0.0}}), tail_acc);
    tail += b.coeffs()[l] * e.value;
    err += std::abs(b.coeffs()[l]) * e.abs_err_bound;
  }
  const double roundoff = 4.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::log2(static_cast<double>(M) + 2.0);
  return {head + k_pow * tail, err * std::abs(k_pow) + roundoff};
}

/// Riemann zeta(s) for sigma > 0 by Borwein's alternating-series acceleration
/// of the eta function:
///   zeta(s) = -1/(d_n (1 - 2^{1-s})) sum_{k<n} (-1)^k (d_k - d_n)/(k+1)^s,
/// with |error| <= 2 / ((3+sqrt 8)^n |Gamma(s)| |1 - 2^{1-s}|).
inline Evaluation riemann_zeta_strip(ComplexPoint s, const AccuracyBudget& acc = {}) {
  acc.validate();
  if (s.sigma == 1.0 && s.t == 0.0) fail(ErrorKind::PoleAt1, "zeta(s) has a pole at s = 1");
  if (!(s.sigma > 0.0)) fail(ErrorKind::DomainError, "strip evaluator needs sigma > 0");
  const cplx sv = s.value();
  const cplx two_pow = std::exp((1.0 - sv) * std::log(2.0));  // 2^{1-s}
  const double denom = std::abs(1.0 - two_pow);
  if (denom == 0.0) fail(ErrorKind::DomainError, "1 - 2^{1-s} vanishes");
  const double log_gamma_abs = log_gamma(sv).real();
  const double log_base = std::log(3.0 + std::sqrt(8.0));
  // 2 / (base^n |Gamma| denom) <= tol/2.
  const double need = (std::log(4.0 / acc.abs_tol) - log_gamma_abs - std::log(denom)) / log_base;
  const std::int64_t cap = std::min<std::int64_t>(acc.max_terms, 5000);
  if (!(need < static_cast<double>(cap))) fail(ErrorKind::BudgetExceeded, "eta acceleration needs too many terms");
  const int n = std::max(2, static_cast<int>(std::ceil(need)));

  std::vector<long double> d(static_cast<std::size_t>(n) + 1);
  long double e = 1.0L;
  long double run = 1.0L;
  d[0] = run;
  for (int i = 1; i <= n; ++i) {
    e *= static_cast<long double>(n + i - 1) * 4.0L * static_cast<long double>(n - i + 1) /
         (static_cast<long double>(2 * i) * static_cast<long double>(2 * i - 1));
    run += e;
    d[static_cast<std::size_t>(i)] = run;
  }
  const long double dn = d[static_cast<std::size_t>(n)];
  cplx acc_sum{};
  for (int k = n - 1; k >= 0; --k) {
    const double w = static_cast<double>((d[static_cast<std::size_t>(k)] - dn) / dn);
    const cplx term = w * pow_neg(std::log(static_cast<long double>(k + 1)), s.sigma, s.t);
    acc_sum += (k % 2 == 0) ? term : -term;
  }
  const cplx value = -acc_sum / (1.0 - two_pow);
  const double truncation = 2.0 * std::exp(-n * log_base - log_gamma_abs) / denom;
  const double roundoff = 8.0 * std::numeric_limits<double>::epsilon() * n / denom;
  return {value, truncation + roundoff};
}

/// (1/T) int_0^T |f(sigma0 + i t)|^2 dt by composite Simpson with the given
/// step (rounded down so the panel count is even).
template <class F>
double mean_square(F&& evaluator, double sigma0, double T, double quad_step) {
  if (!(T > 0.0) || !(quad_step > 0.0)) fail(ErrorKind::InvalidArgument, "T and quad_step must be positive");
  auto panels = static_cast<std::int64_t>(std::ceil(T / quad_step));
  if (panels % 2 == 1) ++panels;
  const double h = T / static_cast<double>(panels);
  auto sq = [&](std::int64_t i) {
    const cplx v = evaluator(ComplexPoint(sigma0, h * static_cast<double>(i)));
    if (!is_finite(v)) fail(ErrorKind::DomainError, "evaluator returned a non-finite value on the segment");
    return std::norm(v);
  };
  double odd = 0.0;
  double even = 0.0;
  for (std::int64_t i = 1; i < panels; ++i) (i % 2 == 1 ? odd : even) += sq(i);
  const double integral = h / 3.0 * (sq(0) + sq(panels) + 4.0 * odd + 2.0 * even);
  return integral / T;
}

}  // namespace zetalab
