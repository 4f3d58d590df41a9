#pragma once

// Truncated tori Omega_1h x Omega_2: Haar sampling on the kernel subgroup
// prod_{p in P0} omega_1(p)^{alpha_p} = 1, randomized zeta values, the
// ergodic shift by f_h = ((p^{-ih}), ((m+alpha)^{-ih})) and Birkhoff averages.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "zetalab/arithmetic_h.hpp"
#include "zetalab/core.hpp"
#include "zetalab/evaluators.hpp"
#include "zetalab/matsumoto.hpp"
#include "zetalab/primes.hpp"
#include "zetalab/special_functions.hpp"
#include "zetalab/stats.hpp"

namespace zetalab {

/// Primes <= prime_cutoff and m in [0, m_cutoff].
struct Truncation {
  std::uint64_t prime_cutoff = 100;
  std::uint64_t m_cutoff = 100;
};

struct OmegaSample {
  Truncation truncation;
  std::vector<std::uint64_t> primes;
  std::vector<cplx> omega1;
  std::vector<cplx> omega2;

  std::size_t prime_index(std::uint64_t p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it == primes.end() || *it != p) {
      fail(ErrorKind::TruncationTooSmall, "prime " + std::to_string(p) + " is outside the sampled torus");
    }
    return static_cast<std::size_t>(it - primes.begin());
  }
  cplx omega1_at(std::uint64_t p) const { return omega1[prime_index(p)]; }
  cplx omega2_at(std::uint64_t m) const {
    if (m >= omega2.size()) fail(ErrorKind::TruncationTooSmall, "m = " + std::to_string(m) + " is outside the sampled torus");
    return omega2[m];
  }
};

/// |prod_{p in P0} omega_1(p)^{alpha_p} - 1|.
inline double constraint_residual(const OmegaSample& w, const RationalShift& shift) {
  cplx prod{1.0, 0.0};
  for (auto [p, e] : shift.alpha) {
    cplx z = w.omega1_at(p);
    if (e < 0) z = std::conj(z);
    for (int i = 0; i < std::abs(e); ++i) prod *= z;
  }
  return std::abs(prod - 1.0);
}

/// Largest deviation of any coordinate from the unit circle.
inline double modulus_defect(const OmegaSample& w) {
  double d = 0.0;
  for (const cplx& z : w.omega1) d = std::max(d, std::abs(std::abs(z) - 1.0));
  for (const cplx& z : w.omega2) d = std::max(d, std::abs(std::abs(z) - 1.0));
  return d;
}

inline OmegaSample unit_sample(const Truncation& tr) {
  OmegaSample w;
  w.truncation = tr;
  w.primes = primes_up_to(tr.prime_cutoff);
  w.omega1.assign(w.primes.size(), cplx{1.0, 0.0});
  w.omega2.assign(static_cast<std::size_t>(tr.m_cutoff) + 1, cplx{1.0, 0.0});
  return w;
}

inline void check_truncation(const RationalShift& shift, const Truncation& tr) {
  if (!shift.P0.empty() && tr.prime_cutoff < *shift.P0.rbegin()) {
    fail(ErrorKind::BadTruncation, "prime cutoff must cover every prime of P0");
  }
}

namespace detail {

inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline cplx unit_phase_pos(long double theta) { return std::conj(unit_phase_neg(theta)); }

}  // namespace detail

/// Draws Haar-distributed points of the truncated subgroup from one seeded stream.
/// Unconstrained phases are uniform; on P0 the coordinate q with the smallest
/// |alpha_q| (ties: smallest q) is solved from sum alpha_p theta_p = 0 mod 2 pi,
/// choosing one of the |alpha_q| branches uniformly.
class HaarSampler {
 public:
  HaarSampler(const RationalShift& shift, const Truncation& tr, std::uint64_t seed)
      : shift_(shift), tr_(tr), rng_(seed) {
    check_truncation(shift_, tr_);
    primes_ = primes_up_to(tr_.prime_cutoff);
    for (auto [p, e] : shift_.alpha) {
      if (solved_ == 0 || std::abs(e) < std::abs(shift_.alpha_of(solved_))) solved_ = p;
    }
  }

  /// Fills `out` (reusing its storage); `phases` receives theta/(2 pi) in [0,1)
  /// for the unconstrained omega_1 coordinates when non-null.
  void next(OmegaSample& out) {
    out.truncation = tr_;
    if (out.primes != primes_) out.primes = primes_;
    out.omega1.resize(primes_.size());
    out.omega2.resize(static_cast<std::size_t>(tr_.m_cutoff) + 1);
    long double constrained_sum = 0.0L;
    std::size_t solved_index = primes_.size();
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      const std::uint64_t p = primes_[i];
      if (p == solved_) {
        solved_index = i;
        continue;
      }
      const long double theta = kTwoPiL * static_cast<long double>(detail::unit_uniform(rng_));
      out.omega1[i] = detail::unit_phase_pos(theta);
      if (const int e = shift_.alpha_of(p); e != 0) constrained_sum += static_cast<long double>(e) * theta;
    }
    if (solved_index < primes_.size()) {
      const int e = shift_.alpha_of(solved_);
      const auto branches = static_cast<std::uint64_t>(std::abs(e));
      const auto j = std::min<std::uint64_t>(
          branches - 1, static_cast<std::uint64_t>(detail::unit_uniform(rng_) * static_cast<double>(branches)));
      long double theta;
      if (constrained_sum == 0.0L) {
        theta = kTwoPiL * static_cast<long double>(j) / static_cast<long double>(e);
      } else {
        theta = (kTwoPiL * static_cast<long double>(j) - reduce_angle(constrained_sum)) / static_cast<long double>(e);
      }
      out.omega1[solved_index] = theta == 0.0L ? cplx{1.0, 0.0} : detail::unit_phase_pos(theta);
    }
    for (auto& z : out.omega2) z = detail::unit_phase_pos(kTwoPiL * static_cast<long double>(detail::unit_uniform(rng_)));
  }

  OmegaSample next() {
    OmegaSample w;
    next(w);
    return w;
  }

  std::uint64_t solved_prime() const { return solved_; }

 private:
  RationalShift shift_;
  Truncation tr_;
  std::mt19937_64 rng_;
  std::vector<std::uint64_t> primes_;
  std::uint64_t solved_ = 0;
};

inline OmegaSample sample_haar(const RationalShift& shift, HurwitzParam /*alpha*/, const Truncation& tr,
                               std::uint64_t seed) {
  return HaarSampler(shift, tr, seed).next();
}

/// omega_1(k) for k = 0..K by complete multiplicativity (entry 0 unused).
/// Entries that need a prime outside the sample are NaN.
inline std::vector<cplx> multiplicative_twist(const OmegaSample& w, std::uint32_t K) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<cplx> out(static_cast<std::size_t>(K) + 1, cplx{nan, nan});
  if (K >= 1) out[1] = 1.0;
  const auto spf = smallest_prime_factors(K);
  for (std::uint32_t k = 2; k <= K; ++k) {
    const std::uint64_t p = spf[k];
    auto it = std::lower_bound(w.primes.begin(), w.primes.end(), p);
    if (it == w.primes.end() || *it != p) continue;
    out[k] = out[k / p] * w.omega1[static_cast<std::size_t>(it - w.primes.begin())];
  }
  return out;
}

/// sum c_k omega_1(k) k^{-s} with the cut of the given plan.
inline Evaluation randomized_phi(ComplexPoint s, const SeriesPlan& plan, const OmegaSample& w) {
  if (s.sigma != plan.sigma) fail(ErrorKind::InvalidArgument, "plan was built for another real part");
  const auto K = static_cast<std::uint32_t>(plan.coeffs.size() - 1);
  const auto twist = multiplicative_twist(w, K);
  for (std::uint32_t k = 1; k <= K; ++k) {
    if (plan.coeffs[k] != cplx{} && !is_finite(twist[k])) {
      fail(ErrorKind::TruncationTooSmall, "coefficient " + std::to_string(k) + " needs primes beyond the sample");
    }
  }
  return {evaluate_plan(plan, s.t, &twist), plan.tail};
}

/// phi(s, omega) for sigma > 1; the tail is bounded by the untwisted majorant.
inline Evaluation randomized_phi(ComplexPoint s, const MatsumotoSpec& spec, const OmegaSample& w,
                                 const AccuracyBudget& acc = {}) {
  return randomized_phi(s, plan_matsumoto_series(s.sigma, spec, acc), w);
}

/// sum_{m<M} b_m omega_2(m) (m+alpha)^{-s}, with the deterministic tail bound
/// max|b| ((M+alpha)^{-sigma} + (M+alpha)^{1-sigma}/(sigma-1)) for sigma > 1.
inline Evaluation randomized_periodic_zeta_truncated(ComplexPoint s, HurwitzParam alpha, const PeriodicSequence& b,
                                                     const OmegaSample& w, std::uint64_t M) {
  if (!(s.sigma > 1.0)) fail(ErrorKind::DomainError, "randomized series needs sigma > 1");
  if (M > w.omega2.size()) fail(ErrorKind::TruncationTooSmall, "series cut exceeds the sampled m range");
  cplx value{};
  for (std::uint64_t m = M; m-- > 0;) {
    const cplx bm = b[m];
    if (bm == cplx{}) continue;
    value += bm * w.omega2[m] * pow_neg(std::log(static_cast<long double>(m) + alpha.alpha), s.sigma, s.t);
  }
  const double x = static_cast<double>(M) + alpha.alpha;
  const double tail = b.max_abs() * (std::pow(x, -s.sigma) + std::pow(x, 1.0 - s.sigma) / (s.sigma - 1.0));
  return {value, tail};
}

/// zeta(s, alpha, omega_2; B) for sigma > 1 within abs_tol.
inline Evaluation randomized_periodic_zeta(ComplexPoint s, HurwitzParam alpha, const PeriodicSequence& b,
                                           const OmegaSample& w, const AccuracyBudget& acc = {}) {
  acc.validate();
  if (!(s.sigma > 1.0)) fail(ErrorKind::DomainError, "randomized series needs sigma > 1");
  if (b.all_zero()) return {};
  const double bmax = b.max_abs();
  auto tail = [&](double m) {
    const double x = m + alpha.alpha;
    return bmax * (std::pow(x, -s.sigma) + std::pow(x, 1.0 - s.sigma) / (s.sigma - 1.0));
  };
  const double need = std::pow(2.0 * bmax / (acc.abs_tol * (s.sigma - 1.0)), 1.0 / (s.sigma - 1.0));
  if (!std::isfinite(need) || need > static_cast<double>(acc.max_terms)) {
    fail(ErrorKind::BudgetExceeded, "randomized series cannot meet abs_tol within max_terms");
  }
  auto M = static_cast<std::uint64_t>(std::ceil(need));
  while (M > 1 && tail(static_cast<double>(M / 2)) <= 0.5 * acc.abs_tol) M /= 2;
  while (tail(static_cast<double>(M)) > 0.5 * acc.abs_tol) M *= 2;
  if (M > w.omega2.size()) {
    fail(ErrorKind::TruncationTooSmall, "needs " + std::to_string(M) + " omega_2 coordinates");
  }
  return randomized_periodic_zeta_truncated(s, alpha, b, w, M);
}

// ---------------------------------------------------------------------------
// Orbit of the ergodic shift.

namespace detail {

/// Per-coordinate rotation rho = log x / log(a/b), so that the step-k phase
/// of x^{-ikh} is 2 pi frac(k rho). When rho = 1/e exactly (P0 = {q}, a = q^e)
/// the fractional part is taken in integer arithmetic.
struct Rotation {
  long double rho = 0.0L;
  std::int64_t exact_den = 0;

  cplx at(std::int64_t k) const {
    if (exact_den != 0) {
      const std::int64_t r = ((k % exact_den) + exact_den) % exact_den;
      if (r == 0) return {1.0, 0.0};
      return unit_phase_neg(kTwoPiL * static_cast<long double>(r) / static_cast<long double>(exact_den));
    }
    const long double x = static_cast<long double>(k) * rho;
    return unit_phase_neg(kTwoPiL * (x - std::floor(x)));
  }
};

inline Rotation prime_rotation(std::uint64_t p, const RationalShift& shift) {
  Rotation r;
  r.rho = std::log(static_cast<long double>(p)) / shift.log_ratio;
  if (shift.P0.size() == 1 && *shift.P0.begin() == p) r.exact_den = shift.alpha_of(p);
  return r;
}

inline Rotation hurwitz_rotation(std::uint64_t m, double alpha, const RationalShift& shift) {
  return {std::log(static_cast<long double>(m) + alpha) / shift.log_ratio, 0};
}

}  // namespace detail

/// Orbit point Phi_h^k(base). Phases are recomputed from k on every step.
struct OrbitState {
  RationalShift shift;
  double alpha = 1.0;
  OmegaSample base;
  std::int64_t k = 0;
  OmegaSample current;
  std::vector<detail::Rotation> rot1;
  std::vector<detail::Rotation> rot2;

  void refresh() {
    current.truncation = base.truncation;
    current.primes = base.primes;
    current.omega1.resize(base.omega1.size());
    current.omega2.resize(base.omega2.size());
    for (std::size_t i = 0; i < base.omega1.size(); ++i) current.omega1[i] = base.omega1[i] * rot1[i].at(k);
    for (std::size_t m = 0; m < base.omega2.size(); ++m) current.omega2[m] = base.omega2[m] * rot2[m].at(k);
  }
};

inline OrbitState start_orbit(const RationalShift& shift, HurwitzParam alpha, OmegaSample base) {
  check_truncation(shift, base.truncation);
  OrbitState st;
  st.shift = shift;
  st.alpha = alpha.alpha;
  for (std::uint64_t p : base.primes) st.rot1.push_back(detail::prime_rotation(p, shift));
  for (std::uint64_t m = 0; m < base.omega2.size(); ++m) st.rot2.push_back(detail::hurwitz_rotation(m, alpha.alpha, shift));
  st.base = std::move(base);
  st.refresh();
  return st;
}

inline OrbitState start_orbit(const RationalShift& shift, HurwitzParam alpha, const Truncation& tr) {
  return start_orbit(shift, alpha, unit_sample(tr));
}

inline OrbitState ergodic_step(OrbitState st) {
  ++st.k;
  st.refresh();
  return st;
}

inline OrbitState ergodic_step_inverse(OrbitState st) {
  --st.k;
  st.refresh();
  return st;
}

// ---------------------------------------------------------------------------
// Birkhoff averages over a fixed catalog of functionals.

/// A functional F(omega) = [Re] sum_j coef_j chi_j(omega) over characters chi_j.
struct CatalogFunctional {
  struct Term {
    cplx coef;
    CharacterIndex idx;
  };
  std::vector<Term> terms;
  bool real_part = false;
};

/// Catalog ids: "one", "omega1:p", "omega2:m", "re_zeta_b:sigma" (Re of the
/// first 64 terms of sum omega_2(m)(m+alpha)^{-sigma}) and "re_phi:sigma"
/// (Re of the first 64 terms of sum omega_1(k) k^{-sigma}).
inline CatalogFunctional catalog_functional(const std::string& id, double alpha) {
  CatalogFunctional f;
  const auto colon = id.find(':');
  const std::string head = id.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : id.substr(colon + 1);
  auto parse_uint = [&]() {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || arg.empty()) {
      fail(ErrorKind::UnknownFunctional, "bad argument in functional '" + id + "'");
    }
    return v;
  };
  auto parse_real = [&]() {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(arg, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::UnknownFunctional, "bad argument in functional '" + id + "'");
    }
    if (used != arg.size() || !(v > 0.0)) fail(ErrorKind::UnknownFunctional, "bad argument in functional '" + id + "'");
    return v;
  };
  if (head == "one" && colon == std::string::npos) {
    f.terms.push_back({1.0, {}});
  } else if (head == "omega1") {
    const std::uint64_t p = parse_uint();
    if (!is_prime(p)) fail(ErrorKind::UnknownFunctional, "omega1 coordinate must be prime");
    CharacterIndex idx;
    idx.k[p] = 1;
    f.terms.push_back({1.0, idx});
  } else if (head == "omega2") {
    CharacterIndex idx;
    idx.l_m[parse_uint()] = 1;
    f.terms.push_back({1.0, idx});
  } else if (head == "re_zeta_b") {
    const double sigma = parse_real();
    for (std::uint64_t m = 0; m < 64; ++m) {
      CharacterIndex idx;
      idx.l_m[m] = 1;
      f.terms.push_back({std::pow(static_cast<double>(m) + alpha, -sigma), idx});
    }
    f.real_part = true;
  } else if (head == "re_phi") {
    const double sigma = parse_real();
    for (std::uint64_t k = 1; k <= 64; ++k) {
      CharacterIndex idx;
      for (auto [p, e] : factorize(k)) idx.k[p] = e;
      f.terms.push_back({std::pow(static_cast<double>(k), -sigma), idx});
    }
    f.real_part = true;
  } else {
    fail(ErrorKind::UnknownFunctional, "unknown functional '" + id + "'");
  }
  return f;
}

namespace detail {

inline cplx character_value(const CharacterIndex& idx, const OmegaSample& w) {
  cplx v{1.0, 0.0};
  for (const auto& [p, e] : idx.k) {
    cplx z = w.omega1_at(p);
    if (e < 0) z = std::conj(z);
    for (std::int64_t i = 0; i < std::abs(e); ++i) v *= z;
  }
  for (const auto& [m, e] : idx.l_m) {
    cplx z = w.omega2_at(m);
    if (e < 0) z = std::conj(z);
    for (std::int64_t i = 0; i < std::abs(e); ++i) v *= z;
  }
  return v;
}

inline cplx functional_value(const CatalogFunctional& f, const OmegaSample& w) {
  cplx v{};
  for (const auto& t : f.terms) v += t.coef * character_value(t.idx, w);
  return f.real_part ? cplx{v.real(), 0.0} : v;
}

inline Truncation functional_truncation(const CatalogFunctional& f, const RationalShift& shift) {
  Truncation tr{2, 0};
  if (!shift.P0.empty()) tr.prime_cutoff = std::max(tr.prime_cutoff, *shift.P0.rbegin());
  for (const auto& t : f.terms) {
    if (!t.idx.k.empty()) tr.prime_cutoff = std::max(tr.prime_cutoff, t.idx.k.rbegin()->first);
    if (!t.idx.l_m.empty()) tr.m_cutoff = std::max(tr.m_cutoff, t.idx.l_m.rbegin()->first);
  }
  return tr;
}

}  // namespace detail

struct BirkhoffResult {
  cplx time_avg;
  cplx space_avg;
  double std_error;
  /// sum over non-resonant characters of |coef| 2/((N+1)|1 - e^{-ihX}|), plus
  /// a 1e-12 sum|coef| allowance for phase roundoff along the orbit.
  double deterministic_bound;
};

/// Time average of F over Phi_h^k(1), k = 0..N, against a Monte-Carlo Haar
/// average over `samples` points.
inline BirkhoffResult birkhoff_average(const std::string& functional_id, const RationalShift& shift, HurwitzParam alpha,
                                       std::int64_t N, std::int64_t samples = 4096, std::uint64_t seed = 1) {
  if (N < 1) fail(ErrorKind::InvalidArgument, "N must be >= 1");
  if (samples < 2) fail(ErrorKind::InvalidArgument, "need at least two Haar samples");
  const CatalogFunctional f = catalog_functional(functional_id, alpha.alpha);
  const Truncation tr = detail::functional_truncation(f, shift);

  OrbitState st = start_orbit(shift, alpha, tr);
  std::vector<cplx> orbit(static_cast<std::size_t>(N) + 1);
  for (std::int64_t k = 0; k <= N; ++k) {
    if (k > 0) st = ergodic_step(std::move(st));
    orbit[static_cast<std::size_t>(k)] = detail::functional_value(f, st.current);
  }

  HaarSampler sampler(shift, tr, seed);
  OmegaSample w;
  std::vector<cplx> space(static_cast<std::size_t>(samples));
  for (auto& v : space) {
    sampler.next(w);
    v = detail::functional_value(f, w);
  }

  double bound = 0.0;
  double coef_total = 0.0;
  for (const auto& t : f.terms) {
    coef_total += std::abs(t.coef);
    if (k3_satisfied(t.idx, shift).first) continue;
    bound += std::abs(t.coef) * fourier_g_bound(N, t.idx, shift, alpha.alpha);
  }
  return {mean_of(orbit), mean_of(space), standard_error(space), bound + 1e-12 * coef_total};
}

// ---------------------------------------------------------------------------
// Orbit against Haar: distribution of Re f(s + ikh) vs Re f(s, omega).

using OrbitTarget = std::variant<PeriodicSequence, MatsumotoSpec>;

struct OrbitVsHaarResult {
  double ks = 0.0;
  std::vector<double> orbit_values;
  std::vector<double> haar_values;
  double haar_tail_bound = 0.0;  // deterministic bound on the truncation of the Haar-side series
};

struct OrbitVsHaarOptions {
  std::uint64_t seed = 1;
  std::uint64_t haar_terms = 4096;  // series cut on the Haar side for sigma > 1
  AccuracyBudget acc{1e-10, std::int64_t{1} << 24};
};

namespace detail {

/// Weights w_j x_j^{-sigma} and log x_j of a finite Dirichlet polynomial,
/// together with the character index of each term.
struct DirichletPolynomial {
  std::vector<cplx> weight;
  std::vector<long double> log_x;
  std::vector<std::uint64_t> index;  // m for the Hurwitz side, k for the Euler side
  double tail = 0.0;

  cplx at_shift(long double t) const {
    cplx v{};
    for (std::size_t j = weight.size(); j-- > 0;) v += weight[j] * unit_phase_neg(t * log_x[j]);
    return v;
  }
};

}  // namespace detail

inline OrbitVsHaarResult orbit_vs_haar(const OrbitTarget& target, ComplexPoint point, const RationalShift& shift,
                                       HurwitzParam alpha, std::int64_t N, std::int64_t samples,
                                       const SmoothingParam& smooth, const OrbitVsHaarOptions& opt = {}) {
  if (N < 0 || samples < 1) fail(ErrorKind::InvalidArgument, "N >= 0 and samples >= 1 required");
  if (!(point.sigma > 0.5)) fail(ErrorKind::DomainError, "point must have sigma > 1/2");
  const bool smoothed = point.sigma <= 1.0;
  OrbitVsHaarResult out;
  out.orbit_values.resize(static_cast<std::size_t>(N) + 1);

  detail::DirichletPolynomial poly;
  const bool periodic = std::holds_alternative<PeriodicSequence>(target);
  if (periodic) {
    const auto& b = std::get<PeriodicSequence>(target);
    std::uint64_t M = opt.haar_terms;
    const double X = static_cast<double>(smooth.n) + alpha.alpha;
    if (smoothed) {
      M = static_cast<std::uint64_t>(smooth.n);
      while (b.max_abs() * std::pow(static_cast<double>(M) + alpha.alpha, -point.sigma) *
                 detail::stretched_exp_tail(static_cast<double>(M) + alpha.alpha, X, smooth.sigma_star1) >
             opt.acc.abs_tol) {
        M *= 2;
      }
    }
    for (std::uint64_t m = 0; m < M; ++m) {
      if (b[m] == cplx{}) continue;
      const long double lx = std::log(static_cast<long double>(m) + alpha.alpha);
      double w = std::exp(-point.sigma * static_cast<double>(lx));
      if (smoothed) w *= v2(static_cast<double>(m), static_cast<double>(smooth.n), alpha.alpha, smooth.sigma_star1);
      poly.weight.push_back(b[m] * w * unit_phase_neg(static_cast<long double>(point.t) * lx));
      poly.log_x.push_back(lx);
      poly.index.push_back(m);
    }
    if (!smoothed) {
      const double x = static_cast<double>(M) + alpha.alpha;
      poly.tail = b.max_abs() * (std::pow(x, -point.sigma) + std::pow(x, 1.0 - point.sigma) / (point.sigma - 1.0));
    }
    if (smoothed) {
      for (std::int64_t k = 0; k <= N; ++k) {
        out.orbit_values[static_cast<std::size_t>(k)] = poly.at_shift(static_cast<long double>(k) * shift.h).real();
      }
    } else {
      // Exact values along the orbit, tabulated in blocks.
      const auto ev = make_periodic_evaluator(alpha, b, opt.acc.abs_tol);
      const std::vector<cplx> pt{cplx{point.sigma, point.t}};
      std::vector<cplx> tab;
      for (std::int64_t k0 = 0; k0 <= N; k0 += 256) {
        const std::int64_t count = std::min<std::int64_t>(256, N + 1 - k0);
        ev->tabulate(pt, pt[0], shift.h, k0, count, tab);
        for (std::int64_t i = 0; i < count; ++i) out.orbit_values[static_cast<std::size_t>(k0 + i)] = tab[static_cast<std::size_t>(i)].real();
      }
    }
  } else {
    const auto& spec = std::get<MatsumotoSpec>(target);
    std::vector<cplx> coeffs;
    if (smoothed) {
      // Same cut rule as smoothed_phi_n.
      std::int64_t K = std::max<std::int64_t>(smooth.n, 16);
      for (;;) {
        coeffs = dirichlet_coefficients(spec, static_cast<std::uint32_t>(K));
        double B = 0.0;
        for (std::int64_t k = 1; k <= K; ++k) {
          B = std::max(B, std::abs(coeffs[static_cast<std::size_t>(k)]) * std::pow(static_cast<double>(k), -0.25));
        }
        const double Kd = static_cast<double>(K + 1);
        const double tail = B * std::pow(Kd, 0.25 - point.sigma) *
                            detail::stretched_exp_tail(Kd, static_cast<double>(smooth.n), smooth.sigma_star1);
        if (tail <= opt.acc.abs_tol) break;
        K *= 2;
        if (K > opt.acc.max_terms) fail(ErrorKind::BudgetExceeded, "smoothed series cannot meet abs_tol");
      }
    } else {
      const SeriesPlan plan = plan_matsumoto_series(point.sigma, spec, opt.acc);
      coeffs = plan.coeffs;
      poly.tail = plan.tail;
    }
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
      if (coeffs[k] == cplx{}) continue;
      const long double lx = std::log(static_cast<long double>(k));
      double w = std::exp(-point.sigma * static_cast<double>(lx));
      if (smoothed) w *= v1(static_cast<double>(k), static_cast<double>(smooth.n), smooth.sigma_star1);
      poly.weight.push_back(coeffs[k] * w * unit_phase_neg(static_cast<long double>(point.t) * lx));
      poly.log_x.push_back(lx);
      poly.index.push_back(k);
    }
    for (std::int64_t k = 0; k <= N; ++k) {
      out.orbit_values[static_cast<std::size_t>(k)] = poly.at_shift(static_cast<long double>(k) * shift.h).real();
    }
  }
  out.haar_tail_bound = poly.tail;

  Truncation tr{2, 0};
  if (!shift.P0.empty()) tr.prime_cutoff = std::max(tr.prime_cutoff, *shift.P0.rbegin());
  if (!poly.index.empty()) {
    if (periodic) {
      tr.m_cutoff = poly.index.back();
    } else {
      tr.prime_cutoff = std::max(tr.prime_cutoff, poly.index.back());
    }
  }
  HaarSampler sampler(shift, tr, opt.seed);
  OmegaSample w;
  out.haar_values.resize(static_cast<std::size_t>(samples));
  std::vector<cplx> twist;
  for (auto& hv : out.haar_values) {
    sampler.next(w);
    if (!periodic) twist = multiplicative_twist(w, static_cast<std::uint32_t>(poly.index.back()));
    cplx v{};
    for (std::size_t j = poly.weight.size(); j-- > 0;) {
      v += poly.weight[j] * (periodic ? w.omega2[poly.index[j]] : twist[poly.index[j]]);
    }
    hv = v.real();
  }
  out.ks = ks_two_sample(out.orbit_values, out.haar_values);
  return out;
}

}  // namespace zetalab
