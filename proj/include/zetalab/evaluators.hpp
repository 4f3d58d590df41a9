#pragma once

// Evaluators used by the scanner: functions of s that can be tabulated on a
// point set shifted by k h for a run of consecutive k.
//
// Every built-in family is a combination of power sums
//   value(s) = q^{-s} R(s) [ sum_l b_l ( sum_{m<N_l} w_{l,m} (m + a_l)^{-s} + T_l(s) ) + I(s) ],
// where T_l is the Euler-Maclaurin tail of an infinite Hurwitz sum, I the
// integral term, and R(s) a finite product of removed Euler factors.
//
// Block tabulation: for a run of shifts t_k = k h and points s0 + d_j, each
// power sum is expanded around the anchor s0,
//   sum_m u_m(k) e^{-d_j L_m} = sum_i d_j^i M_i(k),  M_i(k) = sum_m u_m(k) (-L_m)^i / i!,
// with u_m(k) = w_m x_m^{-s0} e^{-i t_k L_m} advanced by the rotation e^{-i h L_m}.
// Each (k, m) pair then costs O(Taylor order) flops, independent of the
// number of grid points.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "zetalab/arithmetic_h.hpp"
#include "zetalab/core.hpp"
#include "zetalab/euler_maclaurin.hpp"
#include "zetalab/matsumoto.hpp"
#include "zetalab/special_functions.hpp"

namespace zetalab {

class Evaluator {
 public:
  virtual ~Evaluator() = default;

  virtual std::string name() const = 0;

  /// DomainError unless every point + i t with t in [t_lo, t_hi] is in the
  /// validity region.
  virtual void require_valid(const std::vector<cplx>& points, double t_lo, double t_hi) const = 0;

  virtual Evaluation at(double sigma, long double t) const = 0;

  Evaluation at(cplx s) const { return at(s.real(), static_cast<long double>(s.imag())); }

  /// out[i * P + j] = f(points[j] + i (k0 + i) h) for i < count, P = points.size().
  /// Returns the largest error bound over the block.
  virtual double tabulate(const std::vector<cplx>& points, cplx /*anchor*/, long double h, std::int64_t k0,
                          std::int64_t count, std::vector<cplx>& out) const {
    const std::size_t P = points.size();
    out.resize(static_cast<std::size_t>(count) * P);
    double err = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
      const long double shift = static_cast<long double>(k0 + i) * h;
      for (std::size_t j = 0; j < P; ++j) {
        const Evaluation e = at(points[j].real(), static_cast<long double>(points[j].imag()) + shift);
        out[static_cast<std::size_t>(i) * P + j] = e.value;
        err = std::max(err, e.abs_err_bound);
      }
    }
    return err;
  }
};

using EvaluatorPtr = std::shared_ptr<const Evaluator>;

class ConstantEvaluator final : public Evaluator {
 public:
  explicit ConstantEvaluator(cplx c) : c_(c) {}
  std::string name() const override { return "constant"; }
  void require_valid(const std::vector<cplx>&, double, double) const override {}
  Evaluation at(double, long double) const override { return {c_, 0.0}; }

 private:
  cplx c_;
};

struct PowerSumComponent {
  cplx coef{1.0, 0.0};
  long double a = 1.0L;        // x_m = m + a
  bool hurwitz = true;         // infinite sum with unit weights, continued by Euler-Maclaurin
  std::vector<cplx> weights;   // finite sums only
};

struct RemovedFactor {
  std::uint64_t p;
  std::vector<LocalRoot> roots;
};

class PowerSumEvaluator final : public Evaluator {
 public:
  struct Options {
    std::string name;
    std::uint64_t prefactor_base = 1;    // q in q^{-s}
    double sigma_shift = 0.0;            // exponent shift for the removed Euler factors
    std::vector<RemovedFactor> removed;  // R(s) = prod (1 - a p^{-f (s + shift)})
    double sigma_min = -1e300;           // open lower bound of the validity region
    double sigma_max = 1e300;
    double extra_error = 0.0;            // truncation error of finite sums, added to every bound
    double abs_tol = 1e-10;
  };

  PowerSumEvaluator(std::vector<PowerSumComponent> comps, Options opt) : comps_(std::move(comps)), opt_(std::move(opt)) {
    if (!(opt_.abs_tol > 0.0)) fail(ErrorKind::InvalidArgument, "abs_tol must be positive");
    for (const auto& c : comps_) {
      if (c.hurwitz) hurwitz_sum_ += c.coef;
      coef_abs_ += std::abs(c.coef);
    }
    has_pole_ = std::abs(hurwitz_sum_) != 0.0;
    log_q_ = std::log(static_cast<long double>(opt_.prefactor_base));
  }

  std::string name() const override { return opt_.name; }

  void require_valid(const std::vector<cplx>& points, double t_lo, double t_hi) const override {
    for (const cplx& s : points) {
      if (!(s.real() > opt_.sigma_min && s.real() < opt_.sigma_max)) {
        fail(ErrorKind::DomainError, opt_.name + " is not available at sigma = " + std::to_string(s.real()));
      }
      if (has_pole_ && s.real() == 1.0 && s.imag() + t_lo <= 0.0 && s.imag() + t_hi >= 0.0) {
        fail(ErrorKind::DomainError, opt_.name + " has a pole at s = 1 on the shifted grid");
      }
    }
  }

  Evaluation at(double sigma, long double t) const override {
    if (has_pole_ && sigma == 1.0 && t == 0.0L) fail(ErrorKind::PoleAt1, opt_.name + " has a pole at s = 1");
    const double scale = scale_bound(sigma, sigma);
    const double em_tol = 0.5 * opt_.abs_tol / scale;
    const detail::VerticalBox box{sigma, sigma, std::abs(static_cast<double>(t))};
    cplx inner{};
    double abs_sum = 0.0;
    for (const auto& c : comps_) {
      const std::int64_t N = cut(c, box, em_tol);
      cplx partial{};
      for (std::int64_t m = N; m-- > 0;) {
        const cplx w = c.hurwitz ? cplx{1.0, 0.0} : c.weights[static_cast<std::size_t>(m)];
        if (w == cplx{}) continue;
        const cplx term = w * pow_neg(std::log(static_cast<long double>(m) + c.a), sigma, t);
        partial += term;
        abs_sum += std::abs(c.coef) * std::abs(term);
      }
      inner += c.coef * (partial + tail(c, N, sigma, t));
    }
    inner += pole_term(sigma, t);
    const cplx value = finish(inner, sigma, t);
    const double roundoff = 16.0 * std::numeric_limits<double>::epsilon() * scale * (abs_sum + std::abs(inner) + 1.0);
    return {value, opt_.abs_tol * 0.5 + opt_.extra_error + roundoff};
  }

  double tabulate(const std::vector<cplx>& points, cplx anchor, long double h, std::int64_t k0, std::int64_t count,
                  std::vector<cplx>& out) const override {
    const std::size_t P = points.size();
    out.assign(static_cast<std::size_t>(count) * P, cplx{});
    if (P == 0 || count <= 0) return 0.0;

    double s_lo = points[0].real(), s_hi = points[0].real();
    double tau_abs = 0.0, reach = 0.0;
    for (const cplx& s : points) {
      s_lo = std::min(s_lo, s.real());
      s_hi = std::max(s_hi, s.real());
      tau_abs = std::max(tau_abs, std::abs(s.imag()));
      reach = std::max(reach, std::abs(s - anchor));
    }
    const long double t_first = static_cast<long double>(k0) * h;
    const long double t_last = static_cast<long double>(k0 + count - 1) * h;
    const double t_abs = tau_abs + static_cast<double>(std::max(std::abs(t_first), std::abs(t_last)));
    const double scale = scale_bound(s_lo, s_hi);
    // Tolerance split: half to the Euler-Maclaurin tails, a quarter to the Taylor expansions.
    const double em_tol = 0.5 * opt_.abs_tol / scale;
    const double taylor_tol = 0.25 * opt_.abs_tol / (scale * std::max(1.0, coef_abs_));
    const detail::VerticalBox box{s_lo, s_hi, t_abs};

    // inner[i * P + j] accumulates sum_l b_l (power sum + tail).
    std::vector<cplx> inner(static_cast<std::size_t>(count) * P, cplx{});
    double roundoff_mass = 0.0;
    for (std::size_t ci = 0; ci < comps_.size(); ++ci) {
      const PowerSumComponent& c = comps_[ci];
      const std::int64_t N = cut(c, box, em_tol);
      if (N > 0) {
        roundoff_mass += std::abs(c.coef) * block_power_sum(ci, N, points, anchor, h, k0, count, reach, taylor_tol, inner);
      }
      for (std::int64_t i = 0; i < count; ++i) {
        const long double shift = static_cast<long double>(k0 + i) * h;
        for (std::size_t j = 0; j < P; ++j) {
          const long double t = static_cast<long double>(points[j].imag()) + shift;
          inner[static_cast<std::size_t>(i) * P + j] += c.coef * tail(c, N, points[j].real(), t);
        }
      }
    }
    for (std::int64_t i = 0; i < count; ++i) {
      const long double shift = static_cast<long double>(k0 + i) * h;
      for (std::size_t j = 0; j < P; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * P + j;
        const double sigma = points[j].real();
        const long double t = static_cast<long double>(points[j].imag()) + shift;
        if (has_pole_ && sigma == 1.0 && t == 0.0L) fail(ErrorKind::PoleAt1, opt_.name + " has a pole at s = 1");
        out[idx] = finish(inner[idx] + pole_term(sigma, t), sigma, t);
      }
    }
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * scale * (roundoff_mass + 1.0);
    return 0.5 * opt_.abs_tol + 0.25 * opt_.abs_tol + opt_.extra_error + roundoff;
  }

  const std::vector<PowerSumComponent>& components() const { return comps_; }
  const Options& options() const { return opt_; }

 private:
  static constexpr std::size_t kTile = 256;
  static constexpr int kMaxTaylor = 40;

  /// Upper bound of |q^{-s}| |R(s)| over sigma in [lo, hi].
  double scale_bound(double lo, double hi) const {
    double q = std::max(std::pow(static_cast<double>(opt_.prefactor_base), -lo),
                        std::pow(static_cast<double>(opt_.prefactor_base), -hi));
    for (const auto& rf : opt_.removed) {
      for (const LocalRoot& r : rf.roots) {
        q *= 1.0 + std::abs(r.a) * std::pow(static_cast<double>(rf.p), -r.f * (lo + opt_.sigma_shift));
      }
    }
    return q;
  }

  std::int64_t cut(const PowerSumComponent& c, const detail::VerticalBox& box, double em_tol) const {
    if (!c.hurwitz) return static_cast<std::int64_t>(c.weights.size());
    return detail::em_cut(box, static_cast<double>(c.a), em_tol / std::max(1.0, std::abs(c.coef) * comps_.size()));
  }

  cplx tail(const PowerSumComponent& c, std::int64_t N, double sigma, long double t) const {
    if (!c.hurwitz) return {};
    const long double log_x = std::log(static_cast<long double>(N) + c.a);
    return detail::em_correction(sigma, t, log_x) + detail::em_integral_regular(sigma, t, log_x);
  }

  /// sum_l b_l / (s - 1), the singular part of the Hurwitz integral terms.
  cplx pole_term(double sigma, long double t) const {
    if (!has_pole_) return {};
    return hurwitz_sum_ / (cplx{sigma, static_cast<double>(t)} - 1.0);
  }

  cplx finish(cplx inner, double sigma, long double t) const {
    cplx v = inner;
    if (opt_.prefactor_base != 1) v *= pow_neg(log_q_, sigma, t);
    for (const auto& rf : opt_.removed) {
      const long double log_p = std::log(static_cast<long double>(rf.p));
      for (const LocalRoot& r : rf.roots) v *= 1.0 - r.a * pow_neg(log_p * r.f, sigma + opt_.sigma_shift, t);
    }
    return v;
  }

  /// Per-component tables at a fixed anchor abscissa and step: -log x_m,
  /// w_m x_m^{-s0}, the rotation e^{-i h log x_m}, and prefix sums of |w_m| x_m^{-s0}.
  /// Entries do not depend on the table length, so regrowing keeps results identical.
  struct Table {
    std::size_t comp = 0;
    double s0 = 0.0;
    long double h = 0.0L;
    std::vector<long double> L;
    std::vector<double> nl, wre, wim, rre, rim, mass;
  };

  std::shared_ptr<const Table> table_for(std::size_t ci, double s0, long double h, std::int64_t N) const {
    std::lock_guard<std::mutex> lock(cache_mu_);
    std::shared_ptr<const Table> old;
    for (auto& t : cache_) {
      if (t->comp == ci && t->s0 == s0 && t->h == h) {
        if (static_cast<std::int64_t>(t->L.size()) >= N) return t;
        old = t;
      }
    }
    const PowerSumComponent& c = comps_[ci];
    auto tab = std::make_shared<Table>();
    tab->comp = ci;
    tab->s0 = s0;
    tab->h = h;
    std::size_t n = static_cast<std::size_t>(N);
    if (old) n = std::max(n, old->L.size() + old->L.size() / 2);
    if (!c.hurwitz) n = std::min(n, c.weights.size());
    tab->L.resize(n);
    tab->nl.resize(n);
    tab->wre.resize(n);
    tab->wim.resize(n);
    tab->rre.resize(n);
    tab->rim.resize(n);
    tab->mass.resize(n + 1);
    tab->mass[0] = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const cplx w = c.hurwitz ? cplx{1.0, 0.0} : c.weights[m];
      const long double L = std::log(static_cast<long double>(m) + c.a);
      const cplx u = w * pow_neg(L, s0, 0.0L);
      const cplx r = unit_phase_neg(h * L);
      tab->L[m] = L;
      tab->nl[m] = -static_cast<double>(L);
      tab->wre[m] = u.real();
      tab->wim[m] = u.imag();
      tab->rre[m] = r.real();
      tab->rim[m] = r.imag();
      tab->mass[m + 1] = tab->mass[m] + std::abs(u);
    }
    if (old) cache_.erase(std::find(cache_.begin(), cache_.end(), old));
    cache_.push_back(tab);
    return tab;
  }

  static constexpr std::size_t kLanes = 8;

  typedef double Lanes __attribute__((vector_size(kLanes * sizeof(double))));

  static Lanes load_lanes(const double* p) {
    Lanes v;
    std::memcpy(&v, p, sizeof v);
    return v;
  }

  /// mr[j] += sum_q ure[q] nl[q]^j (and likewise for the imaginary part).
  /// Powers run in four interleaved chains to hide multiply latency; lane
  /// accumulators are reduced in a fixed order.
  template <std::size_t J>
  static void moments_kernel(const double* ure, const double* uim, const double* nl, std::size_t len, double* mr,
                             double* mi) {
    Lanes ar[J], ai[J];
#pragma GCC unroll 64
    for (std::size_t j = 0; j < J; ++j) ar[j] = ai[j] = Lanes{};
    for (std::size_t q0 = 0; q0 < len; q0 += kLanes) {
      const Lanes ur = load_lanes(ure + q0);
      const Lanes ui = load_lanes(uim + q0);
      const Lanes x = load_lanes(nl + q0);
      const Lanes x2 = x * x;
      const Lanes x4 = x2 * x2;
      Lanes c[4] = {Lanes{} + 1.0, x, x2, x2 * x};
#pragma GCC unroll 64
      for (std::size_t j = 0; j < J; ++j) {
        ar[j] += ur * c[j % 4];
        ai[j] += ui * c[j % 4];
        c[j % 4] *= x4;
      }
    }
#pragma GCC unroll 64
    for (std::size_t j = 0; j < J; ++j) {
      double sr = 0.0, si = 0.0;
      for (std::size_t l = 0; l < kLanes; ++l) {
        sr += ar[j][l];
        si += ai[j][l];
      }
      mr[j] += sr;
      mi[j] += si;
    }
  }

  using KernelFn = void (*)(const double*, const double*, const double*, std::size_t, double*, double*);

  template <std::size_t... I>
  static constexpr std::array<KernelFn, sizeof...(I)> kernel_table(std::index_sequence<I...>) {
    return {&moments_kernel<I + 1>...};
  }

  static KernelFn kernel_for(std::size_t J) {
    static constexpr auto table = kernel_table(std::make_index_sequence<kMaxTaylor + 1>{});
    return table[J - 1];
  }

  /// Adds c.coef * sum_{m<N} w_m (m+a)^{-(p_j + i t_k)} into inner; returns
  /// sum |w_m| x_m^{-sigma_lo} (bounded above) for the roundoff estimate.
  double block_power_sum(std::size_t ci, std::int64_t N, const std::vector<cplx>& points, cplx anchor,
                         long double h, std::int64_t k0, std::int64_t count, double reach, double taylor_tol,
                         std::vector<cplx>& inner) const {
    const PowerSumComponent& c = comps_[ci];
    const std::size_t P = points.size();
    const double s0 = anchor.real();
    const long double tau0 = static_cast<long double>(anchor.imag());
    const long double t_first = static_cast<long double>(k0) * h + tau0;

    double s_lo = s0;
    for (const cplx& p : points) s_lo = std::min(s_lo, p.real());
    const auto tab = table_for(ci, s0, h, N);
    const double mass0 = tab->mass[static_cast<std::size_t>(N)];
    const double x_max = static_cast<double>(static_cast<long double>(N - 1) + c.a);
    const double mass_lo = mass0 * std::max(1.0, std::pow(x_max, s0 - s_lo)) * std::max(1.0, std::pow(static_cast<double>(c.a), s0 - s_lo));

    const double L_max = std::max(0.0, static_cast<double>(tab->L[static_cast<std::size_t>(N - 1)]));
    const double L_min = static_cast<double>(std::log(c.a));
    const double rl = reach * std::max(L_max, std::abs(L_min));
    int order = 0;
    for (order = 0; order <= kMaxTaylor; ++order) {
      const double term = std::pow(rl, order + 1) / std::tgamma(order + 2.0);
      if (mass0 * term * std::exp(rl) <= taylor_tol) break;
    }
    if (order > kMaxTaylor) {
      pointwise_power_sum(c, N, points, h, k0, count, inner);
      return mass_lo;
    }

    const std::size_t J = static_cast<std::size_t>(order) + 1;
    const KernelFn kernel = kernel_for(J);
    std::vector<double> mom_re(static_cast<std::size_t>(count) * J, 0.0);
    std::vector<double> mom_im(static_cast<std::size_t>(count) * J, 0.0);

    alignas(64) double ure[kTile], uim[kTile], rre[kTile], rim[kTile], nl[kTile];
    for (std::int64_t m0 = 0; m0 < N; m0 += static_cast<std::int64_t>(kTile)) {
      const std::size_t len = static_cast<std::size_t>(std::min<std::int64_t>(kTile, N - m0));
      const std::size_t padded = (len + kLanes - 1) / kLanes * kLanes;
      for (std::size_t q = 0; q < len; ++q) {
        const std::size_t m = static_cast<std::size_t>(m0) + q;
        const cplx ph = unit_phase_neg(t_first * tab->L[m]);
        const cplx u = cplx{tab->wre[m], tab->wim[m]} * ph;
        ure[q] = u.real();
        uim[q] = u.imag();
        rre[q] = tab->rre[m];
        rim[q] = tab->rim[m];
        nl[q] = tab->nl[m];
      }
      for (std::size_t q = len; q < padded; ++q) {
        ure[q] = uim[q] = nl[q] = 0.0;
        rre[q] = 1.0;
        rim[q] = 0.0;
      }
      for (std::int64_t i = 0; i < count; ++i) {
        kernel(ure, uim, nl, padded, &mom_re[static_cast<std::size_t>(i) * J], &mom_im[static_cast<std::size_t>(i) * J]);
#pragma omp simd
        for (std::size_t q = 0; q < padded; ++q) {
          const double a = ure[q] * rre[q] - uim[q] * rim[q];
          const double b = ure[q] * rim[q] + uim[q] * rre[q];
          ure[q] = a;
          uim[q] = b;
        }
      }
    }

    std::vector<double> inv_fact(J, 1.0);
    for (std::size_t j = 1; j < J; ++j) inv_fact[j] = inv_fact[j - 1] / static_cast<double>(j);
    for (std::int64_t i = 0; i < count; ++i) {
      const double* mr = &mom_re[static_cast<std::size_t>(i) * J];
      const double* mi = &mom_im[static_cast<std::size_t>(i) * J];
      for (std::size_t p = 0; p < P; ++p) {
        const cplx d = points[p] - anchor;
        cplx acc{};
        for (std::size_t j = J; j-- > 0;) acc = acc * d + inv_fact[j] * cplx{mr[j], mi[j]};
        inner[static_cast<std::size_t>(i) * P + p] += c.coef * acc;
      }
    }
    return mass_lo;
  }

  /// Per-point fallback: one power per (m, point), then rotation along k.
  void pointwise_power_sum(const PowerSumComponent& c, std::int64_t N, const std::vector<cplx>& points, long double h,
                           std::int64_t k0, std::int64_t count, std::vector<cplx>& inner) const {
    const std::size_t P = points.size();
    const long double t0 = static_cast<long double>(k0) * h;
    for (std::int64_t m = N; m-- > 0;) {
      const cplx w = c.hurwitz ? cplx{1.0, 0.0} : c.weights[static_cast<std::size_t>(m)];
      if (w == cplx{}) continue;
      const long double L = std::log(static_cast<long double>(m) + c.a);
      const cplx r = unit_phase_neg(h * L);
      for (std::size_t p = 0; p < P; ++p) {
        cplx u = c.coef * w * pow_neg(L, points[p].real(), static_cast<long double>(points[p].imag()) + t0);
        for (std::int64_t i = 0; i < count; ++i) {
          inner[static_cast<std::size_t>(i) * P + p] += u;
          u *= r;
        }
      }
    }
  }

  std::vector<PowerSumComponent> comps_;
  Options opt_;
  cplx hurwitz_sum_{};
  double coef_abs_ = 0.0;
  bool has_pole_ = false;
  long double log_q_ = 0.0L;
  mutable std::mutex cache_mu_;
  mutable std::vector<std::shared_ptr<const Table>> cache_;
};

// ---------------------------------------------------------------------------
// Factories.

/// zeta(s, alpha; B) through k^{-s} sum_l b_l zeta(s, (l+alpha)/k).
inline EvaluatorPtr make_periodic_evaluator(HurwitzParam alpha, const PeriodicSequence& b, double abs_tol,
                                            std::string name = "periodic_hurwitz_zeta") {
  std::vector<PowerSumComponent> comps;
  const std::size_t k = b.period();
  for (std::size_t l = 0; l < k; ++l) {
    if (b.coeffs()[l] == cplx{}) continue;
    PowerSumComponent c;
    c.coef = b.coeffs()[l];
    c.a = (static_cast<long double>(l) + alpha.alpha) / static_cast<long double>(k);
    comps.push_back(c);
  }
  PowerSumEvaluator::Options opt;
  opt.name = std::move(name);
  opt.prefactor_base = k;
  opt.sigma_min = 1.0 - 2.0 * detail::kEmOrder + 1.0;
  opt.abs_tol = abs_tol;
  return std::make_shared<PowerSumEvaluator>(std::move(comps), std::move(opt));
}

inline EvaluatorPtr make_riemann_evaluator(double abs_tol) {
  return make_periodic_evaluator(HurwitzParam(1.0), PeriodicSequence({cplx{1.0, 0.0}}), abs_tol, "riemann_zeta");
}

/// Strip-continuable evaluator for a built-in instance; the generic class has
/// no constructive continuation and is refused.
inline EvaluatorPtr make_instance_evaluator(const MatsumotoSpec& spec, double abs_tol) {
  switch (spec.instance) {
    case Instance::Riemann:
      return make_riemann_evaluator(abs_tol);
    case Instance::DirichletChi4:
      return make_periodic_evaluator(HurwitzParam(1.0), PeriodicSequence({1.0, 0.0, -1.0, 0.0}), abs_tol,
                                     "dirichlet_chi4");
    case Instance::Generic:
      break;
  }
  fail(ErrorKind::DomainError,
       "generic Euler products have no continuation into the strip; use the smoothed proxy");
}

/// phi_h = phi / prod_{p in P0} (local factor at p), for a built-in instance.
inline EvaluatorPtr make_partial_evaluator(const MatsumotoSpec& spec, const RationalShift& shift, double abs_tol) {
  const auto base = std::dynamic_pointer_cast<const PowerSumEvaluator>(make_instance_evaluator(spec, abs_tol));
  auto opt = base->options();
  opt.name += "_partial";
  opt.sigma_shift = spec.shift();
  for (std::uint64_t p : shift.P0) opt.removed.push_back({p, spec.roots(p)});
  return std::make_shared<PowerSumEvaluator>(base->components(), std::move(opt));
}

/// phi_n(s) = sum c_k v1(k, n) k^{-s} as a finite power sum, valid for sigma > 1/2.
/// The cut uses |c_k| <= B k^{1/4} and k^{1/4 - sigma} <= k^{-1/4}.
inline EvaluatorPtr make_smoothed_phi_evaluator(const MatsumotoSpec& spec, const SmoothingParam& smooth,
                                                double abs_tol) {
  smooth.validate();
  const double n = static_cast<double>(smooth.n);
  std::int64_t K = std::max<std::int64_t>(smooth.n, 16);
  std::vector<cplx> c;
  double tail = 0.0;
  for (;;) {
    c = dirichlet_coefficients(spec, static_cast<std::uint32_t>(K));
    double B = 0.0;
    for (std::int64_t k = 1; k <= K; ++k) {
      B = std::max(B, std::abs(c[static_cast<std::size_t>(k)]) * std::pow(static_cast<double>(k), -0.25));
    }
    const double Kd = static_cast<double>(K + 1);
    tail = B * std::pow(Kd, -0.25) * detail::stretched_exp_tail(Kd, n, smooth.sigma_star1);
    if (tail <= 0.25 * abs_tol) break;
    K *= 2;
  }
  PowerSumComponent comp;
  comp.hurwitz = false;
  comp.a = 1.0L;  // x_m = m + 1 = k
  comp.weights.resize(static_cast<std::size_t>(K));
  for (std::int64_t k = 1; k <= K; ++k) {
    comp.weights[static_cast<std::size_t>(k - 1)] =
        c[static_cast<std::size_t>(k)] * v1(static_cast<double>(k), n, smooth.sigma_star1);
  }
  while (!comp.weights.empty() && comp.weights.back() == cplx{}) comp.weights.pop_back();
  PowerSumEvaluator::Options opt;
  opt.name = "smoothed_phi_n";
  opt.sigma_min = 0.5;
  opt.extra_error = tail;
  opt.abs_tol = abs_tol;
  return std::make_shared<PowerSumEvaluator>(std::vector<PowerSumComponent>{comp}, std::move(opt));
}

/// zeta_n(s, alpha; B) as a finite power sum, valid for sigma > 1/2.
inline EvaluatorPtr make_smoothed_periodic_evaluator(HurwitzParam alpha, const PeriodicSequence& b,
                                                     const SmoothingParam& smooth, double abs_tol) {
  smooth.validate();
  const double X = static_cast<double>(smooth.n) + alpha.alpha;
  std::int64_t M = std::max<std::int64_t>(smooth.n, 16);
  auto tail = [&](std::int64_t m) {
    const double x0 = static_cast<double>(m) + alpha.alpha;
    return b.max_abs() * std::pow(x0, -0.5) * detail::stretched_exp_tail(x0, X, smooth.sigma_star1);
  };
  while (tail(M) > 0.25 * abs_tol) M *= 2;
  PowerSumComponent comp;
  comp.hurwitz = false;
  comp.a = alpha.alpha;
  comp.weights.resize(static_cast<std::size_t>(M));
  for (std::int64_t m = 0; m < M; ++m) {
    comp.weights[static_cast<std::size_t>(m)] =
        b[static_cast<std::uint64_t>(m)] * v2(static_cast<double>(m), static_cast<double>(smooth.n), alpha.alpha,
                                              smooth.sigma_star1);
  }
  PowerSumEvaluator::Options opt;
  opt.name = "smoothed_periodic_zeta_n";
  opt.sigma_min = 0.5;
  opt.extra_error = b.all_zero() ? 0.0 : tail(M);
  opt.abs_tol = abs_tol;
  return std::make_shared<PowerSumEvaluator>(std::vector<PowerSumComponent>{comp}, std::move(opt));
}

}  // namespace zetalab
