#pragma once

// Verification suites: numerical identities and the arithmetic/ergodic claims.
// Each check reports a measured value against a threshold.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "zetalab/arithmetic_h.hpp"
#include "zetalab/evaluators.hpp"
#include "zetalab/io.hpp"
#include "zetalab/matsumoto.hpp"
#include "zetalab/scanner.hpp"
#include "zetalab/special_functions.hpp"
#include "zetalab/stats.hpp"
#include "zetalab/torus.hpp"

namespace zetalab {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string note;
  double seconds = 0.0;
};

inline CheckResult make_check(std::string name, double measured, double threshold, std::string note = {}) {
  return {std::move(name), measured <= threshold, measured, threshold, std::move(note), 0.0};
}

struct PeriodicCase {
  double alpha;
  std::vector<cplx> b;
};

// ---------------------------------------------------------------------------
// Identities.

/// max |combination - series| over random points sigma in [s_lo, s_hi], |t| <= t_max.
inline CheckResult check_combination_vs_series(const std::vector<PeriodicCase>& cases, int points, std::uint64_t seed,
                                               double s_lo = 1.2, double s_hi = 2.5, double t_max = 30.0,
                                               double threshold = 1e-8) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> us(s_lo, s_hi), ut(-t_max, t_max);
  const AccuracyBudget acc{1e-12, std::int64_t{1} << 24};
  double worst = 0.0;
  for (const auto& c : cases) {
    const PeriodicSequence b(c.b);
    for (int i = 0; i < points; ++i) {
      const ComplexPoint s{us(rng), ut(rng)};
      const cplx x = periodic_hurwitz_zeta(s, HurwitzParam(c.alpha), b, acc).value;
      const cplx y = periodic_hurwitz_zeta_series(s, HurwitzParam(c.alpha), b, 4096, acc).value;
      worst = std::max(worst, std::abs(x - y));
    }
  }
  return make_check("combination_vs_series", worst, threshold,
                    std::to_string(points) + " points per coefficient set");
}

/// zeta(s, a) - zeta(s, a + 1) = a^{-s}, across the strip and beyond.
inline CheckResult check_hurwitz_recurrence(int points, std::uint64_t seed, double threshold = 1e-10) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> us(-1.5, 3.0), ut(-30.0, 30.0), ua(0.05, 1.0);
  const AccuracyBudget acc{1e-13, std::int64_t{1} << 24};
  const PeriodicSequence one({cplx{1.0, 0.0}});
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double sigma = us(rng), t = ut(rng), a = ua(rng);
    if (std::abs(sigma - 1.0) < 1e-3 && std::abs(t) < 1e-3) continue;
    const cplx lhs = detail::hurwitz_combination(sigma, t, a, one, acc).value -
                     detail::hurwitz_combination(sigma, t, a + 1.0, one, acc).value;
    const cplx rhs = pow_neg(std::log(static_cast<long double>(a)), sigma, t);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return make_check("hurwitz_recurrence", worst, threshold, "relative to max(1, |a^{-s}|)");
}

/// Truncated Euler product against the Dirichlet series on sigma in {1.5, 2, 3}.
/// Built-in instances sum the series by Euler-Maclaurin; generic specs use the
/// plain series with its coefficient-majorant tail. The second check compares
/// the same gap with the product's own truncation bound.
inline std::vector<CheckResult> check_euler_vs_dirichlet(const MatsumotoSpec& spec, std::uint64_t cutoff,
                                                         double threshold = 1e-6) {
  double worst = 0.0;
  double worst_ratio = 0.0;
  EvaluatorPtr exact;
  if (spec.instance != Instance::Generic) exact = make_instance_evaluator(spec, 1e-13);
  for (double sigma : {1.5, 2.0, 3.0}) {
    for (double t : {0.0, 5.0, 20.0}) {
      const ComplexPoint s{sigma, t};
      const Evaluation prod = matsumoto_product(s, spec, cutoff);
      const cplx series =
          exact ? exact->at(sigma, static_cast<long double>(t)).value : matsumoto_series(s, spec, {1e-9, std::int64_t{1} << 22}).value;
      const double gap = std::abs(prod.value - series);
      worst = std::max(worst, gap);
      worst_ratio = std::max(worst_ratio, gap / prod.abs_err_bound);
    }
  }
  return {make_check("euler_vs_dirichlet", worst, threshold, "prime cutoff " + std::to_string(cutoff)),
          make_check("euler_vs_dirichlet_within_tail_bound", worst_ratio, 1.0, "gap / product truncation bound")};
}

/// Limit of (s - 1) zeta(s, alpha; B) along four rays into s = 1, against
/// sum b / k. Each ray is sampled at distances r and r/2 and extrapolated
/// (2 f(r/2) - f(r)), which removes the linear term of the Laurent expansion.
inline CheckResult check_residue(const std::vector<PeriodicCase>& cases, double r = 1e-3, double threshold = 1e-5) {
  double worst = 0.0;
  const AccuracyBudget acc{1e-13, std::int64_t{1} << 24};
  for (const auto& c : cases) {
    const PeriodicSequence b(c.b);
    for (int dir = 0; dir < 4; ++dir) {
      auto f = [&](double dist) {
        const cplx d = dist * std::polar(1.0, kPi * 0.5 * dir);
        return d * periodic_hurwitz_zeta({1.0 + d.real(), d.imag()}, HurwitzParam(c.alpha), b, acc).value;
      };
      const cplx limit = 2.0 * f(0.5 * r) - f(r);
      worst = std::max(worst, std::abs(limit - b.residue()));
    }
  }
  return make_check("residue_limit", worst, threshold, "rays sampled at " + fmt_double(r) + " and " + fmt_double(0.5 * r));
}

inline CheckResult check_strip_consistency(double threshold = 1e-9) {
  double worst = 0.0;
  for (ComplexPoint s : {ComplexPoint{0.5, 14.134725141734695}, ComplexPoint{0.8, 0.0}, ComplexPoint{0.25, 40.0},
                         ComplexPoint{0.95, -7.5}}) {
    const cplx a = riemann_zeta_strip(s).value;
    const cplx b = hurwitz_zeta(s, HurwitzParam(1.0), {1e-13, std::int64_t{1} << 24}).value;
    worst = std::max(worst, std::abs(a - b));
  }
  return make_check("strip_borwein_vs_em", worst, threshold);
}

inline CheckResult check_zeta_two(double threshold = 1e-12) {
  const cplx v = hurwitz_zeta({2.0, 0.0}, HurwitzParam(1.0), {1e-14, std::int64_t{1} << 24}).value;
  return make_check("zeta_two", std::abs(v - kPi * kPi / 6.0), threshold);
}

// ---------------------------------------------------------------------------
// Claims.

struct IndexEntry {
  std::uint64_t a, b;
  CharacterIndex idx;
};

/// (K-3) indices k_p = r alpha_p on P0 for several r and l.
inline std::vector<IndexEntry> k3_catalog(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& shifts) {
  std::vector<IndexEntry> out;
  for (auto [a, b] : shifts) {
    const RationalShift sh = shift_from_rational(a, b);
    for (std::int64_t r : {-2, -1, 0, 1, 3}) {
      for (std::int64_t l : {0, 1, -2}) {
        CharacterIndex idx;
        for (auto [p, e] : sh.alpha) {
          if (r != 0) idx.k[p] = r * e;
        }
        idx.l = l;
        out.push_back({a, b, idx});
      }
    }
  }
  return out;
}

inline CheckResult check_claim1(const std::vector<IndexEntry>& catalog, const std::vector<std::int64_t>& Ns,
                                double alpha, double threshold = 1e-12) {
  double worst = 0.0;
  std::size_t used = 0;
  for (const auto& e : catalog) {
    const RationalShift sh = shift_from_rational(e.a, e.b);
    if (!k3_satisfied(e.idx, sh).first) fail(ErrorKind::PreconditionViolated, "catalog entry does not satisfy (K-3)");
    ++used;
    for (std::int64_t N : Ns) worst = std::max(worst, std::abs(fourier_g(N, e.idx, sh, alpha) - 1.0));
  }
  return make_check("claim1_exactness", worst, threshold, std::to_string(used) + " indices");
}

/// Default non-(K-3) indices on the shift (2, 1).
inline std::vector<IndexEntry> decay_catalog() {
  std::vector<IndexEntry> out;
  auto add = [&](std::map<std::uint64_t, std::int64_t> k, std::map<std::uint64_t, std::int64_t> lm, std::int64_t l) {
    CharacterIndex idx;
    idx.k = std::move(k);
    idx.l_m = std::move(lm);
    idx.l = l;
    out.push_back({2, 1, idx});
  };
  add({{3, 1}}, {}, 0);
  add({{5, 2}, {7, -1}}, {}, 0);
  add({}, {{0, 1}}, 0);
  add({}, {{1, 1}, {2, -1}}, 0);
  add({{2, 1}, {3, -1}}, {{0, 1}}, 1);
  return out;
}

/// |g_N| <= 2/((N+1)|1 - e^{-ihX}|) + 1e-12 at each N, and |g at the last N| < final_max.
/// Measured value: the largest excess over the bound (<= 0 passes) or the
/// final-size violation.
inline std::vector<CheckResult> check_fourier_decay(const std::vector<IndexEntry>& catalog,
                                                    const std::vector<std::int64_t>& Ns, double alpha,
                                                    double final_max = 0.05) {
  double excess = -std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (const auto& e : catalog) {
    const RationalShift sh = shift_from_rational(e.a, e.b);
    if (k3_satisfied(e.idx, sh).first) fail(ErrorKind::PreconditionViolated, "decay catalog entry satisfies (K-3)");
    for (std::int64_t N : Ns) {
      const double g = std::abs(fourier_g(N, e.idx, sh, alpha));
      excess = std::max(excess, g - (fourier_g_bound(N, e.idx, sh, alpha) + 1e-12));
    }
    last = std::max(last, std::abs(fourier_g(Ns.back(), e.idx, sh, alpha)));
  }
  CheckResult a = make_check("fourier_decay_bound", excess, 0.0, "largest |g| - bound");
  CheckResult b = make_check("fourier_decay_size", last, final_max, "max |g| at N = " + std::to_string(Ns.back()));
  b.passed = last < final_max;
  return {a, b};
}

/// Constraint residual, per-coordinate phase uniformity and exactness of a
/// solved coordinate with |alpha_p| = 1.
inline std::vector<CheckResult> check_haar(const RationalShift& shift, std::int64_t samples, std::uint64_t seed) {
  const Truncation tr{29, 8};
  HaarSampler sampler(shift, tr, seed);
  OmegaSample w;
  double resid = 0.0;
  std::int64_t inexact = 0;
  const std::uint64_t solved = sampler.solved_prime();
  const bool unit_solved = solved != 0 && std::abs(shift.alpha_of(solved)) == 1 && shift.alpha.size() == 1;
  std::vector<std::vector<double>> phases;
  std::vector<std::string> labels;
  for (std::int64_t i = 0; i < samples; ++i) {
    sampler.next(w);
    resid = std::max(resid, constraint_residual(w, shift));
    if (unit_solved && w.omega1_at(solved) != cplx{1.0, 0.0}) ++inexact;
    std::size_t c = 0;
    auto record = [&](cplx z, const std::string& label) {
      if (phases.size() <= c) {
        phases.emplace_back();
        labels.push_back(label);
      }
      double u = std::arg(z) / (2.0 * kPi);
      if (u < 0.0) u += 1.0;
      phases[c++].push_back(u);
    };
    for (std::size_t j = 0; j < w.primes.size(); ++j) {
      if (shift.alpha_of(w.primes[j]) == 0) record(w.omega1[j], "omega1(" + std::to_string(w.primes[j]) + ")");
    }
    for (std::size_t m = 0; m < w.omega2.size(); ++m) record(w.omega2[m], "omega2(" + std::to_string(m) + ")");
  }
  double ks = 0.0;
  std::string worst_label;
  for (std::size_t c = 0; c < phases.size(); ++c) {
    const double d = ks_uniform(phases[c]);
    if (d > ks) {
      ks = d;
      worst_label = labels[c];
    }
  }
  std::vector<CheckResult> out;
  out.push_back(make_check("haar_constraint_residual", resid, 1e-12, std::to_string(samples) + " samples"));
  CheckResult u = make_check("haar_phase_uniformity_ks", ks, 0.02, "worst coordinate " + worst_label);
  u.passed = ks < 0.02;
  out.push_back(u);
  if (unit_solved) {
    out.push_back(make_check("haar_solved_coordinate_exact", static_cast<double>(inexact), 0.0,
                             "omega1(" + std::to_string(solved) + ") == 1 on every sample"));
  }
  return out;
}

/// Largest constraint residual along Phi_h^k(w0), k <= N, from a Haar start.
inline CheckResult check_orbit_drift(const RationalShift& shift, HurwitzParam alpha, std::int64_t N, std::uint64_t seed) {
  Truncation tr{7, 4};
  if (!shift.P0.empty()) tr.prime_cutoff = std::max(tr.prime_cutoff, *shift.P0.rbegin());
  OrbitState st = start_orbit(shift, alpha, HaarSampler(shift, tr, seed).next());
  double worst = constraint_residual(st.current, shift);
  for (std::int64_t k = 1; k <= N; ++k) {
    st = ergodic_step(std::move(st));
    worst = std::max(worst, constraint_residual(st.current, shift));
  }
  return make_check("orbit_constraint_drift", worst, 1e-10, std::to_string(N) + " steps");
}

inline std::vector<std::string> default_functionals() {
  return {"one", "omega1:2", "omega1:3", "omega2:0", "omega2:3", "re_zeta_b:2", "re_phi:2"};
}

/// |time - space| <= 3 stderr + deterministic bound for every functional.
/// Measured value: the largest ratio |time - space| / (3 stderr + bound).
inline CheckResult check_birkhoff(const std::vector<std::string>& ids, const RationalShift& shift, HurwitzParam alpha,
                                  std::int64_t N, std::int64_t samples, std::uint64_t seed) {
  double worst = 0.0;
  std::string worst_id;
  for (const auto& id : ids) {
    const BirkhoffResult r = birkhoff_average(id, shift, alpha, N, samples, seed);
    const double allowed = 3.0 * r.std_error + r.deterministic_bound;
    const double gap = std::abs(r.time_avg - r.space_avg);
    const double ratio = allowed > 0.0 ? gap / allowed : (gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    if (ratio >= worst) {
      worst = ratio;
      worst_id = id;
    }
  }
  return make_check("birkhoff_time_vs_space", worst, 1.0, "worst functional " + worst_id);
}

struct DeskCheck {
  double ks_long = 0.0;
  double ks_short = 0.0;
};

inline DeskCheck orbit_haar_desk_check(double alpha, std::int64_t N_long, std::int64_t N_short, std::int64_t samples,
                                       std::uint64_t seed) {
  const PeriodicSequence b({cplx{1.0, 0.0}});
  const RationalShift sh = shift_from_rational(2, 1);
  OrbitVsHaarOptions opt;
  opt.seed = seed;
  DeskCheck d;
  d.ks_long = orbit_vs_haar(b, {1.5, 0.0}, sh, HurwitzParam(alpha), N_long, samples, SmoothingParam{}, opt).ks;
  d.ks_short = orbit_vs_haar(b, {1.5, 0.0}, sh, HurwitzParam(alpha), N_short, samples, SmoothingParam{}, opt).ks;
  return d;
}

/// (1/T) int_0^T |zeta(sigma0 + it)|^2 dt against zeta(2 sigma0).
inline CheckResult check_mean_square(double sigma0, double T, double rel_tol, double quad_step = 0.05) {
  const auto z = make_riemann_evaluator(1e-10);
  const double ms = mean_square([&](ComplexPoint s) { return z->at(s.sigma, static_cast<long double>(s.t)).value; },
                                sigma0, T, quad_step);
  const double ref = hurwitz_zeta({2.0 * sigma0, 0.0}, HurwitzParam(1.0)).value.real();
  return make_check("mean_square_sigma" + fmt_double(sigma0), std::abs(ms - ref) / ref, rel_tol,
                    "mean " + fmt_double(ms) + " vs zeta(2 sigma0) " + fmt_double(ref));
}

/// max |phi_n - phi| at sigma = 2 on a few ordinates.
inline CheckResult check_smoothing(const MatsumotoSpec& spec, std::int64_t n, double sigma_star1, double threshold = 1e-6) {
  double worst = 0.0;
  EvaluatorPtr exact;
  if (spec.instance != Instance::Generic) exact = make_instance_evaluator(spec, 1e-13);
  for (double t : {0.0, 3.0, 10.0, 25.0}) {
    const ComplexPoint s{2.0, t};
    const cplx a = smoothed_phi_n(s, spec, SmoothingParam(n, sigma_star1), {1e-12, std::int64_t{1} << 22}).value;
    const cplx b = exact ? exact->at(2.0, static_cast<long double>(t)).value
                         : matsumoto_series(s, spec, {1e-9, std::int64_t{1} << 22}).value;
    worst = std::max(worst, std::abs(a - b));
  }
  return make_check("smoothing_sigma2_n" + std::to_string(n), worst, threshold);
}

/// Orbit-averaged metric strictly decreasing in n. Measured value: the largest
/// ratio rho(n_{i+1}) / rho(n_i) (< 1 passes).
inline CheckResult check_lemma9(const std::vector<Lemma9Row>& rows) {
  double worst = 0.0;
  std::string note;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    note += (i ? ", " : "") + std::string("n=") + std::to_string(rows[i].n) + ": " + fmt_double(rows[i].avg_rho);
    if (i > 0) {
      const double ratio = rows[i - 1].avg_rho > 0.0 ? rows[i].avg_rho / rows[i - 1].avg_rho : std::numeric_limits<double>::infinity();
      worst = std::max(worst, ratio);
    }
  }
  CheckResult c = make_check("smoothing_metric_decreasing", worst, 1.0, note);
  c.passed = rows.size() >= 2 && worst < 1.0;
  return c;
}

// ---------------------------------------------------------------------------
// Suites driven by JSON (all keys optional).

namespace detail {

inline std::vector<PeriodicCase> parse_cases(const json& j, std::vector<PeriodicCase> dflt) {
  if (j.is_null()) return dflt;
  std::vector<PeriodicCase> out;
  for (const auto& e : j) out.push_back({e.at("alpha").get<double>(), parse_complex_list(e.at("B"))});
  return out;
}

inline std::vector<IndexEntry> parse_index_catalog(const json& j) {
  std::vector<IndexEntry> out;
  for (const auto& e : j) {
    IndexEntry ie{e.at("shift")[0].get<std::uint64_t>(), e.at("shift")[1].get<std::uint64_t>(), {}};
    if (e.contains("k")) {
      for (const auto& [p, v] : e.at("k").items()) ie.idx.k[std::stoull(p)] = v.get<std::int64_t>();
    }
    if (e.contains("l_m")) {
      for (const auto& [m, v] : e.at("l_m").items()) ie.idx.l_m[std::stoull(m)] = v.get<std::int64_t>();
    }
    ie.idx.l = e.value("l", std::int64_t{0});
    ie.idx.validate();
    out.push_back(ie);
  }
  return out;
}

template <class F>
void timed(std::vector<CheckResult>& out, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto rs = f();
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : rs) {
    r.seconds = dt / static_cast<double>(rs.size());
    out.push_back(std::move(r));
  }
}

}  // namespace detail

inline std::vector<PeriodicCase> default_identity_cases() {
  return {{0.7548776662, {1.0, 2.0}}, {0.5, {1.0, -1.0}}, {0.3, {1.0, cplx{0.0, 1.0}, -1.0}}};
}

inline std::vector<CheckResult> run_identities(const json& cfg, std::uint64_t seed) {
  return detail::config_guard("identities suite", [&] {
    const json j = cfg.value("identities", json::object());
    std::vector<CheckResult> out;
    const auto cases = detail::parse_cases(j.value("cases", json()), default_identity_cases());
    const int points = j.value("points", 20);
    detail::timed(out, [&] { return std::vector{check_combination_vs_series(cases, points, seed)}; });
    detail::timed(out, [&] { return std::vector{check_hurwitz_recurrence(points, seed + 1)}; });
    detail::timed(out, [&] {
      return check_euler_vs_dirichlet(MatsumotoSpec::riemann(), j.value("euler_cutoff", std::uint64_t{100000}));
    });
    detail::timed(out, [&] { return std::vector{check_residue(detail::parse_cases(j.value("residue_cases", json()), default_identity_cases()))}; });
    detail::timed(out, [&] { return std::vector{check_strip_consistency()}; });
    detail::timed(out, [&] { return std::vector{check_zeta_two()}; });
    return out;
  });
}

inline std::vector<CheckResult> run_claims(const json& cfg, std::uint64_t seed) {
  return detail::config_guard("claims suite", [&] {
    const json j = cfg.value("claims", json::object());
    std::vector<CheckResult> out;
    const double alpha = j.value("alpha", 0.7548776662);
    const auto k3 = j.contains("k3_catalog") ? detail::parse_index_catalog(j.at("k3_catalog"))
                                             : k3_catalog({{2, 1}, {6, 5}, {12, 5}});
    const auto decay = j.contains("decay_catalog") ? detail::parse_index_catalog(j.at("decay_catalog")) : decay_catalog();
    detail::timed(out, [&] { return std::vector{check_claim1(k3, {10, 100, 1000}, alpha)}; });
    detail::timed(out, [&] { return check_fourier_decay(decay, {100, 1000, 10000}, alpha); });
    const RationalShift sh = shift_from_rational(2, 1);
    detail::timed(out, [&] { return check_haar(sh, j.value("haar_samples", std::int64_t{10000}), seed); });
    const std::int64_t N = j.value("orbit_steps", std::int64_t{100000});
    detail::timed(out, [&] { return std::vector{check_orbit_drift(shift_from_rational(12, 5), HurwitzParam(alpha), N, seed)}; });
    detail::timed(out, [&] {
      return std::vector{check_birkhoff(j.value("functionals", default_functionals()), sh, HurwitzParam(alpha), N,
                                        j.value("birkhoff_samples", std::int64_t{4096}), seed)};
    });
    detail::timed(out, [&] {
      const DeskCheck d = orbit_haar_desk_check(j.value("desk_alpha", alpha), 10000, 10, 10000, seed);
      CheckResult a = make_check("orbit_vs_haar_ks", d.ks_long, 0.05, "alpha " + fmt_double(j.value("desk_alpha", alpha)));
      a.passed = d.ks_long < 0.05;
      CheckResult b = make_check("orbit_vs_haar_ks_decreases", d.ks_long - d.ks_short, 0.0, "KS(N=1e4) - KS(N=10)");
      b.passed = d.ks_long < d.ks_short;
      return std::vector{a, b};
    });
    detail::timed(out, [&] {
      return std::vector{check_mean_square(0.75, 5000.0, 0.10), check_mean_square(2.0, 2000.0, 0.01)};
    });
    detail::timed(out, [&] {
      return std::vector{check_smoothing(MatsumotoSpec::dirichlet_chi4(), 1000, j.value("sigma_star1", 3.0))};
    });
    if (j.contains("lemma9")) {
      detail::timed(out, [&] {
        const Lemma9Job job = parse_lemma9(j.at("lemma9"), 1);
        return std::vector{check_lemma9(lemma9_check(job.config, job.n_values))};
      });
    }
    return out;
  });
}

inline json checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"passed", c.passed},
                   {"measured", c.measured},
                   {"threshold", c.threshold},
                   {"note", c.note}});
  }
  return arr;
}

}  // namespace zetalab
