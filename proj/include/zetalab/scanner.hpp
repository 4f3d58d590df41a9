#pragma once

// Discrete-shift scanning: sup-distances of shifted evaluators to targets on
// finite grids, hit counting, densities and the exhaustion metric.
//
// Determinism: shifts are processed in blocks aligned to absolute k, so each
// per-shift distance depends only on k, never on which worker ran it. The
// reduction over k is sequential.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "zetalab/arithmetic_h.hpp"
#include "zetalab/core.hpp"
#include "zetalab/evaluators.hpp"
#include "zetalab/grid.hpp"
#include "zetalab/stats.hpp"

namespace zetalab {

/// max_j |f(p_j + i k h) - target(p_j)|, evaluated pointwise.
inline double sup_distance(const Evaluator& f, std::int64_t k, long double h, const TargetSpec& target,
                           const CompactGrid& grid, double* err_bound = nullptr) {
  const auto pts = grid.points();
  const long double shift = static_cast<long double>(k) * h;
  f.require_valid(pts, static_cast<double>(std::min(0.0L, shift)), static_cast<double>(std::max(0.0L, shift)));
  double d = 0.0;
  double err = 0.0;
  for (const cplx& p : pts) {
    const Evaluation e = f.at(p.real(), static_cast<long double>(p.imag()) + shift);
    d = std::max(d, std::abs(e.value - target(p)));
    err = std::max(err, e.abs_err_bound);
  }
  if (err_bound) *err_bound = err;
  return d;
}

struct ScanConfig {
  std::int64_t N = 0;
  RationalShift shift;
  double epsilon = 0.0;
  CompactGrid K1, K2;
  TargetSpec f1, f2;
  EvaluatorPtr phi, zeta;  // built with eval_budget.abs_tol
  AccuracyBudget eval_budget;
  std::vector<std::int64_t> checkpoints;  // empty: powers of ten up to N
  std::size_t workers = 1;
  std::int64_t block = 256;
  bool record_hits = true;

  void validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail(ErrorKind::ConfigError, "epsilon must be positive");
    eval_budget.validate();
    if (eval_budget.abs_tol > epsilon / 10.0) fail(ErrorKind::ConfigError, "eval abs_tol must be at most epsilon/10");
    if (N < 0) fail(ErrorKind::ConfigError, "N must be non-negative");
    if (block < 1) fail(ErrorKind::ConfigError, "block size must be positive");
    if (!phi || !zeta) fail(ErrorKind::ConfigError, "scan needs both evaluators");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      if (checkpoints[i] < 0 || checkpoints[i] > N) fail(ErrorKind::ConfigError, "checkpoints must lie in [0, N]");
      if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) fail(ErrorKind::ConfigError, "checkpoints must ascend");
    }
  }

  std::vector<std::int64_t> resolved_checkpoints() const {
    if (!checkpoints.empty()) return checkpoints;
    std::vector<std::int64_t> out;
    for (std::int64_t c = 10; c <= N; c *= 10) {
      out.push_back(c);
      if (c > std::numeric_limits<std::int64_t>::max() / 10) break;
    }
    return out;
  }
};

struct HitRow {
  std::int64_t k;
  double dist1, dist2;
};

struct DensityPoint {
  std::int64_t N;
  std::int64_t hits;
  double density;
};

struct ScanResult {
  std::int64_t hits = 0;
  std::int64_t density_num = 0;
  std::int64_t density_den = 1;
  std::int64_t best_k = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  std::int64_t borderline = 0;
  double max_error = 0.0;  // largest evaluator error bound seen
  std::vector<DensityPoint> density_series;
  std::vector<HitRow> hit_rows;

  double density() const { return static_cast<double>(density_num) / static_cast<double>(density_den); }
};

namespace detail {

/// Runs body(b) for b in [0, n_blocks) on `workers` threads; rethrows the
/// exception of the lowest failing block.
template <class Body>
void for_blocks(std::int64_t n_blocks, std::size_t workers, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_blocks));
  std::atomic<std::int64_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        body(b);
      } catch (...) {
        errors[static_cast<std::size_t>(b)] = std::current_exception();
      }
    }
  };
  const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(workers, static_cast<std::size_t>(n_blocks)));
  if (w == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < w; ++i) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline void check_targets(const ScanConfig& cfg) {
  if (!target_admissible(cfg.f1, cfg.K1, GridRole::K1)) fail(ErrorKind::InadmissibleTarget, "f1 vanishes on K1");
  if (!target_admissible(cfg.f2, cfg.K2, GridRole::K2)) fail(ErrorKind::InadmissibleTarget, "f2 is not admissible on K2");
}

}  // namespace detail

/// Per-shift sup-distances for k = 0..N, in k order.
struct ShiftDistances {
  std::vector<double> d1, d2;
  double max_error = 0.0;
};

inline ShiftDistances shift_distances(const ScanConfig& cfg) {
  cfg.validate();
  detail::check_targets(cfg);
  const auto p1 = cfg.K1.points();
  const auto p2 = cfg.K2.points();
  const long double h = cfg.shift.h;
  const double t_hi = static_cast<double>(static_cast<long double>(cfg.N) * h);
  cfg.phi->require_valid(p1, 0.0, t_hi);
  cfg.zeta->require_valid(p2, 0.0, t_hi);
  const auto v1 = cfg.f1.values_on(p1);
  const auto v2 = cfg.f2.values_on(p2);

  ShiftDistances out;
  const std::size_t total = static_cast<std::size_t>(cfg.N + 1);
  out.d1.assign(total, 0.0);
  out.d2.assign(total, 0.0);
  const std::int64_t n_blocks = (cfg.N + cfg.block) / cfg.block;
  std::vector<double> block_err(static_cast<std::size_t>(n_blocks), 0.0);

  detail::for_blocks(n_blocks, cfg.workers, [&](std::int64_t b) {
    const std::int64_t k0 = b * cfg.block;
    const std::int64_t count = std::min(cfg.block, cfg.N + 1 - k0);
    std::vector<cplx> tab;
    double err = 0.0;
    auto fill = [&](const Evaluator& f, const std::vector<cplx>& pts, const CompactGrid& g, const std::vector<cplx>& tv,
                    std::vector<double>& dst) {
      err = std::max(err, f.tabulate(pts, g.anchor(), h, k0, count, tab));
      const std::size_t P = pts.size();
      for (std::int64_t i = 0; i < count; ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < P; ++j) d = std::max(d, std::abs(tab[static_cast<std::size_t>(i) * P + j] - tv[j]));
        dst[static_cast<std::size_t>(k0 + i)] = d;
      }
    };
    fill(*cfg.phi, p1, cfg.K1, v1, out.d1);
    fill(*cfg.zeta, p2, cfg.K2, v2, out.d2);
    block_err[static_cast<std::size_t>(b)] = err;
  });
  for (double e : block_err) out.max_error = std::max(out.max_error, e);
  return out;
}

/// Reduction of per-shift distances; pure function of its inputs.
inline ScanResult reduce_scan(const ShiftDistances& sd, double epsilon, double abs_tol,
                              const std::vector<std::int64_t>& checkpoints, bool record_hits) {
  ScanResult r;
  const std::int64_t N = static_cast<std::int64_t>(sd.d1.size()) - 1;
  const double band = 2.0 * std::max(abs_tol, sd.max_error);
  r.max_error = sd.max_error;
  std::size_t next_cp = 0;
  for (std::int64_t k = 0; k <= N; ++k) {
    const double a = sd.d1[static_cast<std::size_t>(k)];
    const double b = sd.d2[static_cast<std::size_t>(k)];
    if (a < epsilon && b < epsilon) {
      ++r.hits;
      if (record_hits) r.hit_rows.push_back({k, a, b});
    }
    const bool flip1 = std::abs(a - epsilon) <= band && b < epsilon + band;
    const bool flip2 = std::abs(b - epsilon) <= band && a < epsilon + band;
    if (flip1 || flip2) ++r.borderline;
    const double m = std::max(a, b);
    if (m < r.best_distance) {
      r.best_distance = m;
      r.best_k = k;
    }
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == k) {
      r.density_series.push_back({k, r.hits, static_cast<double>(r.hits) / static_cast<double>(k + 1)});
      ++next_cp;
    }
  }
  r.density_num = r.hits;
  r.density_den = N + 1;
  return r;
}

inline ScanResult scan(const ScanConfig& cfg) {
  const ShiftDistances sd = shift_distances(cfg);
  return reduce_scan(sd, cfg.epsilon, cfg.eval_budget.abs_tol, cfg.resolved_checkpoints(), cfg.record_hits);
}

/// Densities hits_c/(c+1) at each checkpoint from a single pass up to the last one.
inline std::vector<DensityPoint> density_series(ScanConfig cfg, const std::vector<std::int64_t>& checkpoints) {
  if (checkpoints.empty()) return {};
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) fail(ErrorKind::ConfigError, "checkpoints must ascend");
  }
  cfg.N = checkpoints.back();
  cfg.checkpoints = checkpoints;
  cfg.record_hits = false;
  return scan(cfg).density_series;
}

inline std::pair<std::int64_t, double> best_shift(ScanConfig cfg) {
  cfg.record_hits = false;
  const ScanResult r = scan(cfg);
  return {r.best_k, r.best_distance};
}

// ---------------------------------------------------------------------------
// Exhaustion metric.

/// samples[component][level][point]
using TupleSamples = std::vector<std::vector<std::vector<cplx>>>;

/// Component metric sum_l 2^{-l} min(1, sup_{K_l} |f - g|), l = 1, 2, ...
inline double component_rho(const std::vector<std::vector<cplx>>& f, const std::vector<std::vector<cplx>>& g) {
  if (f.size() != g.size()) fail(ErrorKind::ShapeMismatch, "exhaustion level counts differ");
  double rho = 0.0;
  double w = 0.5;
  for (std::size_t l = 0; l < f.size(); ++l, w *= 0.5) {
    if (f[l].size() != g[l].size()) fail(ErrorKind::ShapeMismatch, "grid sample sizes differ");
    double sup = 0.0;
    for (std::size_t j = 0; j < f[l].size(); ++j) sup = std::max(sup, std::abs(f[l][j] - g[l][j]));
    rho += w * std::min(1.0, sup);
  }
  return rho;
}

/// Max of the component metrics. `exhaustion[c]` lists the grids of component c,
/// used to check the sample shapes.
inline double metric_rho(const TupleSamples& f, const TupleSamples& g,
                         const std::vector<std::vector<CompactGrid>>& exhaustion) {
  if (f.size() != g.size() || f.size() != exhaustion.size()) fail(ErrorKind::ShapeMismatch, "component counts differ");
  double rho = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    if (f[c].size() != exhaustion[c].size()) fail(ErrorKind::ShapeMismatch, "level count differs from exhaustion");
    for (std::size_t l = 0; l < f[c].size(); ++l) {
      if (f[c][l].size() != exhaustion[c][l].points().size()) fail(ErrorKind::ShapeMismatch, "samples do not match grid");
    }
    rho = std::max(rho, component_rho(f[c], g[c]));
  }
  return rho;
}

/// Rectangles K_l = [lo + d_l, hi - d_l] x [-M (1 - 2^{-l}), M (1 - 2^{-l})],
/// d_l = (hi - lo) 2^{-(l+1)}, l = 1..levels; they increase to the open region.
inline std::vector<CompactGrid> make_exhaustion(double lo, double hi, double M, int levels, double mesh) {
  if (!(lo < hi) || !(M > 0.0) || levels < 1) fail(ErrorKind::InvalidArgument, "bad exhaustion region");
  std::vector<CompactGrid> out;
  for (int l = 1; l <= levels; ++l) {
    const double d = (hi - lo) * std::ldexp(1.0, -(l + 1));
    const double tm = M * (1.0 - std::ldexp(1.0, -l));
    out.push_back(CompactGrid::rectangle(lo + d, hi - d, -tm, tm, mesh));
  }
  return out;
}

struct Lemma9Config {
  MatsumotoSpec spec = MatsumotoSpec::dirichlet_chi4();
  HurwitzParam alpha{0.5};
  PeriodicSequence b{std::vector<cplx>{cplx{1.0, 0.0}, cplx{-1.0, 0.0}}};
  RationalShift shift = shift_from_rational(2, 1);
  std::int64_t N = 32;
  std::vector<CompactGrid> exhaustion1;  // inside the phi strip
  std::vector<CompactGrid> exhaustion2;  // inside 1/2 < sigma < 1
  double sigma_star1_phi = 3.0;
  double sigma_star1_zeta = 2.0;
  double abs_tol = 1e-10;
  std::size_t workers = 1;
};

struct Lemma9Row {
  std::int64_t n;
  double avg_rho;
};

namespace detail {

/// tab[level][k * P + j] for k = 0..N.
inline std::vector<std::vector<cplx>> tabulate_levels(const Evaluator& f, const std::vector<CompactGrid>& grids,
                                                      long double h, std::int64_t N) {
  std::vector<std::vector<cplx>> out(grids.size());
  for (std::size_t l = 0; l < grids.size(); ++l) {
    const auto pts = grids[l].points();
    f.require_valid(pts, 0.0, static_cast<double>(static_cast<long double>(N) * h));
    f.tabulate(pts, grids[l].anchor(), h, 0, N + 1, out[l]);
  }
  return out;
}

}  // namespace detail

/// Orbit average (1/(N+1)) sum_k rho(Z(s + ikh), Z_n(s + ikh)) for each n;
/// n = 0 compares the exact tuple with itself.
inline std::vector<Lemma9Row> lemma9_check(const Lemma9Config& cfg, const std::vector<std::int64_t>& n_values) {
  if (cfg.N < 0) fail(ErrorKind::ConfigError, "N must be non-negative");
  if (cfg.exhaustion1.empty() || cfg.exhaustion2.empty()) fail(ErrorKind::ConfigError, "exhaustions must be non-empty");
  for (const auto& g : cfg.exhaustion2) {
    if (!g.inside_strip(0.5, 1.0)) fail(ErrorKind::DomainError, "zeta exhaustion must lie in 1/2 < sigma < 1");
  }
  const long double h = cfg.shift.h;
  const auto exact_phi = make_instance_evaluator(cfg.spec, cfg.abs_tol);
  const auto exact_zeta = make_periodic_evaluator(cfg.alpha, cfg.b, cfg.abs_tol);
  const auto e1 = detail::tabulate_levels(*exact_phi, cfg.exhaustion1, h, cfg.N);
  const auto e2 = detail::tabulate_levels(*exact_zeta, cfg.exhaustion2, h, cfg.N);
  std::vector<std::size_t> np1, np2;
  for (const auto& g : cfg.exhaustion1) np1.push_back(g.points().size());
  for (const auto& g : cfg.exhaustion2) np2.push_back(g.points().size());

  std::vector<Lemma9Row> rows(n_values.size());
  detail::for_blocks(static_cast<std::int64_t>(n_values.size()), cfg.workers, [&](std::int64_t idx) {
    const std::int64_t n = n_values[static_cast<std::size_t>(idx)];
    if (n < 0) fail(ErrorKind::ConfigError, "n must be non-negative");
    std::vector<std::vector<cplx>> s1 = e1, s2 = e2;
    if (n > 0) {
      s1 = detail::tabulate_levels(*make_smoothed_phi_evaluator(cfg.spec, SmoothingParam(n, cfg.sigma_star1_phi), cfg.abs_tol),
                                   cfg.exhaustion1, h, cfg.N);
      s2 = detail::tabulate_levels(
          *make_smoothed_periodic_evaluator(cfg.alpha, cfg.b, SmoothingParam(n, cfg.sigma_star1_zeta), cfg.abs_tol),
          cfg.exhaustion2, h, cfg.N);
    }
    std::vector<double> rho(static_cast<std::size_t>(cfg.N + 1));
    auto slice = [](const std::vector<std::vector<cplx>>& tab, const std::vector<std::size_t>& np, std::int64_t k) {
      std::vector<std::vector<cplx>> out(tab.size());
      for (std::size_t l = 0; l < tab.size(); ++l) {
        const auto first = tab[l].begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(k) * np[l]);
        out[l].assign(first, first + static_cast<std::ptrdiff_t>(np[l]));
      }
      return out;
    };
    for (std::int64_t k = 0; k <= cfg.N; ++k) {
      const double r1 = component_rho(slice(e1, np1, k), slice(s1, np1, k));
      const double r2 = component_rho(slice(e2, np2, k), slice(s2, np2, k));
      rho[static_cast<std::size_t>(k)] = std::max(r1, r2);
    }
    rows[static_cast<std::size_t>(idx)] = {n, mean_of(rho)};
  });
  return rows;
}

}  // namespace zetalab
