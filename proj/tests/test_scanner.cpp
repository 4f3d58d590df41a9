#include <gtest/gtest.h>

#include "zetalab/zetalab.hpp"

using namespace zetalab;

namespace {

ScanConfig small_config(std::int64_t N, double eps) {
  ScanConfig cfg;
  cfg.N = N;
  cfg.shift = shift_from_rational(2, 1);
  cfg.epsilon = eps;
  cfg.K1 = CompactGrid::disk({0.8, 0.0}, 0.03, 0.01);
  cfg.K2 = CompactGrid::disk({0.8, 0.0}, 0.03, 0.01);
  cfg.f1 = TargetSpec::exp_poly({0.1});
  cfg.f2 = TargetSpec::constant(1.5);
  cfg.eval_budget = {1e-9, std::int64_t{1} << 24};
  cfg.phi = make_riemann_evaluator(1e-9);
  cfg.zeta = make_periodic_evaluator(HurwitzParam(0.7548776662), PeriodicSequence({1.0, 2.0}), 1e-9);
  return cfg;
}

}  // namespace

TEST(SupDistance, ZeroAgainstItself) {
  const ConstantEvaluator c({0.25, -1.0});
  const auto grid = CompactGrid::disk({0.8, 0.0}, 0.05, 0.01);
  EXPECT_EQ(sup_distance(c, 17, 3.0L, TargetSpec::constant({0.25, -1.0}), grid), 0.0);
  EXPECT_NEAR(sup_distance(c, 0, 3.0L, TargetSpec::constant({1.25, -1.0}), grid), 1.0, 1e-15);
}

TEST(SupDistance, TabulatedSelfTargetAtShiftZero) {
  const auto f = make_riemann_evaluator(1e-11);
  const auto grid = CompactGrid::disk({0.8, 0.0}, 0.03, 0.01);
  const auto pts = grid.points();
  std::vector<cplx> vals;
  for (const cplx& p : pts) vals.push_back(f->at(p).value);
  const TargetSpec self = TargetSpec::tabulated(pts, vals);
  EXPECT_LT(sup_distance(*f, 0, 9.0L, self, grid), 1e-12);
}

TEST(Scan, HugeEpsilonHitsEverything) {
  ScanConfig cfg = small_config(200, 1e6);
  const ScanResult r = scan(cfg);
  EXPECT_EQ(r.hits, 201);
  EXPECT_EQ(r.density_den, 201);
  EXPECT_DOUBLE_EQ(r.density(), 1.0);
}

TEST(Scan, ConstantEvaluatorsGiveAllOrNothing) {
  ScanConfig cfg = small_config(50, 0.1);
  cfg.phi = std::make_shared<ConstantEvaluator>(std::exp(cplx{0.1, 0.0}));
  cfg.zeta = std::make_shared<ConstantEvaluator>(cplx{1.5, 0.0});
  EXPECT_EQ(scan(cfg).hits, 51);
  cfg.zeta = std::make_shared<ConstantEvaluator>(cplx{3.0, 0.0});
  EXPECT_EQ(scan(cfg).hits, 0);
}

TEST(Scan, HitsGrowWithEpsilon) {
  std::int64_t prev = -1;
  for (double eps : {0.3, 0.6, 0.8, 1.2}) {
    const std::int64_t h = scan(small_config(1000, eps)).hits;
    EXPECT_GE(h, prev);
    prev = h;
  }
}

TEST(Scan, SmallBaselineIsReproduced) {
  const ScanResult r = scan(small_config(1000, 0.8));
  EXPECT_EQ(r.hits, 14);
  EXPECT_EQ(r.best_k, 116);
  EXPECT_EQ(r.borderline, 0);
  ASSERT_EQ(r.density_series.size(), 3u);
  EXPECT_EQ(r.density_series[1].hits, 1);
}

TEST(Scan, BestShiftMatchesBruteForce) {
  ScanConfig cfg = small_config(60, 0.8);
  const auto [k, d] = best_shift(cfg);
  double best = std::numeric_limits<double>::infinity();
  std::int64_t best_k = -1;
  for (std::int64_t j = 0; j <= cfg.N; ++j) {
    const double m = std::max(sup_distance(*cfg.phi, j, cfg.shift.h, cfg.f1, cfg.K1),
                              sup_distance(*cfg.zeta, j, cfg.shift.h, cfg.f2, cfg.K2));
    if (m < best) {
      best = m;
      best_k = j;
    }
  }
  EXPECT_EQ(k, best_k);
  EXPECT_NEAR(d, best, 1e-8);
}

TEST(Scan, DeterministicAcrossWorkers) {
  ScanConfig a = small_config(3000, 0.8);
  ScanConfig b = a;
  b.workers = 3;
  const ScanResult ra = scan(a);
  const ScanResult rb = scan(b);
  EXPECT_EQ(ra.hits, rb.hits);
  EXPECT_EQ(ra.best_k, rb.best_k);
  EXPECT_EQ(ra.best_distance, rb.best_distance);
  ASSERT_EQ(ra.hit_rows.size(), rb.hit_rows.size());
  for (std::size_t i = 0; i < ra.hit_rows.size(); ++i) {
    EXPECT_EQ(ra.hit_rows[i].k, rb.hit_rows[i].k);
    EXPECT_EQ(ra.hit_rows[i].dist1, rb.hit_rows[i].dist1);
  }
}

TEST(Scan, CheckpointsAgreeWithShorterRuns) {
  const auto series = density_series(small_config(0, 0.8), {10, 100, 1000});
  ASSERT_EQ(series.size(), 3u);
  for (const auto& p : series) {
    EXPECT_EQ(p.hits, scan(small_config(p.N, 0.8)).hits) << "N=" << p.N;
  }
}

TEST(Scan, ZeroLengthScan) {
  const ScanResult r = scan(small_config(0, 0.8));
  EXPECT_EQ(r.density_den, 1);
  EXPECT_TRUE(r.density_series.empty());
}

TEST(Scan, ConfigErrors) {
  auto expect_kind = [](ScanConfig cfg, ErrorKind kind) {
    try {
      scan(cfg);
      ADD_FAILURE() << "no error";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind) << e.what();
    }
  };
  expect_kind(small_config(10, 0.0), ErrorKind::ConfigError);
  expect_kind(small_config(10, -1.0), ErrorKind::ConfigError);
  ScanConfig loose = small_config(10, 1e-9);
  expect_kind(loose, ErrorKind::ConfigError);  // abs_tol > epsilon / 10
  ScanConfig zero = small_config(10, 0.8);
  zero.f1 = TargetSpec::poly({-0.8, 1.0});  // vanishes at the disk centre
  expect_kind(zero, ErrorKind::InadmissibleTarget);
  ScanConfig bad_cp = small_config(10, 0.8);
  bad_cp.checkpoints = {5, 3};
  expect_kind(bad_cp, ErrorKind::ConfigError);
}

TEST(Metric, EdgeCases) {
  const auto grids = make_exhaustion(0.5, 1.0, 2.0, 3, 0.1);
  ASSERT_EQ(grids.size(), 3u);
  TupleSamples f(1), g(1);
  for (const auto& gr : grids) {
    const std::size_t n = gr.points().size();
    f[0].push_back(std::vector<cplx>(n, cplx{1.0, 0.0}));
    g[0].push_back(std::vector<cplx>(n, cplx{-1.0, 0.0}));
  }
  EXPECT_EQ(metric_rho(f, f, {grids}), 0.0);
  // |f - g| = 2 everywhere saturates every level.
  EXPECT_DOUBLE_EQ(metric_rho(f, g, {grids}), 0.5 + 0.25 + 0.125);
  TupleSamples short_g = g;
  short_g[0].pop_back();
  EXPECT_THROW(metric_rho(f, short_g, {grids}), Error);
  EXPECT_THROW(make_exhaustion(1.0, 0.5, 2.0, 3, 0.1), Error);
}

TEST(Metric, ExhaustionIsIncreasing) {
  const auto grids = make_exhaustion(0.5, 1.0, 2.0, 4, 0.05);
  for (std::size_t l = 1; l < grids.size(); ++l) {
    EXPECT_LT(grids[l].sigma_min, grids[l - 1].sigma_min);
    EXPECT_GT(grids[l].t_max, grids[l - 1].t_max);
    EXPECT_GT(grids[l].sigma_min, 0.5);
    EXPECT_LT(grids[l].sigma_max, 1.0);
  }
}

TEST(Lemma9, IdenticalTuplesGiveZeroAndSmoothingImproves) {
  Lemma9Config cfg;
  cfg.N = 4;
  cfg.exhaustion1 = make_exhaustion(0.5, 1.0, 1.0, 2, 0.1);
  cfg.exhaustion2 = make_exhaustion(0.5, 1.0, 1.0, 2, 0.1);
  const auto rows = lemma9_check(cfg, {0, 10, 1000});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].avg_rho, 0.0);
  EXPECT_GT(rows[1].avg_rho, rows[2].avg_rho);
  cfg.exhaustion2 = make_exhaustion(0.4, 1.0, 1.0, 2, 0.1);
  EXPECT_THROW(lemma9_check(cfg, {10}), Error);
}
