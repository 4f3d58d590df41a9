#include <gtest/gtest.h>

#include "zetalab/zetalab.hpp"

using namespace zetalab;

namespace {

// Reference values computed with mpmath at 30 digits.
struct HurwitzRef {
  double sigma, t, a;
  cplx value;
};

const HurwitzRef kHurwitz[] = {
    {2.0, 0.0, 0.3, {12.245364546107731, 0.0}},
    {0.5, 14.0, 0.75, {-0.48268055466097935, -2.095521410122233}},
    {-1.5, 3.0, 0.2, {0.22379535372087721, -0.22316956470039102}},
    {1.2, -25.0, 1.0, {0.59755602282617557, -0.14621142678226527}},
    {0.75, 1000.0, 0.7548776662, {-0.27433326107788715, -2.3557201836877874}},
};

const AccuracyBudget kTight{1e-12, std::int64_t{1} << 26};

}  // namespace

TEST(Hurwitz, MatchesReferenceValues) {
  for (const auto& r : kHurwitz) {
    const Evaluation e = hurwitz_zeta({r.sigma, r.t}, HurwitzParam(r.a), kTight);
    EXPECT_LT(std::abs(e.value - r.value), 1e-10) << "s=" << r.sigma << "+" << r.t << "i a=" << r.a;
    EXPECT_LT(e.abs_err_bound, 1e-10);
  }
}

TEST(Hurwitz, AlphaOneIsRiemann) {
  for (double t : {0.0, 5.0, 40.0}) {
    const ComplexPoint s{1.7, t};
    const cplx a = hurwitz_zeta(s, HurwitzParam(1.0), kTight).value;
    const cplx b = make_riemann_evaluator(1e-12)->at(1.7, t).value;
    EXPECT_LT(std::abs(a - b), 1e-11);
  }
}

TEST(Hurwitz, PoleAndParameterErrors) {
  EXPECT_THROW(hurwitz_zeta({1.0, 0.0}, HurwitzParam(0.5)), Error);
  EXPECT_THROW(HurwitzParam(0.0), Error);
  EXPECT_THROW(HurwitzParam(1.5), Error);
  try {
    hurwitz_zeta({1.0, 0.0}, HurwitzParam(0.5));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleAt1);
  }
}

TEST(PeriodicHurwitz, MatchesReferenceValues) {
  const PeriodicSequence b12({1.0, 2.0});
  const cplx v = periodic_hurwitz_zeta({0.8, 10.0}, HurwitzParam(0.7548776662), b12, kTight).value;
  EXPECT_LT(std::abs(v - cplx(-0.1051756907622234, 1.2533512163106842)), 1e-10);

  const PeriodicSequence alt({1.0, -1.0});
  const cplx w = periodic_hurwitz_zeta({0.8, 0.0}, HurwitzParam(0.5), alt, kTight).value;
  EXPECT_NEAR(w.real(), 1.2946964421488327, 1e-10);
  EXPECT_NEAR(w.imag(), 0.0, 1e-12);
}

TEST(PeriodicHurwitz, EntireCaseHasNoPole) {
  // Sum of coefficients is zero, so s = 1 is a regular point.
  const PeriodicSequence alt({1.0, -1.0});
  const Evaluation e = periodic_hurwitz_zeta({1.0, 0.0}, HurwitzParam(0.5), alt, kTight);
  EXPECT_TRUE(is_finite(e.value));
  EXPECT_THROW(periodic_hurwitz_zeta({1.0, 0.0}, HurwitzParam(0.5), PeriodicSequence({1.0, 2.0})), Error);
}

TEST(PeriodicHurwitz, CombinationAgreesWithSeries) {
  const PeriodicSequence b({1.0, cplx{0.0, 1.0}, -1.0});
  for (double sigma : {1.3, 2.2}) {
    for (double t : {-20.0, 0.0, 7.5}) {
      const cplx x = periodic_hurwitz_zeta({sigma, t}, HurwitzParam(0.3), b, kTight).value;
      const cplx y = periodic_hurwitz_zeta_series({sigma, t}, HurwitzParam(0.3), b, 4096, kTight).value;
      EXPECT_LT(std::abs(x - y), 1e-9);
    }
  }
}

TEST(PeriodicSequence, RejectsNonMinimalPeriod) {
  EXPECT_THROW(PeriodicSequence({1.0, 1.0}), Error);
  EXPECT_THROW(PeriodicSequence({1.0, 2.0, 1.0, 2.0}), Error);
  EXPECT_THROW(PeriodicSequence(std::vector<cplx>{}), Error);
  EXPECT_NO_THROW(PeriodicSequence({1.0, 2.0, 1.0}));
}

TEST(RiemannStrip, KnownValues) {
  const auto z = make_riemann_evaluator(1e-12);
  EXPECT_NEAR(z->at(0.8, 0.0L).value.real(), -4.4375384158955516, 1e-10);
  EXPECT_NEAR(z->at(1.5, 0.0L).value.real(), 2.6123753486854883, 1e-11);
  EXPECT_NEAR(z->at(4.0, 0.0L).value.real(), 1.0823232337111382, 1e-12);
  // First nontrivial zero.
  EXPECT_LT(std::abs(z->at(0.5, 14.134725141734693790L).value), 1e-9);
  // Far up the line along the scan progression k h with h = 2 pi / log 2.
  const cplx far = z->at(0.8, 9064.720283654387619255366L).value;
  EXPECT_LT(std::abs(far - cplx(3.167188268169009, 0.92050812772032153)), 1e-8);
}

TEST(RiemannStrip, BorweinAgreesWithEulerMaclaurin) {
  for (double t : {0.0, 2.0, 18.0}) {
    const cplx a = riemann_zeta_strip({0.7, t}, kTight).value;
    const cplx b = make_riemann_evaluator(1e-12)->at(0.7, t).value;
    EXPECT_LT(std::abs(a - b), 1e-9);
  }
}

TEST(Chi4, KnownValues) {
  const auto L = make_instance_evaluator(MatsumotoSpec::dirichlet_chi4(), 1e-12);
  EXPECT_NEAR(L->at(0.8, 0.0L).value.real(), 0.74360783665843898, 1e-10);
  EXPECT_NEAR(L->at(2.0, 0.0L).value.real(), 0.91596559417721902, 1e-11);
  EXPECT_NEAR(L->at(1.0, 0.0L).value.real(), kPi / 4.0, 1e-10);
}

TEST(Matsumoto, EulerProductApproachesSeries) {
  const MatsumotoSpec z = MatsumotoSpec::riemann();
  const cplx prod = matsumoto_product({2.0, 0.0}, z, 100000).value;
  EXPECT_NEAR(prod.real(), kPi * kPi / 6.0, 1e-5);
  const cplx series = matsumoto_series({3.0, 1.0}, z, {1e-10, std::int64_t{1} << 22}).value;
  const cplx ref = hurwitz_zeta({3.0, 1.0}, HurwitzParam(1.0), kTight).value;
  EXPECT_LT(std::abs(series - ref), 1e-9);
}

TEST(Matsumoto, SmoothedSeriesConverges) {
  const MatsumotoSpec chi = MatsumotoSpec::dirichlet_chi4();
  const cplx exact = make_instance_evaluator(chi, 1e-13)->at(2.0, 3.0L).value;
  double prev = 1e9;
  for (std::int64_t n : {10, 100, 1000}) {
    const cplx v = smoothed_phi_n({2.0, 3.0}, chi, SmoothingParam(n, 3.0), {1e-13, std::int64_t{1} << 22}).value;
    const double d = std::abs(v - exact);
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(MeanSquare, SigmaTwoMatchesZetaFour) {
  const auto z = make_riemann_evaluator(1e-10);
  const double ms = mean_square([&](ComplexPoint s) { return z->at(s.sigma, s.t).value; }, 2.0, 2000.0, 0.05);
  EXPECT_NEAR(ms / 1.0823232337111382, 1.0, 0.01);
}

TEST(Evaluator, TabulateMatchesPointwise) {
  const auto f = make_periodic_evaluator(HurwitzParam(0.7548776662), PeriodicSequence({1.0, 2.0}), 1e-11);
  const std::vector<cplx> pts = {{0.78, 0.01}, {0.8, 0.0}, {0.82, -0.02}};
  const long double h = kTwoPiL / std::log(2.0L);
  std::vector<cplx> tab;
  f->tabulate(pts, pts[1], h, 500, 40, tab);
  ASSERT_EQ(tab.size(), pts.size() * 40);
  for (std::int64_t i = 0; i < 40; i += 13) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const cplx direct = f->at(pts[j].real(), pts[j].imag() + static_cast<long double>(500 + i) * h).value;
      EXPECT_LT(std::abs(tab[static_cast<std::size_t>(i) * pts.size() + j] - direct), 1e-9);
    }
  }
}
