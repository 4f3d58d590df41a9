#include <gtest/gtest.h>

#include "zetalab/zetalab.hpp"

using namespace zetalab;

TEST(Primes, SieveAndFactorization) {
  const auto ps = primes_up_to(30);
  EXPECT_EQ(ps, (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
  EXPECT_TRUE(is_prime(1000003));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(1000001));
  const auto f = factorize(360);
  EXPECT_EQ(f, (std::map<std::uint64_t, int>{{2, 3}, {3, 2}, {5, 1}}));
}

TEST(RationalShift, ExponentsAndStepLength) {
  const RationalShift s = shift_from_rational(12, 5);
  EXPECT_EQ(s.alpha_of(2), 2);
  EXPECT_EQ(s.alpha_of(3), 1);
  EXPECT_EQ(s.alpha_of(5), -1);
  EXPECT_EQ(s.alpha_of(7), 0);
  EXPECT_EQ(s.P0, (std::set<std::uint64_t>{2, 3, 5}));
  EXPECT_NEAR(static_cast<double>(s.h), 2.0 * kPi / std::log(2.4), 1e-13);
  EXPECT_EQ(reconstruct(s), (std::pair<std::uint64_t, std::uint64_t>{12, 5}));

  const RationalShift two = shift_from_rational(2, 1);
  EXPECT_NEAR(two.h_double(), 9.064720283654388, 1e-13);
  EXPECT_TRUE(two.P2.empty());
}

TEST(RationalShift, RejectsBadInput) {
  try {
    shift_from_rational(4, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCoprime);
  }
  try {
    shift_from_rational(3, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotGreater);
  }
  EXPECT_THROW(shift_from_rational(1, 1), Error);
}

TEST(K3, Recognition) {
  const RationalShift s = shift_from_rational(12, 5);
  CharacterIndex idx;
  idx.k = {{2, 4}, {3, 2}, {5, -2}};
  auto [ok, r] = k3_satisfied(idx, s);
  EXPECT_TRUE(ok);
  EXPECT_EQ(r, 2);

  idx.k[3] = 1;  // ratios disagree
  EXPECT_FALSE(k3_satisfied(idx, s).first);

  CharacterIndex off;
  off.k = {{7, 1}};  // prime outside P0
  EXPECT_FALSE(k3_satisfied(off, s).first);

  CharacterIndex hurwitz;
  hurwitz.l_m = {{0, 1}};
  EXPECT_FALSE(k3_satisfied(hurwitz, s).first);

  CharacterIndex trivial;
  trivial.l = 5;
  EXPECT_TRUE(k3_satisfied(trivial, s).first);
}

TEST(FourierG, Claim1IsExactForK3Indices) {
  for (const auto& e : k3_catalog({{2, 1}, {6, 5}, {12, 5}})) {
    const RationalShift sh = shift_from_rational(e.a, e.b);
    for (std::int64_t N : {10, 100, 1000}) {
      EXPECT_LT(std::abs(fourier_g(N, e.idx, sh, 0.7548776662) - 1.0), 1e-12);
    }
  }
}

TEST(FourierG, DecaysWithinGeometricBound) {
  for (const auto& e : decay_catalog()) {
    const RationalShift sh = shift_from_rational(e.a, e.b);
    EXPECT_TRUE(claim2_certificate(e.idx, sh, 0.7548776662));
    for (std::int64_t N : {100, 1000, 10000}) {
      const double g = std::abs(fourier_g(N, e.idx, sh, 0.7548776662));
      EXPECT_LE(g, fourier_g_bound(N, e.idx, sh, 0.7548776662) + 1e-12);
    }
  }
}

TEST(FourierG, ClosedFormMatchesDirectSum) {
  const RationalShift sh = shift_from_rational(2, 1);
  CharacterIndex idx;
  idx.k = {{3, 1}};
  const long double theta = sh.h * std::log(3.0L);
  cplx direct{};
  for (int k = 0; k <= 50; ++k) direct += unit_phase_neg(static_cast<long double>(k) * theta);
  direct /= 51.0;
  EXPECT_LT(std::abs(fourier_g(50, idx, sh, 0.5) - direct), 1e-13);
  EXPECT_EQ(fourier_g(0, idx, sh, 0.5), cplx(1.0, 0.0));
  EXPECT_THROW(fourier_g(-1, idx, sh, 0.5), Error);
}

TEST(FourierG, Claim2RejectsK3Index) {
  const RationalShift sh = shift_from_rational(2, 1);
  CharacterIndex idx;
  idx.k = {{2, 3}};
  EXPECT_THROW(claim2_certificate(idx, sh, 0.5), Error);
  EXPECT_TRUE(std::isinf(fourier_g_bound(100, idx, sh, 0.5)));
}
