#include <gtest/gtest.h>

#include "zetalab/zetalab.hpp"

using namespace zetalab;

TEST(Stats, KolmogorovSmirnov) {
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(ks_two_sample({0, 1}, {5, 6}), 1.0);
  EXPECT_NEAR(ks_uniform({0.125, 0.375, 0.625, 0.875}), 0.125, 1e-15);
  EXPECT_THROW(ks_two_sample({}, {1.0}), Error);
}

TEST(Haar, ConstraintHoldsOnEverySample) {
  const RationalShift sh = shift_from_rational(12, 5);
  HaarSampler sampler(sh, {29, 8}, 7);
  OmegaSample w;
  for (int i = 0; i < 2000; ++i) {
    sampler.next(w);
    EXPECT_LE(constraint_residual(w, sh), 1e-12);
    EXPECT_LE(modulus_defect(w), 1e-14);
  }
}

TEST(Haar, SolvedCoordinateIsExactlyOneForShiftTwo) {
  const RationalShift sh = shift_from_rational(2, 1);
  HaarSampler sampler(sh, {29, 8}, 3);
  EXPECT_EQ(sampler.solved_prime(), 2u);
  for (int i = 0; i < 500; ++i) EXPECT_EQ(sampler.next().omega1_at(2), cplx(1.0, 0.0));
}

TEST(Haar, SameSeedSameSamples) {
  const RationalShift sh = shift_from_rational(6, 5);
  const OmegaSample a = sample_haar(sh, HurwitzParam(0.5), {13, 4}, 11);
  const OmegaSample b = sample_haar(sh, HurwitzParam(0.5), {13, 4}, 11);
  EXPECT_EQ(a.omega1, b.omega1);
  EXPECT_EQ(a.omega2, b.omega2);
}

TEST(Haar, FreeCoordinatesAreUniform) {
  const auto checks = check_haar(shift_from_rational(2, 1), 10000, 1);
  for (const auto& c : checks) EXPECT_TRUE(c.passed) << c.name << " " << c.measured;
}

TEST(Haar, TruncationMustCoverP0) {
  EXPECT_THROW(HaarSampler(shift_from_rational(12, 5), {3, 4}, 1), Error);
  const OmegaSample w = sample_haar(shift_from_rational(2, 1), HurwitzParam(0.5), {7, 2}, 1);
  EXPECT_THROW(w.omega1_at(11), Error);
  EXPECT_THROW(w.omega2_at(3), Error);
}

TEST(Orbit, StepAndInverseRoundTrip) {
  const RationalShift sh = shift_from_rational(12, 5);
  OrbitState st = start_orbit(sh, HurwitzParam(0.7548776662), Truncation{11, 4});
  const OmegaSample start = st.current;
  for (int i = 0; i < 37; ++i) st = ergodic_step(std::move(st));
  EXPECT_LE(constraint_residual(st.current, sh), 1e-10);
  for (int i = 0; i < 37; ++i) st = ergodic_step_inverse(std::move(st));
  for (std::size_t i = 0; i < start.omega1.size(); ++i) EXPECT_LT(std::abs(st.current.omega1[i] - start.omega1[i]), 1e-12);
  for (std::size_t m = 0; m < start.omega2.size(); ++m) EXPECT_LT(std::abs(st.current.omega2[m] - start.omega2[m]), 1e-12);
}

TEST(Orbit, DriftStaysSmall) {
  const auto c = check_orbit_drift(shift_from_rational(12, 5), HurwitzParam(0.7548776662), 100000, 1);
  EXPECT_TRUE(c.passed) << c.measured;
}

TEST(Orbit, StepMultipliesByPrimePowers) {
  // One step multiplies omega_1(p) by p^{-ih}; for p = 2 and shift (2,1) that is exactly 1.
  const RationalShift sh = shift_from_rational(2, 1);
  OrbitState st = start_orbit(sh, HurwitzParam(0.5), Truncation{5, 1});
  st = ergodic_step(std::move(st));
  EXPECT_EQ(st.current.omega1_at(2), cplx(1.0, 0.0));
  const cplx expect3 = unit_phase_neg(sh.h * std::log(3.0L));
  EXPECT_LT(std::abs(st.current.omega1_at(3) - expect3), 1e-14);
  const cplx expect_m1 = unit_phase_neg(sh.h * std::log(1.5L));
  EXPECT_LT(std::abs(st.current.omega2_at(1) - expect_m1), 1e-14);
}

TEST(Birkhoff, CatalogAveragesAgree) {
  const auto c = check_birkhoff(default_functionals(), shift_from_rational(2, 1), HurwitzParam(0.7548776662), 20000, 2048, 1);
  EXPECT_TRUE(c.passed) << c.note << " " << c.measured;
}

TEST(Birkhoff, ConstantFunctionalIsExact) {
  const BirkhoffResult r = birkhoff_average("one", shift_from_rational(2, 1), HurwitzParam(0.5), 100, 16, 1);
  EXPECT_EQ(r.time_avg, cplx(1.0, 0.0));
  EXPECT_EQ(r.space_avg, cplx(1.0, 0.0));
  EXPECT_THROW(birkhoff_average("no_such", shift_from_rational(2, 1), HurwitzParam(0.5), 100, 16, 1), Error);
}

TEST(OrbitVsHaar, KsShrinksWithLongerOrbit) {
  const DeskCheck d = orbit_haar_desk_check(std::exp(1.0) - 2.0, 4000, 10, 4000, 1);
  EXPECT_LT(d.ks_long, d.ks_short);
}

TEST(OrbitVsHaar, RejectsPointsLeftOfCriticalLine) {
  EXPECT_THROW(orbit_vs_haar(PeriodicSequence({1.0}), {0.4, 0.0}, shift_from_rational(2, 1), HurwitzParam(0.5), 10, 10,
                             SmoothingParam{}),
               Error);
}
