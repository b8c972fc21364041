#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "avt/special.hpp"
#include "gen.hpp"

using namespace avt;

TEST(LogGamma, KnownValues) {
  EXPECT_NEAR(log_gamma(1.0), 0.0, 1e-15);
  EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-14);
  EXPECT_NEAR(log_gamma(10.0), std::log(362880.0), 1e-12);
  EXPECT_THROW(log_gamma(0.0), Error);
}

TEST(VolBall, LowDimensions) {
  EXPECT_NEAR(vol_ball(1), 2.0, 1e-14);
  EXPECT_NEAR(vol_ball(2), std::numbers::pi, 1e-14);
  EXPECT_NEAR(vol_ball(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
  EXPECT_THROW(vol_ball(0), Error);
}

TEST(Hyp2f1, ClosedFormsAndOracles) {
  EXPECT_NEAR(hyp2f1_avt(1.0, 1.0), 0.5 * (std::sqrt(2.0) + std::asinh(1.0)), 1e-12);
  EXPECT_NEAR(hyp2f1_avt(1.0, 1.0), 1.147793574696319, 1e-12);
  EXPECT_NEAR(hyp2f1_avt(2.0, 5.0), 1.2666666666666667, 1e-12);
  EXPECT_NEAR(hyp2f1_avt(0.3, 4.0), 2.0899356556919733, 1e-11);
  EXPECT_NEAR(hyp2f1_avt(3.0, 7.0), 1.2080319485803573, 1e-12);
  EXPECT_DOUBLE_EQ(hyp2f1_avt(0.7, 0.0), 1.0);
}

TEST(Hyp2f1, SmallMLimit) {
  // (m + 1) F(m, I) -> sqrt(I) + 1 as m -> 0.
  for (double fisher : {1.0, 9.0, 100.0}) {
    const double m = 1e-6;
    EXPECT_NEAR((m + 1.0) * hyp2f1_avt(m, fisher), std::sqrt(fisher) + 1.0, 1e-4 * (std::sqrt(fisher) + 1.0));
  }
}

TEST(Hyp2f1, RejectsBadArguments) {
  EXPECT_THROW(hyp2f1_avt(0.0, 1.0), Error);
  EXPECT_THROW(hyp2f1_avt(1.0, -1.0), Error);
}

TEST(Hyp2f1Property, BoundedBySqrtIPlusM) {
  // m <= m F(m, I) <= sqrt(I) + m, since sqrt(I s^2 + m^2) lies between m and
  // sqrt(I) s + m and ∫ s^{m-1} = 1/m.
  avt_test::Gen gen(11);
  for (int i = 0; i < 40; ++i) {
    const double m = gen.log_uniform(1e-3, 50.0), fisher = gen.log_uniform(1e-3, 1e4);
    const double f = hyp2f1_avt(m, fisher);
    EXPECT_GE(m * f, m * (1 - 1e-12));
    EXPECT_LE(m * f, std::sqrt(fisher) * m / (m + 1.0) + m + 1e-10 * (1 + m));
  }
}

TEST(KernelConstants, BetaTwoDimOne) {
  const auto k = kernel_constants(2.0, 1);
  EXPECT_NEAR(k.r_lower, 16.0 / 15.0, 1e-14);
  EXPECT_NEAR(k.normalizer, 0.75, 1e-14);
  EXPECT_NEAR(k.r_upper, 0.6, 1e-14);
  EXPECT_NEAR(k.mu_beta, 0.2, 1e-14);
  EXPECT_THROW(kernel_constants(2.5, 1), Error);
  EXPECT_THROW(kernel_constants(1.0, 0), Error);
}

TEST(KernelConstantsProperty, MatchRadialQuadrature) {
  avt_test::Gen gen(5);
  for (int i = 0; i < 20; ++i) {
    const double beta = gen.uniform(0.2, 2.0);
    const int d = gen.integer(1, 6);
    const auto k = kernel_constants(beta, d);
    auto K = [beta](double r) { return std::max(0.0, 1.0 - std::pow(r, beta)); };
    EXPECT_NEAR(radial_integral([&](double r) { return K(r) * K(r); }, d), k.r_lower, 1e-9 * k.r_lower);
    EXPECT_NEAR(k.normalizer * radial_integral(K, d), 1.0, 1e-9);
    EXPECT_NEAR(k.normalizer * k.normalizer * radial_integral([&](double r) { return K(r) * K(r); }, d), k.r_upper,
                1e-9 * k.r_upper);
    EXPECT_NEAR(k.normalizer * radial_integral([&](double r) { return K(r) * std::pow(r, beta); }, d), k.mu_beta,
                1e-9);
  }
}
