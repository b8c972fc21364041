#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "avt/lp_bounds.hpp"
#include "gen.hpp"

using namespace avt;

namespace {
const Interval kT(-1, 1);
}

TEST(GaussianMoment, Examples) {
  avt_test::Gen gen(3);
  for (int i = 0; i < 10; ++i) {
    const double a = gen.uniform(-3, 3), b = gen.uniform(-3, 3), info = gen.uniform(0, 20);
    EXPECT_NEAR(gaussian_abs_moment(a, b, 2.0, info), a * a + b * b * info, 1e-10 * (1 + a * a + b * b * info));
  }
  EXPECT_NEAR(gaussian_abs_moment(0.0, 1.0, 1.0, 1.0), std::sqrt(2.0 / std::numbers::pi), 1e-12);
  EXPECT_DOUBLE_EQ(gaussian_abs_moment(5.0, 0.0, 3.0, 7.0), 125.0);
  EXPECT_NEAR(gaussian_abs_moment(1.3, 0.7, 3.0, 2.0), 6.0979543257815908, 1e-10);
  EXPECT_NEAR(gaussian_abs_moment(-0.4, 2.0, 1.5, 0.3), 1.0841272986467592, 1e-10);
}

TEST(GaussianMoment, RejectsSubunitOrder) {
  try {
    gaussian_abs_moment(1.0, 1.0, 0.5, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
}

TEST(LpBound, ReducesToMinimaxAtPTwo) {
  for (double fisher : {0.0, 1.0, 10.0}) {
    const auto path = FisherPath::constant(kT, fisher);
    const auto model = ScoreMomentModel::gaussian(path);
    for (const auto& a : {Augmentation::cosine(), Augmentation::power(0.5), Augmentation::power(1.0),
                          Augmentation::power(2.0)}) {
      const double ref = augmented_minimax_bound(path, a).value;
      EXPECT_NEAR(lp_minimax_bound(model, 2.0, a).value, ref, 1e-6 * ref) << fisher;
    }
  }
}

TEST(LpBound, PowerOneNoInformation) {
  EXPECT_NEAR(lp_minimax_bound(ScoreMomentModel::gaussian(kT, 0.0), 2.0, Augmentation::power(1.0)).value, 0.25, 1e-10);
}

TEST(LpBound, NestedQuadratureOracles) {
  EXPECT_NEAR(lp_minimax_bound(ScoreMomentModel::gaussian(kT, 1.0), 4.0, Augmentation::power(1.0)).value,
              0.046448286565877926, 1e-6 * 0.0464);
  EXPECT_NEAR(lp_minimax_bound(ScoreMomentModel::gaussian(kT, 5.0), 3.0, Augmentation::power(2.0)).value,
              0.022338778039838275, 1e-6 * 0.0223);
}

TEST(LpBound, Errors) {
  const auto model = ScoreMomentModel::gaussian(kT, 1.0);
  EXPECT_THROW(lp_minimax_bound(model, 1.0, Augmentation::power(1.0)), Error);
  const auto odd = Augmentation::custom(
      kT, [](double t) { return std::sin(std::numbers::pi * t); },
      [](double t) { return std::numbers::pi * std::cos(std::numbers::pi * t); });
  try {
    lp_minimax_bound(model, 3.0, odd);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroAugmentation);
  }
}

TEST(LpBoundProperty, ScaleInvariance) {
  avt_test::Gen gen(17);
  for (int i = 0; i < 3; ++i) {
    const double p = gen.uniform(1.3, 5.0), c = gen.log_uniform(0.05, 20.0);
    const auto model = ScoreMomentModel::gaussian(kT, gen.uniform(0.0, 20.0));
    const auto a = Augmentation::power(gen.uniform(0.7, 3.0));
    const double v = lp_minimax_bound(model, p, a).value;
    EXPECT_NEAR(lp_minimax_bound(model, p, a.scaled(c)).value, v, 1e-8 * v);
  }
}

TEST(LpBoundProperty, NonincreasingInInformation) {
  avt_test::Gen gen(23);
  for (int i = 0; i < 2; ++i) {
    const double p = gen.uniform(1.5, 4.0);
    const auto a = Augmentation::exp_linear(gen.uniform(0.2, 2.0), 0.1);
    double prev = INFINITY;
    for (double fisher : {0.0, 0.5, 2.0, 8.0, 32.0}) {
      const double v = lp_minimax_bound(ScoreMomentModel::gaussian(kT, fisher), p, a).value;
      EXPECT_LE(v, prev * (1 + 1e-10));
      prev = v;
    }
  }
}

TEST(LpBound, CustomMomentModel) {
  // Rademacher score with E ρ² = I: M = (|a + b√I|^q + |a - b√I|^q)/2.
  const double fisher = 3.0;
  ScoreMomentModel model{kT,
                         [fisher](double, double a, double b, double q) {
                           const double s = b * std::sqrt(fisher);
                           return 0.5 * (std::pow(std::abs(a + s), q) + std::pow(std::abs(a - s), q));
                         },
                         std::nullopt};
  const auto alpha = Augmentation::power(1.5);
  const double v2 = lp_minimax_bound(model, 2.0, alpha).value;
  EXPECT_NEAR(v2, augmented_minimax_bound(FisherPath::constant(kT, fisher), alpha).value, 1e-8 * v2);
}
