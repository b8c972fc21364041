#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "avt/holder.hpp"
#include "gen.hpp"

using namespace avt;

namespace {

HolderProblem reference_problem(double n = 1e4) {
  HolderProblem p;
  p.beta = 2.0;
  p.d = 1;
  p.L = 1.0;
  p.sigma2 = 1.0;
  p.px0 = 0.5;
  p.n = n;
  return p;
}

double direct_constant(double beta, int d) {
  const double dd = d, lb = std::max(1.0, beta);
  const double num = std::pow(dd, dd) * std::pow(beta + dd, 2 * beta) * std::pow(std::tgamma(1 + dd / 2), 2 * beta);
  const double den = std::pow(std::numbers::pi, beta * dd) * std::pow(beta, 2 * beta) * std::pow(2 * beta + dd, dd) *
                     std::pow(lb, 2 * dd);
  return std::pow(num / den, 1 / (2 * beta + dd));
}

}  // namespace

TEST(MinimaxConstant, KnownValues) {
  EXPECT_NEAR(minimax_constant(2.0, 1), std::pow(3.0, 0.8) / (4.0 * std::pow(5.0, 0.2)), 1e-14);
  EXPECT_NEAR(minimax_constant(2.0, 1), 0.4363581, 1e-7);
  EXPECT_NEAR(minimax_constant(1.0, 1), std::cbrt(1.0 / 3.0), 1e-14);
  EXPECT_THROW(minimax_constant(0.0, 1), Error);
}

TEST(MinimaxConstant, LogSpaceMatchesDirectAndNeverOverflows) {
  avt_test::Gen gen(8);
  for (int i = 0; i < 30; ++i) {
    const double beta = gen.uniform(0.1, 2.0);
    const int d = gen.integer(1, 12);
    EXPECT_NEAR(minimax_constant(beta, d), direct_constant(beta, d), 1e-12 * direct_constant(beta, d));
  }
  for (double beta : {0.5, 1.0, 2.0}) {
    const double c = minimax_constant(beta, 10000);
    EXPECT_TRUE(std::isfinite(c));
    EXPECT_GT(c, 0.0);
  }
}

TEST(HighdimConstant, ClosedFormAndLimit) {
  const double two_pi_e = 2 * std::numbers::pi * std::numbers::e;
  EXPECT_NEAR(highdim_constant(1.0, 17), 17.0 / two_pi_e, 1e-14);
  EXPECT_NEAR(highdim_constant(2.0, 5), 25.0 / (two_pi_e * two_pi_e * 4.0), 1e-14);
  for (double beta : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(minimax_constant(beta, 200) / highdim_constant(beta, 200), 1.0, 0.1);
  }
}

TEST(SharpnessA, OracleValues) {
  // Independent oracle: scipy quadrature + L-BFGS-B multistart.
  struct Row {
    double a, A, A_lower;
  };
  for (const Row& row : {Row{0.02, 0.9149128740652432, 0.914912874065243}, Row{0.1, 0.7551774148995586, 0.7551774148995587},
                         Row{0.2, 0.6600828479744031, 0.6600828479744031}, Row{0.4, 0.5944090844337824, 0.5944090844337824},
                         Row{0.5, 0.5972086948732347, 0.5953780017296193}, Row{0.8, 0.7305726507631717, 0.4910037394889941}}) {
    const auto r = sharpness_A(row.a);
    EXPECT_NEAR(r.A_value, row.A, 1e-8) << row.a;
    EXPECT_NEAR(r.A_lower_value, row.A_lower, 1e-8) << row.a;
  }
}

TEST(SharpnessA, AnchorAtFourFifths) {
  const auto r = sharpness_A(0.8);
  EXPECT_GE(r.A_value, 1.0 / 1.37);
  EXPECT_TRUE(r.meets_137);
  EXPECT_NEAR(r.lambda_star, 12.556, 0.01);
  EXPECT_NEAR(r.m_star, 0.4819, 1e-3);
}

TEST(SharpnessA, FloorProperties) {
  for (double a : {0.2, 0.5, 0.8}) {
    const auto r = sharpness_A(a);
    EXPECT_NEAR(r.floor_closed_form, std::pow(a, 2 * a) * std::pow(1 - a, 2 * (1 - a)), 1e-14);
    EXPECT_GE(r.A_lower_value, r.floor_feasible - 1e-9);
    if (a <= 0.5) {
      EXPECT_NEAR(r.floor_feasible, r.floor_closed_form, 1e-8);
    }
  }
  EXPECT_THROW(sharpness_A(1.0), Error);
  EXPECT_THROW(sharpness_A(0.0), Error);
}

TEST(SharpnessAProperty, UpperDominatesLower) {
  avt_test::Gen gen(31);
  for (int i = 0; i < 8; ++i) {
    const auto r = sharpness_A(gen.uniform(0.01, 0.95));
    EXPECT_GE(r.A_value, r.A_lower_value - 1e-9);
    EXPECT_LE(r.A_value, 1.0);
    EXPECT_LE(r.lambda_lower_star, 1.0);
  }
}

TEST(Risk, ReferenceProblem) {
  const auto p = reference_problem();
  const double rate = std::pow(2e-4, 0.8);
  EXPECT_NEAR(rate_term(p), rate, 1e-15);
  EXPECT_NEAR(upper_bound_risk(p), minimax_constant(2.0, 1) * rate, 1e-15);
  EXPECT_NEAR(upper_bound_risk(p), 4.79366e-4, 1e-9);
  EXPECT_NEAR(lower_bound_risk(p), 0.7305726507631717 * minimax_constant(2.0, 1) * rate, 1e-12);
}

TEST(Risk, ScalingLaws) {
  auto p = reference_problem();
  const double base = lower_bound_risk(p);
  auto q = p;
  q.n *= 16;
  EXPECT_NEAR(lower_bound_risk(q), base / std::pow(16.0, 0.8), 1e-12 * base);
  auto s = p;
  s.L *= 3.0;
  EXPECT_NEAR(lower_bound_risk(s), base * std::pow(3.0, (1.0 / 2.0) * 0.8), 1e-12 * base);
}

TEST(RiskProperty, LowerNeverExceedsUpper) {
  avt_test::Gen gen(77);
  for (int i = 0; i < 8; ++i) {
    HolderProblem p;
    p.beta = gen.uniform(0.2, 2.0);
    p.d = gen.integer(1, 5);
    p.L = gen.log_uniform(0.1, 10);
    p.sigma2 = gen.log_uniform(0.1, 10);
    p.px0 = gen.log_uniform(0.05, 2);
    p.n = gen.log_uniform(10, 1e6);
    const double lo = lower_bound_risk(p), up = upper_bound_risk(p);
    EXPECT_LE(lo, up);
    EXPECT_NEAR(lo / up, sharpness_A(p.a()).A_value, 1e-12);
    EXPECT_LE(up / lo, 1.69);
  }
}

TEST(FiniteSample, ConstantAndLimit) {
  const auto p = reference_problem();
  const double c = finite_sample_c(p, 1.0, 1.0);
  EXPECT_NEAR(c, std::pow(15.0 / (16.0 * 0.5 * 1e4), 0.2), 1e-14);
  EXPECT_NEAR(finite_sample_c(p, 1.0, 2.0), 2.0 * c, 1e-14);
  const double fin = finite_sample_lower_bound(p, 1.0, 1.0);
  EXPECT_NEAR(fin, 0.4910037394889941 / (1.0 + c) * upper_bound_risk(p), 1e-12);
  double prev = INFINITY;
  for (double n : {3.0, 10.0, 1e3, 1e6, 1e9, 1e12}) {
    const double cn = finite_sample_c(reference_problem(n), 0.5, 1.0);
    EXPECT_LT(cn, prev);
    prev = cn;
  }
  EXPECT_LT(prev, 0.1 * finite_sample_c(reference_problem(3.0), 0.5, 1.0));
  EXPECT_THROW(finite_sample_lower_bound(reference_problem(2.0), 1.0, 1.0), Error);
}

TEST(Bandwidth, ClosedFormAndScaling) {
  const auto p = reference_problem();
  EXPECT_NEAR(optimal_bandwidth(p), std::pow(0.003, 0.2), 1e-14);
  auto q = p;
  q.n *= 32;
  EXPECT_NEAR(optimal_bandwidth(q), optimal_bandwidth(p) / 2.0, 1e-14);
  auto s = p;
  s.sigma2 *= 32;
  EXPECT_NEAR(optimal_bandwidth(s), optimal_bandwidth(p) * 2.0, 1e-14);
}

TEST(Bandwidth, ForInformationTarget) {
  auto p = reference_problem(100);
  // I = L² n h^{2β+d} R px0 / ((1∨β)² σ²) inverted.
  const double h = bandwidth_for_information(p, 1.0);
  EXPECT_NEAR(100.0 * std::pow(h, 5) * (16.0 / 15.0) * 0.5 / 4.0, 1.0, 1e-13);
  EXPECT_NEAR(h, 0.5963, 1e-3);
}

TEST(HolderProblem, Validation) {
  auto p = reference_problem();
  p.beta = 2.5;
  EXPECT_THROW(upper_bound_risk(p), Error);
  p = reference_problem();
  p.sigma2 = 0;
  EXPECT_THROW(optimal_bandwidth(p), Error);
}
