#pragma once

// Constants for pointwise estimation over Hölder classes H(β, L), β ∈ (0, 2],
// in nonparametric regression Y = f(X) + ε on R^d: the sharp minimax
// constant, the A(a) / Ā(a) sharpness factors, finite-sample lower bounds,
// the Nadaraya–Watson upper bound and its bandwidth.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "avt/error.hpp"
#include "avt/numerics.hpp"
#include "avt/special.hpp"

namespace avt {

struct HolderProblem {
  double beta = 2.0;
  int d = 1;
  double L = 1.0;
  double sigma2 = 1.0;
  double px0 = 0.5;
  double n = 1e4;

  void validate() const {
    check_smoothness(beta, d);
    require(L > 0.0 && std::isfinite(L), ErrorCode::DomainError, "L must be > 0");
    require(sigma2 > 0.0 && std::isfinite(sigma2), ErrorCode::DomainError, "sigma2 must be > 0");
    require(px0 > 0.0 && std::isfinite(px0), ErrorCode::DomainError, "px0 must be > 0");
    require(n >= 1.0 && std::isfinite(n), ErrorCode::DomainError, "n must be >= 1");
  }

  /// 2β / (2β + d), the rate exponent.
  double a() const { return 2.0 * beta / (2.0 * beta + d); }
};

inline double beta_floor(double beta) { return std::max(1.0, beta); }

/// log C(β, d) for the sharp constant
/// C = [d^d (β+d)^{2β} Γ^{2β}(1+d/2) / (π^{βd} β^{2β} (2β+d)^d (1∨β)^{2d})]^{1/(2β+d)}.
inline double log_minimax_constant(double beta, int d) {
  check_smoothness(beta, d);
  const double dd = d;
  const double lb = std::log(beta_floor(beta));
  const double num = dd * std::log(dd) + 2.0 * beta * std::log(beta + dd) + 2.0 * beta * log_gamma(1.0 + 0.5 * dd);
  const double den = beta * dd * std::log(std::numbers::pi) + 2.0 * beta * std::log(beta) +
                     dd * std::log(2.0 * beta + dd) + 2.0 * dd * lb;
  return (num - den) / (2.0 * beta + dd);
}

inline double minimax_constant(double beta, int d) { return std::exp(log_minimax_constant(beta, d)); }

/// d^β / ((2πe)^β (1∨β)²), the d → ∞ equivalent of C(β, d).
inline double highdim_constant(double beta, int d) {
  check_smoothness(beta, d);
  const double lb = beta_floor(beta);
  return std::exp(beta * std::log(static_cast<double>(d)) - beta * std::log(2.0 * std::numbers::pi * std::numbers::e)) /
         (lb * lb);
}

struct SharpnessOptions {
  double log_lambda_min = -12.0;
  double log_lambda_max = 12.0;
  double log_m_min = -12.0;
  double log_m_max = 8.0;
  double tol = 1e-9;
  Max2dOptions search{};
};

struct SharpnessReport {
  double a = 0.0;
  double A_value = 0.0;
  double A_lower_value = 0.0;
  double lambda_star = 0.0;  ///< argmax of A
  double m_star = 0.0;
  double lambda_lower_star = 0.0;  ///< argmax of Ā (λ <= 1)
  double m_lower_star = 0.0;
  /// a^{2a}(1-a)^{2(1-a)}, the closed-form lower bound on Ā whose maximizer
  /// λ = a³/(1-a)³ is feasible (<= 1) only for a <= 1/2.
  double floor_closed_form = 0.0;
  /// The same closed-form lower bound maximized over the feasible λ <= 1.
  double floor_feasible = 0.0;
  bool meets_137 = false;  ///< A >= 1/1.37
  bool meets_169 = false;  ///< A >= 1/1.69
};

namespace detail {

inline double sharpness_prefactor_log(double a) { return -(a * std::log(a) + (1.0 - a) * std::log1p(-a)); }

/// log of λ^a / ((m+1) F(m, λ))² at (log λ, log m).
inline double sharpness_log_objective(double a, double x, double y) {
  const double lambda = std::exp(x), m = std::exp(y);
  return a * x - 2.0 * std::log1p(m) - 2.0 * std::log(hyp2f1_avt(m, lambda));
}

}  // namespace detail

/// A(a) = sup_{λ,m>0} λ^a / ((m+1) 2F1(-1/2, m/2, m/2+1; -λ/m²))² / (a^a (1-a)^{1-a})
/// and Ā(a), the same with λ restricted to (0, 1].
inline SharpnessReport sharpness_A(double a, const SharpnessOptions& opt = {}) {
  require(a > 0.0 && a < 1.0, ErrorCode::DomainError, "a must lie in (0, 1)");
  SharpnessReport r;
  r.a = a;
  const double pre = detail::sharpness_prefactor_log(a);
  auto obj = [a](double x, double y) { return detail::sharpness_log_objective(a, x, y); };
  const Interval ym(opt.log_m_min, opt.log_m_max);

  const Max2d full = maximize_2d(obj, Interval(opt.log_lambda_min, opt.log_lambda_max), ym, opt.tol, opt.search);
  const Max2d lower = maximize_2d(obj, Interval(opt.log_lambda_min, std::min(0.0, opt.log_lambda_max)), ym, opt.tol,
                                  opt.search);
  // The restricted problem is a sub-problem of the full one.
  const double full_max = std::max(full.max, lower.max);
  r.A_value = std::exp(full_max + pre);
  r.A_lower_value = std::exp(lower.max + pre);
  const auto& arg = full.max >= lower.max ? full.argmax : lower.argmax;
  r.lambda_star = std::exp(arg[0]);
  r.m_star = std::exp(arg[1]);
  r.lambda_lower_star = std::exp(lower.argmax[0]);
  r.m_lower_star = std::exp(lower.argmax[1]);

  r.floor_closed_form = std::exp(2.0 * a * std::log(a) + 2.0 * (1.0 - a) * std::log1p(-a));
  auto floor_obj = [a](double x, double y) {
    const double lambda = std::exp(x), m = std::exp(y);
    return a * x + 2.0 * y - 2.0 * std::log1p(m) - std::log(m * m + lambda);
  };
  const Max2d fl = maximize_2d(floor_obj, Interval(opt.log_lambda_min, 0.0), ym, opt.tol, opt.search);
  r.floor_feasible = std::exp(fl.max + pre);

  r.meets_137 = r.A_value >= 1.0 / 1.37;
  r.meets_169 = r.A_value >= 1.0 / 1.69;
  return r;
}

/// (L^{d/β} σ² / (px0 n))^{2β/(2β+d)}.
inline double rate_term(const HolderProblem& p) {
  p.validate();
  const double base = std::pow(p.L, p.d / p.beta) * p.sigma2 / (p.px0 * p.n);
  return std::pow(base, p.a());
}

/// Leading-order pointwise risk of the Nadaraya–Watson estimator with the
/// optimal bandwidth: C(β, d) · rate.
inline double upper_bound_risk(const HolderProblem& p) { return minimax_constant(p.beta, p.d) * rate_term(p); }

/// A(2β/(2β+d)) · C(β, d) · rate.
inline double lower_bound_risk(const HolderProblem& p, const SharpnessOptions& opt = {}) {
  return sharpness_A(p.a(), opt).A_value * upper_bound_risk(p);
}

/// c_{n,d} = L_X ((β+d)(2β+d)Γ(1+d/2)σ² / (2π^{d/2}β² px0 L² n))^{α/(2β+d)}.
inline double finite_sample_c(const HolderProblem& p, double alpha_x, double L_X) {
  p.validate();
  require(alpha_x > 0.0 && alpha_x <= 1.0, ErrorCode::DomainError, "alpha_x must lie in (0, 1]");
  require(L_X > 0.0 && std::isfinite(L_X), ErrorCode::DomainError, "L_X must be > 0");
  const auto k = kernel_constants(p.beta, p.d);
  const double base = p.sigma2 / (k.r_lower * p.px0 * p.L * p.L * p.n);
  return L_X * std::pow(base, alpha_x / (2.0 * p.beta + p.d));
}

/// Ā(2β/(2β+d)) / (1 + c_{n,d}) · C(β, d) · rate, valid for every n >= 3.
/// The rate exponent is 2β/(2β+d) as in the asymptotic statements.
inline double finite_sample_lower_bound(const HolderProblem& p, double alpha_x, double L_X,
                                        const SharpnessOptions& opt = {}) {
  p.validate();
  require(p.n >= 3.0, ErrorCode::DomainError, "finite-sample bound requires n >= 3");
  const double c = finite_sample_c(p, alpha_x, L_X);
  return sharpness_A(p.a(), opt).A_lower_value / (1.0 + c) * upper_bound_risk(p);
}

/// h = (d (1∨β)² σ² R(K) / (2β L² μ_β(K)² px0 n))^{1/(2β+d)} for the
/// normalized kernel K.
inline double optimal_bandwidth(const HolderProblem& p) {
  p.validate();
  const auto k = kernel_constants(p.beta, p.d);
  const double lb = beta_floor(p.beta);
  const double num = p.d * lb * lb * p.sigma2 * k.r_upper;
  const double den = 2.0 * p.beta * p.L * p.L * k.mu_beta * k.mu_beta * p.px0 * p.n;
  return std::pow(num / den, 1.0 / (2.0 * p.beta + p.d));
}

/// Bump width h for which the one-parameter bump subfamily has Fisher
/// information `lambda`: h = ((1∨β)² σ² λ / (L² px0 R n))^{1/(2β+d)}.
inline double bandwidth_for_information(const HolderProblem& p, double lambda) {
  p.validate();
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::DomainError, "information target must be > 0");
  const auto k = kernel_constants(p.beta, p.d);
  const double lb = beta_floor(p.beta);
  return std::pow(lb * lb * p.sigma2 * lambda / (p.L * p.L * p.px0 * k.r_lower * p.n), 1.0 / (2.0 * p.beta + p.d));
}

}  // namespace avt
