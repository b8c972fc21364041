#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "avt/error.hpp"
#include "avt/numerics.hpp"

namespace avt {

/// ln Γ(x) for x > 0. Uses the reentrant glibc entry point where available
/// so concurrent callers never touch the global `signgam`.
inline double log_gamma(double x) {
  require(x > 0.0 && std::isfinite(x), ErrorCode::DomainError, "log_gamma requires finite x > 0");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

/// Volume of the Euclidean unit ball in R^d.
inline double vol_ball(int d) {
  require(d >= 1, ErrorCode::DomainError, "vol_ball requires d >= 1");
  const double half = 0.5 * d;
  return std::exp(half * std::log(std::numbers::pi) - log_gamma(1.0 + half));
}

/// 2F1(-1/2, m/2, m/2 + 1; -fisher/m^2), evaluated only through
/// ∫_0^1 s^{m-1} sqrt(fisher s^2 + m^2) ds. For m < 1 the substitution
/// u = s^m turns the endpoint-singular integrand into the bounded
/// (1/m) ∫_0^1 sqrt(fisher u^{2/m} + m^2) du.
inline double hyp2f1_avt(double m, double fisher) {
  require(m > 0.0 && std::isfinite(m), ErrorCode::DomainError, "hyp2f1_avt requires m > 0");
  require(fisher >= 0.0 && std::isfinite(fisher), ErrorCode::DomainError, "hyp2f1_avt requires fisher >= 0");
  if (fisher == 0.0) return 1.0;
  constexpr double kTol = 1e-12;
  if (m >= 1.0) {
    return integrate([&](double s) { return std::pow(s, m - 1.0) * std::sqrt(fisher * s * s + m * m); }, 0.0, 1.0,
                     kTol);
  }
  const double power = 2.0 / m;
  return integrate([&](double u) { return std::sqrt(fisher * std::pow(u, power) + m * m); }, 0.0, 1.0, kTol) / m;
}

/// Constants of the truncated power kernel K(u) = (1 - ||u||^β)_+ on R^d and
/// of its normalized version (normalizer · K, unit mass).
struct KernelConstants {
  double beta;
  int d;
  double r_lower;     ///< ∫ K^2 for the unnormalized kernel
  double r_upper;     ///< ∫ K^2 for the normalized kernel
  double mu_beta;     ///< ∫ K(u) ||u||^β du for the normalized kernel
  double normalizer;  ///< (β + d) Γ(1 + d/2) / (π^{d/2} β)
};

inline void check_smoothness(double beta, int d) {
  require(beta > 0.0 && beta <= 2.0, ErrorCode::DomainError, "beta must lie in (0, 2]");
  require(d >= 1, ErrorCode::DomainError, "dimension must be >= 1");
}

inline KernelConstants kernel_constants(double beta, int d) {
  check_smoothness(beta, d);
  const double vd = vol_ball(d);
  const double dd = d;
  KernelConstants k{beta, d, 0, 0, 0, 0};
  k.r_lower = 2.0 * vd * beta * beta / ((beta + dd) * (2.0 * beta + dd));
  k.normalizer = (beta + dd) / (vd * beta);
  k.r_upper = 2.0 * (beta + dd) / (vd * (2.0 * beta + dd));
  k.mu_beta = dd / (2.0 * beta + dd);
  return k;
}

/// ∫_{R^d} g(||u||) du for a radial g supported on the unit ball, reduced to
/// the 1-D integral d·V_d ∫_0^1 r^{d-1} g(r) dr.
template <class G>
double radial_integral(G&& g, int d, double tol = 1e-12) {
  require(d >= 1, ErrorCode::DomainError, "dimension must be >= 1");
  const double surface = d * vol_ball(d);
  return surface * integrate([&](double r) { return std::pow(r, d - 1) * g(r); }, 0.0, 1.0, tol);
}

}  // namespace avt
