#pragma once

// Minimax lower bounds under |error|^p loss for models whose conditional
// score has known absolute moments. The Gaussian-score case ships built in.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "avt/bounds.hpp"
#include "avt/error.hpp"
#include "avt/numerics.hpp"

namespace avt {

/// E|a + b Z|^q for Z ~ N(0, info).
///
/// Integrated directly against the standard normal density on [-R, R] with
/// R = 10 + 3 sqrt(q) (|w|^q φ(w) peaks at sqrt(q); the neglected tails are
/// far below double precision), split at the kink w = -a/σ.
/// q = 1 is accepted as well as q > 1.
inline double gaussian_abs_moment(double a, double b, double q, double info) {
  require(q >= 1.0 && std::isfinite(q), ErrorCode::DomainError, "moment order q must be >= 1");
  require(info >= 0.0 && std::isfinite(info), ErrorCode::DomainError, "info must be finite and >= 0");
  require(std::isfinite(a) && std::isfinite(b), ErrorCode::DomainError, "moment arguments must be finite");
  const double sigma = std::abs(b) * std::sqrt(info);
  if (sigma == 0.0) return std::pow(std::abs(a), q);
  const double reach = std::min(40.0, 10.0 + 3.0 * std::sqrt(q));
  const double inv_root_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  auto f = [&](double w) { return std::pow(std::abs(a + sigma * w), q) * inv_root_2pi * std::exp(-0.5 * w * w); };
  const double kink = -a / sigma;
  std::vector<double> breaks{0.0};
  if (std::abs(kink) < reach) breaks.push_back(kink);
  return integrate_pieces(f, Interval(-reach, reach), breaks, 0.0, 1e-12);
}

/// A model through its score-moment function M(t, a, b, q) = E_t|a + b ρ_t|^q.
struct ScoreMomentModel {
  Interval domain;
  std::function<double(double t, double a, double b, double q)> moment;
  std::optional<double> gaussian_info;

  /// ρ_t ~ N(0, I(t)).
  static ScoreMomentModel gaussian(const FisherPath& path) {
    return ScoreMomentModel{path.domain(),
                            [path](double t, double a, double b, double q) {
                              return gaussian_abs_moment(a, b, q, path(t));
                            },
                            path.constant_value()};
  }

  static ScoreMomentModel gaussian(Interval domain, double info) {
    return gaussian(FisherPath::constant(domain, info));
  }
};

/// (|∫α| / ∫ M(t, α'(t), α(t), q)^{1/q} dt)^p with q = p/(p - 1). The prior
/// proportional to M^{1/q} is attached.
inline BoundResult lp_minimax_bound(const ScoreMomentModel& model, double p, const Augmentation& alpha) {
  require(p > 1.0 && std::isfinite(p), ErrorCode::DomainError, "loss exponent p must exceed 1");
  detail::check_same_domain(model.domain, alpha.domain(), "model and augmentation");
  const double q = p / (p - 1.0);
  const Interval& dom = model.domain;
  const auto& breaks = alpha.breaks();

  const double num =
      integrate_pieces_edge([&](double t, double e) { return alpha.value_at(t, e); }, dom, breaks, 0.0, kBoundTol);
  const double abs_num = integrate_pieces_edge([&](double t, double e) { return std::abs(alpha.value_at(t, e)); },
                                               dom, breaks, 0.0, kBoundTol);
  require(std::abs(num) > 1e-12 * abs_num, ErrorCode::ZeroAugmentation, "augmentation integrates to 0");

  auto root_moment = [model, alpha, q](double t, double e) {
    const double m = model.moment(t, alpha.derivative_at(t, e), alpha.value_at(t, e), q);
    require(m >= 0.0 && std::isfinite(m), ErrorCode::NonFinite, "score moment must be finite and >= 0");
    return std::pow(m, 1.0 / q);
  };
  const double singular = std::min(0.0, alpha.end_exponent());
  const double den = integrate_pieces_edge(root_moment, dom, breaks, singular, 1e-10);
  require(den > 0.0, ErrorCode::ZeroAugmentation, "score-moment integral is zero");

  BoundResult r;
  r.method = BoundMethod::AugmentedCustom;
  r.value = std::pow(std::abs(num) / den, p);
  r.params = alpha.params();
  r.params["p"] = p;
  r.params["q"] = q;
  r.params["alpha_integral"] = num;
  r.params["moment_integral"] = den;
  r.prior = PriorDensity::from_edge_function_with_mass(dom, root_moment, PriorDensity::Shape{breaks, singular}, den);
  return r;
}

}  // namespace avt
