#pragma once

// Scalar van Trees machinery: the classical bound, the augmented Bayes and
// minimax bounds, their optimal priors, and the two headline closed forms
// (AVT1, AVT2) on T = [-1, 1].

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "avt/error.hpp"
#include "avt/numerics.hpp"
#include "avt/special.hpp"

namespace avt {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kBoundTol = 1e-11;
inline constexpr std::size_t kDefaultGridNodes = 4097;

/// Fisher information along a scalar parameter path.
class FisherPath {
 public:
  static FisherPath constant(Interval domain, double value) {
    require(value >= 0.0 && std::isfinite(value), ErrorCode::DomainError, "Fisher information must be >= 0");
    FisherPath p(domain);
    p.constant_ = value;
    p.fn_ = [value](double) { return value; };
    return p;
  }

  /// Evaluable information I(t) >= 0; probed on a uniform grid at construction.
  static FisherPath function(Interval domain, std::function<double(double)> info) {
    FisherPath p(domain);
    p.fn_ = std::move(info);
    for (int i = 0; i <= 64; ++i) {
      const double t = domain.lo + domain.width() * i / 64.0;
      const double v = p.fn_(t);
      require(v >= 0.0 && std::isfinite(v), ErrorCode::DomainError, "Fisher information must be finite and >= 0");
    }
    return p;
  }

  static FisherPath grid(const GridFunction& g) {
    for (double v : g.values()) require(v >= 0.0, ErrorCode::DomainError, "Fisher information must be >= 0");
    return function(g.domain(), [g](double t) { return g(t); });
  }

  const Interval& domain() const { return domain_; }
  double operator()(double t) const { return fn_(t); }
  std::optional<double> constant_value() const { return constant_; }

 private:
  explicit FisherPath(Interval domain) : domain_(domain) {}
  Interval domain_;
  std::function<double(double)> fn_;
  std::optional<double> constant_;
};

/// Callable of (t, e) where e is the distance from t to the nearer endpoint
/// of the domain; see `integrate_pieces_edge`.
using EdgeFn = std::function<double(double, double)>;

inline double edge_distance(const Interval& dom, double t) { return std::min(t - dom.lo, dom.hi - t); }

/// An augmentation function α on T vanishing at both endpoints.
///
/// Besides values and derivatives each augmentation reports its kinks
/// (integrals are split there) and the power-law exponent p of α' at the
/// endpoints, |α'(t)| ~ dist(t, ∂T)^p, which drives the quadrature
/// substitution when p < 0. At a kink `derivative` returns the right
/// derivative; every functional in this library uses α' only through even
/// or sign-symmetric expressions.
class Augmentation {
 public:
  enum class Family { Cosine, Power, Tent, ExpLinear, Grid, Custom };

  /// α(t) = cos²(πt/2) on [-1, 1].
  static Augmentation cosine() {
    Augmentation a(Family::Cosine, Interval(-1, 1));
    // cos(πt/2)² = sin(πe/2)² and |sin(πt)| = sin(πe) with e = 1 - |t|.
    a.value_ = [](double, double e) {
      const double s = std::sin(0.5 * kPi * e);
      return s * s;
    };
    a.deriv_ = [](double t, double e) { return (t < 0.0 ? 0.5 : -0.5) * kPi * std::sin(kPi * e); };
    a.breaks_ = {0.0};
    a.end_exponent_ = 1.0;
    return a;
  }

  /// α(t) = (1 - |t|)^m on [-1, 1], m > 0.
  static Augmentation power(double m) {
    require(m > 0.0 && std::isfinite(m), ErrorCode::DomainError, "power augmentation needs m > 0");
    Augmentation a(Family::Power, Interval(-1, 1));
    a.params_["m"] = m;
    a.value_ = [m](double, double e) { return std::pow(e, m); };
    a.deriv_ = [m](double t, double e) { return (t < 0.0 ? m : -m) * std::pow(e, m - 1.0); };
    a.breaks_ = {0.0};
    a.end_exponent_ = m - 1.0;
    return a;
  }

  /// Plateau at 1 with linear ramps of width δ to zero at ±1.
  static Augmentation tent(double delta) {
    require(delta > 0.0 && delta < 1.0, ErrorCode::DomainError, "tent augmentation needs delta in (0, 1)");
    Augmentation a(Family::Tent, Interval(-1, 1));
    a.params_["delta"] = delta;
    a.value_ = [delta](double, double e) { return e >= delta ? 1.0 : e / delta; };
    a.deriv_ = [delta](double t, double e) {
      if (e > delta) return 0.0;
      return (t < 0.0 ? 1.0 : -1.0) / delta;
    };
    a.breaks_ = {-(1.0 - delta), 1.0 - delta};
    a.end_exponent_ = 0.0;
    return a;
  }

  /// e^{-k|t|} on |t| <= 1 - δ, continued linearly to zero at ±1.
  static Augmentation exp_linear(double k, double delta) {
    require(k > 0.0 && std::isfinite(k), ErrorCode::DomainError, "exp-linear augmentation needs k > 0");
    require(delta > 0.0 && delta < 1.0, ErrorCode::DomainError, "exp-linear augmentation needs delta in (0, 1)");
    Augmentation a(Family::ExpLinear, Interval(-1, 1));
    a.params_["k"] = k;
    a.params_["delta"] = delta;
    const double edge = std::exp(-(1.0 - delta) * k) / delta;
    a.value_ = [k, delta, edge](double t, double e) {
      return e >= delta ? std::exp(-k * std::abs(t)) : edge * e;
    };
    a.deriv_ = [k, delta, edge](double t, double e) {
      const double s = t < 0.0 ? 1.0 : -1.0;
      return e > delta ? s * k * std::exp(-k * std::abs(t)) : s * edge;
    };
    a.breaks_ = {-(1.0 - delta), 0.0, 1.0 - delta};
    a.end_exponent_ = 0.0;
    return a;
  }

  /// Sampled augmentation; endpoint values must be exactly zero.
  static Augmentation grid(const GridFunction& g) {
    require(g.values().front() == 0.0 && g.values().back() == 0.0, ErrorCode::BoundaryViolation,
            "grid augmentation must vanish exactly at both endpoints");
    Augmentation a(Family::Grid, g.domain());
    a.value_ = [g](double t, double) { return g(t); };
    a.deriv_ = [g](double t, double) { return g.derivative(t); };
    for (std::size_t i = 1; i + 1 < g.size(); ++i) a.breaks_.push_back(g.node(i));
    a.end_exponent_ = 0.0;
    return a;
  }

  static Augmentation custom(Interval domain, std::function<double(double)> value,
                             std::function<double(double)> derivative, std::vector<double> breaks = {},
                             double end_exponent = 0.0) {
    Augmentation a(Family::Custom, domain);
    a.value_ = [value](double t, double) { return value(t); };
    a.deriv_ = [derivative](double t, double) { return derivative(t); };
    a.breaks_ = std::move(breaks);
    a.end_exponent_ = end_exponent;
    const double scale = std::max(1.0, std::abs(value(domain.mid())));
    require(std::abs(value(domain.lo)) <= 1e-12 * scale && std::abs(value(domain.hi)) <= 1e-12 * scale,
            ErrorCode::BoundaryViolation, "augmentation must vanish at both endpoints");
    return a;
  }

  Augmentation scaled(double c) const {
    Augmentation a = *this;
    a.scale_ *= c;
    return a;
  }

  double value(double t) const { return value_at(t, edge_distance(domain_, t)); }
  double derivative(double t) const { return derivative_at(t, edge_distance(domain_, t)); }
  double value_at(double t, double e) const { return scale_ * value_(t, e); }
  double derivative_at(double t, double e) const { return scale_ * deriv_(t, e); }

  const Interval& domain() const { return domain_; }
  const std::vector<double>& breaks() const { return breaks_; }
  double end_exponent() const { return end_exponent_; }
  Family family() const { return family_; }
  const std::map<std::string, double>& params() const { return params_; }

 private:
  Augmentation(Family f, Interval domain) : family_(f), domain_(domain) {}

  Family family_;
  Interval domain_;
  EdgeFn value_;
  EdgeFn deriv_;
  std::vector<double> breaks_;
  double end_exponent_ = 0.0;
  double scale_ = 1.0;
  std::map<std::string, double> params_;
};

struct PriorShape {
  std::vector<double> breaks;
  double end_exponent = 0.0;
};

/// A prior density on T.
///
/// Priors built from closed forms keep an exact evaluator; the grid view
/// (`grid()`) is derived from it. Priors built from samples interpolate
/// linearly and differentiate by central differences. `end_exponent` is the
/// endpoint behaviour μ(t) ~ dist(t, ∂T)^p when known (0 otherwise).
class PriorDensity {
 public:
  using Shape = PriorShape;

  static PriorDensity from_function(Interval domain, std::function<double(double)> density,
                                    std::function<double(double)> derivative = {}, Shape shape = {},
                                    bool normalize = true) {
    return from_edge_function(
        domain, [density](double t, double) { return density(t); }, std::move(derivative), std::move(shape),
        normalize);
  }

  /// Density given as a function of (t, distance to the nearer endpoint).
  static PriorDensity from_edge_function(Interval domain, EdgeFn density, std::function<double(double)> derivative,
                                         Shape shape, bool normalize) {
    PriorDensity p(domain);
    p.shape_ = std::move(shape);
    p.fn_ = std::move(density);
    p.deriv_ = std::move(derivative);
    const double mass = integrate_pieces_edge(p.fn_, domain, p.shape_.breaks, std::min(0.0, p.shape_.end_exponent),
                                              kBoundTol);
    require(std::isfinite(mass) && mass > 0.0, ErrorCode::DomainError, "prior must have positive finite mass");
    if (normalize) {
      p.scale_ = 1.0 / mass;
    } else {
      require(std::abs(mass - 1.0) <= 1e-9, ErrorCode::DomainError, "prior must integrate to 1 within 1e-9");
    }
    p.check_nonnegative();
    return p;
  }

  /// Density proportional to `shape` whose integral is already known.
  static PriorDensity from_edge_function_with_mass(Interval domain, EdgeFn shape_fn, Shape shape, double mass) {
    require(std::isfinite(mass) && mass > 0.0, ErrorCode::DomainError, "prior must have positive finite mass");
    PriorDensity p(domain);
    p.shape_ = std::move(shape);
    p.fn_ = std::move(shape_fn);
    p.scale_ = 1.0 / mass;
    p.check_nonnegative();
    return p;
  }

  static PriorDensity from_grid(const GridFunction& g) {
    PriorDensity p(g.domain());
    for (double v : g.values()) require(v >= 0.0, ErrorCode::DomainError, "prior must be nonnegative");
    const double mass = g.simpson();
    require(std::abs(mass - 1.0) <= 1e-9, ErrorCode::DomainError, "grid prior must integrate to 1 within 1e-9");
    p.fn_ = [g](double t, double) { return g(t); };
    p.deriv_ = [g](double t) { return g.derivative(t); };
    for (std::size_t i = 1; i + 1 < g.size(); ++i) p.shape_.breaks.push_back(g.node(i));
    p.grid_source_ = std::make_shared<GridFunction>(g);
    return p;
  }

  /// cos²(πt/2) on [-1, 1]: the prior with minimal prior information among
  /// densities vanishing at ±1.
  static PriorDensity cosine() {
    return from_edge_function(
        Interval(-1, 1),
        [](double, double e) {
          const double s = std::sin(0.5 * kPi * e);
          return s * s;
        },
        [](double t) { return -0.5 * kPi * std::sin(kPi * t); }, Shape{{}, 2.0}, false);
  }

  static PriorDensity uniform(Interval domain) {
    const double v = 1.0 / domain.width();
    return from_function(
        domain, [v](double) { return v; }, [](double) { return 0.0; }, Shape{}, false);
  }

  /// μ·(factor) renormalized; factor must be positive. Keeps μ's endpoint
  /// behaviour, so it is the natural way to perturb a singular prior.
  static PriorDensity perturbed(const PriorDensity& mu, std::function<double(double)> factor) {
    Shape shape = mu.shape_;
    return from_edge_function(
        mu.domain_, [mu, factor](double t, double e) { return mu.at(t, e) * factor(t); }, {}, std::move(shape), true);
  }

  double operator()(double t) const { return at(t, edge_distance(domain_, t)); }
  double at(double t, double e) const { return scale_ * fn_(t, e); }

  double derivative(double t) const {
    if (deriv_) return scale_ * deriv_(t);
    const double h = 1e-6 * domain_.width();
    const double lo = std::max(domain_.lo, t - h);
    const double hi = std::min(domain_.hi, t + h);
    return ((*this)(hi) - (*this)(lo)) / (hi - lo);
  }

  const Interval& domain() const { return domain_; }
  const std::vector<double>& breaks() const { return shape_.breaks; }
  double end_exponent() const { return shape_.end_exponent; }
  /// The sampled values this prior was built from, if any.
  const GridFunction* grid_source() const { return grid_source_.get(); }

  /// Samples on `nodes` uniform nodes; non-finite endpoint values (integrable
  /// singular priors) are replaced by the value half a cell inside.
  GridFunction grid(std::size_t nodes = kDefaultGridNodes) const {
    if (grid_source_ && grid_source_->size() == nodes) return *grid_source_;
    require(nodes >= 3 && nodes % 2 == 1, ErrorCode::InvalidGrid, "grid needs an odd node count >= 3");
    std::vector<double> v(nodes);
    const double h = domain_.width() / static_cast<double>(nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i) {
      const double t = (i + 1 == nodes) ? domain_.hi : domain_.lo + h * static_cast<double>(i);
      v[i] = (*this)(t);
    }
    if (!std::isfinite(v.front())) v.front() = at(domain_.lo + 0.5 * h, 0.5 * h);
    if (!std::isfinite(v.back())) v.back() = at(domain_.hi - 0.5 * h, 0.5 * h);
    return GridFunction(domain_, std::move(v));
  }

 private:
  explicit PriorDensity(Interval domain) : domain_(domain) {}

  void check_nonnegative() const {
    for (int i = 1; i < 256; ++i) {
      const double t = domain_.lo + domain_.width() * i / 256.0;
      require(!((*this)(t) < 0.0), ErrorCode::DomainError, "prior must be nonnegative");
    }
  }

  Interval domain_;
  Shape shape_;
  EdgeFn fn_;
  std::function<double(double)> deriv_;
  std::shared_ptr<const GridFunction> grid_source_;
  double scale_ = 1.0;
};

enum class BoundMethod { Classical, AVT1, AVT2, AugmentedCustom };

inline std::string to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::Classical: return "classical";
    case BoundMethod::AVT1: return "avt1";
    case BoundMethod::AVT2: return "avt2";
    case BoundMethod::AugmentedCustom: return "augmented";
  }
  return "unknown";
}

struct BoundResult {
  double value = 0.0;
  BoundMethod method = BoundMethod::AugmentedCustom;
  std::map<std::string, double> params;
  std::optional<PriorDensity> prior;
  /// Set when the Bayes-bound denominator diverged; value is then 0.
  bool infinite_denominator = false;
  /// Set when the optimizer hit the open end of its search range and the
  /// value is the corresponding limit.
  bool at_boundary = false;
};

namespace detail {

inline void check_same_domain(const Interval& a, const Interval& b, const char* what) {
  require(a == b, ErrorCode::DomainError, std::string("domain mismatch: ") + what);
}

inline std::vector<double> merged_breaks(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace detail

/// J(μ) for a sampled prior via J = 4 ∫ ((√μ)')², which stays well
/// conditioned where μ vanishes. Divergence shows up as growth under grid
/// refinement (compared against every other node).
inline double grid_prior_information(const GridFunction& g) {
  auto info = [](const GridFunction& grid) {
    std::vector<double> root(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) root[i] = std::sqrt(grid[i]);
    const GridFunction r(grid.domain(), std::move(root));
    std::vector<double> sq(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = r.node_derivative(i);
      sq[i] = 4.0 * d * d;
    }
    return GridFunction(grid.domain(), std::move(sq)).simpson();
  };
  const double fine = info(g);
  if (g.size() >= 9 && (g.size() - 1) % 4 == 0) {
    std::vector<double> half;
    for (std::size_t i = 0; i < g.size(); i += 2) half.push_back(g[i]);
    const double coarse = info(GridFunction(g.domain(), std::move(half)));
    if (fine - coarse > 1e-2 * std::max(1.0, fine)) return std::numeric_limits<double>::infinity();
  }
  return fine;
}

/// J(μ) = ∫ (μ')²/μ with the 1/0 = 0 convention; +infinity when divergent.
///
/// Divergence is detected by integrating over [t1 + ε, t2 - ε] for a
/// shrinking sequence of ε: convergent integrals have geometrically
/// shrinking increments, divergent ones (e.g. logarithmic) do not.
inline double prior_information(const PriorDensity& mu) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (const GridFunction* g = mu.grid_source()) return grid_prior_information(*g);
  auto integrand = [&](double t) {
    const double m = mu(t);
    const double d = mu.derivative(t);
    if (m <= 0.0) return d == 0.0 ? 0.0 : kInf;
    return d * d / m;
  };
  const Interval& dom = mu.domain();
  double prev = 0.0, prev_inc = 0.0;
  double last = 0.0;
  try {
    int step = 0;
    for (double eps : {1e-3, 1e-6, 1e-9}) {
      const double e = eps * dom.width();
      const Interval inner(dom.lo + e, dom.hi - e);
      const double v = integrate_pieces(integrand, inner, mu.breaks(), 0.0, kBoundTol);
      if (!std::isfinite(v)) return kInf;
      if (step == 1) prev_inc = v - prev;
      if (step == 2) {
        const double inc = v - prev;
        if (inc > 1e-9 * std::max(1.0, std::abs(v)) && inc > 0.5 * prev_inc) return kInf;
      }
      prev = v;
      last = v;
      ++step;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonConvergence) return kInf;
    throw;
  }
  // Convergent: integrate the full range, flagging the endpoint power law
  // when the prior declares one.
  const double p = mu.end_exponent() - 2.0;
  try {
    return integrate_pieces(integrand, dom, mu.breaks(), (p < 0.0 && p > -1.0) ? p : 0.0, kBoundTol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonConvergence) throw;
    return last;
  }
}

/// 1 / (∫ I μ + J(μ)) for priors vanishing at both endpoints.
inline BoundResult classical_vt_bound(const FisherPath& path, const PriorDensity& mu) {
  detail::check_same_domain(path.domain(), mu.domain(), "path and prior");
  const Interval& dom = mu.domain();
  const GridFunction g = mu.grid(257);
  double peak = 0.0;
  for (double v : g.values()) peak = std::max(peak, v);
  const double edge_tol = 1e-12 * std::max(1.0, peak);
  require(std::abs(mu(dom.lo)) <= edge_tol && std::abs(mu(dom.hi)) <= edge_tol, ErrorCode::BoundaryViolation,
          "classical van Trees bound needs a prior vanishing at both endpoints");
  const double j = prior_information(mu);
  require(std::isfinite(j), ErrorCode::InfinitePriorInfo, "prior information is infinite");
  const double info = integrate_pieces_edge([&](double t, double e) { return path(t) * mu.at(t, e); }, dom,
                                            mu.breaks(), 0.0, kBoundTol);
  BoundResult r;
  r.method = BoundMethod::Classical;
  r.value = 1.0 / (info + j);
  r.params["prior_information"] = j;
  r.params["mean_information"] = info;
  r.prior = mu;
  return r;
}

/// Bayes-risk bound (∫α)² / ∫ (I α² + α'²)/μ for an arbitrary prior μ.
/// A divergent denominator yields value 0 with `infinite_denominator` set.
inline BoundResult augmented_bayes_bound(const FisherPath& path, const PriorDensity& mu, const Augmentation& alpha) {
  detail::check_same_domain(path.domain(), mu.domain(), "path and prior");
  detail::check_same_domain(path.domain(), alpha.domain(), "path and augmentation");
  const Interval& dom = path.domain();
  const auto breaks = detail::merged_breaks(alpha.breaks(), mu.breaks());

  const double num =
      integrate_pieces_edge([&](double t, double e) { return alpha.value_at(t, e); }, dom, breaks, 0.0, kBoundTol);
  BoundResult r;
  r.method = BoundMethod::AugmentedCustom;
  r.prior = mu;
  r.params["alpha_integral"] = num;

  const double exponent = 2.0 * alpha.end_exponent() - mu.end_exponent();
  auto mark_infinite = [&] {
    r.value = 0.0;
    r.infinite_denominator = true;
    r.params["denominator"] = std::numeric_limits<double>::infinity();
    return r;
  };
  if (exponent <= -1.0) return mark_infinite();

  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto integrand = [&](double t, double e) {
    const double a = alpha.value_at(t, e);
    const double da = alpha.derivative_at(t, e);
    const double top = path(t) * a * a + da * da;
    const double m = mu.at(t, e);
    if (m <= 0.0) return top == 0.0 ? 0.0 : kInf;
    return top / m;
  };
  double den = 0.0;
  try {
    den = integrate_pieces_edge(integrand, dom, breaks, exponent < 0.0 ? exponent : 0.0, kBoundTol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonConvergence) throw;
    return mark_infinite();
  }
  if (!std::isfinite(den)) return mark_infinite();
  require(den > 0.0, ErrorCode::ZeroAugmentation, "augmentation has zero information denominator");
  r.params["denominator"] = den;
  r.value = num * num / den;
  return r;
}

namespace detail {

inline EdgeFn root_information(const FisherPath& path, const Augmentation& alpha) {
  return [path, alpha](double t, double e) {
    const double a = alpha.value_at(t, e);
    return std::hypot(std::sqrt(path(t)) * a, alpha.derivative_at(t, e));
  };
}

inline double singular_exponent(const Augmentation& alpha) { return std::min(0.0, alpha.end_exponent()); }

}  // namespace detail

/// Prior proportional to sqrt(I α² + α'²), the maximizer of the Bayes bound
/// for fixed α.
inline PriorDensity optimal_prior(const FisherPath& path, const Augmentation& alpha) {
  detail::check_same_domain(path.domain(), alpha.domain(), "path and augmentation");
  const double p = detail::singular_exponent(alpha);
  const double z = integrate_pieces_edge(detail::root_information(path, alpha), path.domain(), alpha.breaks(), p,
                                         kBoundTol);
  require(z > 0.0 && std::isfinite(z), ErrorCode::ZeroAugmentation, "sqrt(I a^2 + a'^2) integrates to zero");
  return PriorDensity::from_edge_function_with_mass(path.domain(), detail::root_information(path, alpha),
                                                    PriorDensity::Shape{alpha.breaks(), p}, z);
}

/// Minimax bound (∫α / ∫ sqrt(I α² + α'²))², attained by `optimal_prior`.
inline BoundResult augmented_minimax_bound(const FisherPath& path, const Augmentation& alpha) {
  detail::check_same_domain(path.domain(), alpha.domain(), "path and augmentation");
  const Interval& dom = path.domain();
  const auto& breaks = alpha.breaks();
  const double num =
      integrate_pieces_edge([&](double t, double e) { return alpha.value_at(t, e); }, dom, breaks, 0.0, kBoundTol);
  const double abs_num = integrate_pieces_edge([&](double t, double e) { return std::abs(alpha.value_at(t, e)); },
                                               dom, breaks, 0.0, kBoundTol);
  require(std::abs(num) > 1e-12 * abs_num, ErrorCode::ZeroAugmentation, "augmentation integrates to 0");
  const double den = integrate_pieces_edge(detail::root_information(path, alpha), dom, breaks,
                                           detail::singular_exponent(alpha), kBoundTol);
  require(den > 0.0, ErrorCode::ZeroAugmentation, "sqrt(I a^2 + a'^2) integrates to zero");
  BoundResult r;
  r.method = BoundMethod::AugmentedCustom;
  r.value = (num / den) * (num / den);
  r.params = alpha.params();
  r.params["alpha_integral"] = num;
  r.params["root_information_integral"] = den;
  r.prior = PriorDensity::from_edge_function_with_mass(dom, detail::root_information(path, alpha),
                                                       PriorDensity::Shape{breaks, detail::singular_exponent(alpha)},
                                                       den);
  return r;
}

inline void check_fisher(double fisher) {
  require(fisher >= 0.0 && std::isfinite(fisher), ErrorCode::DomainError, "Fisher information must be finite and >= 0");
}

/// 1/(sqrt(I) + 1)², the δ ↘ 0 limit of the tent / exp-linear families.
inline BoundResult avt1_bound(double fisher) {
  check_fisher(fisher);
  BoundResult r;
  r.method = BoundMethod::AVT1;
  const double s = std::sqrt(fisher) + 1.0;
  r.value = 1.0 / (s * s);
  r.params["fisher"] = fisher;
  return r;
}

/// (m + 1)² · 2F1(...)², the squared inverse ratio of the power family.
inline double avt2_objective(double m, double fisher) {
  const double f = (m + 1.0) * hyp2f1_avt(m, fisher);
  return f * f;
}

struct Avt2Options {
  double m_min = 1e-8;
  double m_max = 1e3;
  std::size_t scan_points = 200;
  double tol = 1e-9;
};

/// 1 / inf_{m>0} (m + 1)² 2F1(-1/2, m/2, m/2 + 1; -I/m²)², searched over
/// log m. The infimum over the open set m > 0 also includes the m ↘ 0 limit
/// (sqrt(I) + 1)²; when that limit wins, or the search stops at m_min,
/// `at_boundary` is set, params["m"] is m_min and `prior` is empty.
inline BoundResult avt2_bound(double fisher, const Avt2Options& opt = {}) {
  check_fisher(fisher);
  const double lo = std::log(opt.m_min), hi = std::log(opt.m_max);
  const Min1d best = minimize_1d([&](double x) { return avt2_objective(std::exp(x), fisher); }, lo, hi, opt.tol,
                                 opt.scan_points);
  const double limit = (std::sqrt(fisher) + 1.0) * (std::sqrt(fisher) + 1.0);
  BoundResult r;
  r.method = BoundMethod::AVT2;
  r.params["fisher"] = fisher;
  double m_star = std::exp(best.argmin);
  double inf = best.min;
  r.at_boundary = best.argmin <= lo + 1e-6;
  if (limit <= inf) {
    inf = limit;
    r.at_boundary = true;
  }
  if (r.at_boundary) m_star = opt.m_min;
  r.params["m"] = m_star;
  r.params["objective"] = inf;
  r.value = 1.0 / inf;
  // The m ↘ 0 limit of the optimal priors is not a density (mass escapes to
  // the endpoints), so no prior is attached in that case.
  if (!r.at_boundary) {
    r.prior = optimal_prior(FisherPath::constant(Interval(-1, 1), fisher), Augmentation::power(m_star));
  }
  return r;
}

struct BoundSuite {
  double fisher;
  double classical_opt;
  double avt1;
  double avt2;
  double best;
  double m_star;
};

/// All three curves at one information level (one row of the bound plot).
inline BoundSuite bound_suite(double fisher) {
  check_fisher(fisher);
  BoundSuite s{};
  s.fisher = fisher;
  s.classical_opt = 1.0 / (fisher + kPi * kPi);
  s.avt1 = avt1_bound(fisher).value;
  const BoundResult a2 = avt2_bound(fisher);
  s.avt2 = a2.value;
  s.m_star = a2.params.at("m");
  s.best = std::max({s.classical_opt, s.avt1, s.avt2});
  return s;
}

/// Closed form of the exp-linear family's ratio ∫α / ∫ sqrt(I α² + α'²) at
/// finite δ (before squaring).
inline double exp_linear_ratio_closed_form(double fisher, double k, double delta) {
  const double e = std::exp(-(1.0 - delta) * k);
  const double num = 0.5 * delta * e + (1.0 - e) / k;
  // ∫_0^1 sqrt(c² u² + 1) du with c = δ sqrt(I).
  const double c = delta * std::sqrt(fisher);
  const double tail = c == 0.0 ? 1.0 : 0.5 * (std::sqrt(c * c + 1.0) + std::asinh(c) / c);
  const double den = std::sqrt(fisher / (k * k) + 1.0) * (1.0 - e) + e * tail;
  return num / den;
}

/// δ ↘ 0 limit of the exp-linear bound at fixed k:
/// 1 / (sqrt(I + k²) + k/(e^k - 1))².
inline double exp_linear_limit_bound(double fisher, double k) {
  const double f = std::sqrt(fisher + k * k) + k / std::expm1(k);
  return 1.0 / (f * f);
}

/// sup over k > 0 of the minimax bound of ExpLinear(k, δ), evaluated by
/// quadrature. params["k"] holds the maximizing k.
inline BoundResult exp_linear_sup_bound(double fisher, double delta, double k_min = 1e-6, double k_max = 50.0) {
  check_fisher(fisher);
  const FisherPath path = FisherPath::constant(Interval(-1, 1), fisher);
  const Min1d best = minimize_1d(
      [&](double x) { return -augmented_minimax_bound(path, Augmentation::exp_linear(std::exp(x), delta)).value; },
      std::log(k_min), std::log(k_max), 1e-7, 60);
  BoundResult r = augmented_minimax_bound(path, Augmentation::exp_linear(std::exp(best.argmin), delta));
  r.params["fisher"] = fisher;
  return r;
}

}  // namespace avt
