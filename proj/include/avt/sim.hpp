#pragma once

// Monte Carlo harness for the Hölder regression problem: the Gaussian bump
// subfamily used by the lower bound, Hölder membership checks, the
// ridge-regularized Nadaraya–Watson estimator, and pointwise / Bayes risk
// estimation with deterministic per-replication random streams.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "avt/bounds.hpp"
#include "avt/error.hpp"
#include "avt/holder.hpp"
#include "avt/numerics.hpp"
#include "avt/rng.hpp"
#include "avt/special.hpp"

namespace avt {

using Point = std::vector<double>;
using PointFn = std::function<double(std::span<const double>)>;
using GradFn = std::function<std::vector<double>(std::span<const double>)>;

// ---------------------------------------------------------------- covariates

enum class Covariate { Cube, Ball };

constexpr std::string_view to_string(Covariate c) { return c == Covariate::Cube ? "cube" : "ball"; }

inline Covariate parse_covariate(std::string_view s) {
  if (s == "cube" || s == "uniform_cube") return Covariate::Cube;
  if (s == "ball" || s == "uniform_ball") return Covariate::Ball;
  fail(ErrorCode::ConfigError, "unknown covariate law '" + std::string(s) + "' (expected cube or ball)");
}

/// Density of the covariate law on its support.
inline double covariate_density(Covariate c, int d) {
  require(d >= 1, ErrorCode::DomainError, "dimension must be >= 1");
  return c == Covariate::Cube ? std::exp(-d * std::numbers::ln2) : 1.0 / vol_ball(d);
}

namespace detail {

inline double sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

/// ||u||^β from ||u||².
inline double norm_pow(double r2, double beta) {
  if (beta == 2.0) return r2;
  if (beta == 1.0) return std::sqrt(r2);
  return std::pow(r2, 0.5 * beta);
}

}  // namespace detail

/// Whether the closed ball B(x0, h) lies inside the covariate support.
inline bool covariate_contains(Covariate c, std::span<const double> x0, double h) {
  constexpr double slack = 1e-12;
  if (c == Covariate::Ball) return std::sqrt(detail::sq_norm(x0)) + h <= 1.0 + slack;
  return std::all_of(x0.begin(), x0.end(), [h](double v) { return std::abs(v) + h <= 1.0 + slack; });
}

/// K(u) = (1 - ||u||^β)_+ evaluated from ||u||².
inline double bump_kernel(double beta, double r2) { return r2 >= 1.0 ? 0.0 : 1.0 - detail::norm_pow(r2, beta); }

// --------------------------------------------------------------- bump family

/// f_t(x) = t L h^β / (1∨β) K((x - x0)/h), t ∈ [-1, 1].
struct BumpFamily {
  double beta = 2.0;
  double L = 1.0;
  double h = 1.0;
  Point x0{0.0};

  static BumpFamily make(double beta, double L, double h, Point x0) {
    check_smoothness(beta, static_cast<int>(x0.size()));
    require(L > 0.0 && std::isfinite(L), ErrorCode::DomainError, "L must be > 0");
    require(h > 0.0 && std::isfinite(h), ErrorCode::DomainError, "bump width must be > 0");
    return BumpFamily{beta, L, h, std::move(x0)};
  }

  int d() const { return static_cast<int>(x0.size()); }

  /// f_1(x0) = L h^β / (1∨β).
  double peak() const { return L * std::pow(h, beta) / beta_floor(beta); }

  double operator()(double t, std::span<const double> x) const {
    return t * peak() * bump_kernel(beta, detail::sq_dist(x, x0) / (h * h));
  }

  std::vector<double> gradient(double t, std::span<const double> x) const {
    std::vector<double> g(x.size(), 0.0);
    const double r2 = detail::sq_dist(x, x0) / (h * h);
    if (r2 >= 1.0 || r2 == 0.0) return g;
    // ∇K(u) = -β ||u||^{β-2} u, chain rule brings 1/h.
    const double c = -t * peak() * beta * detail::norm_pow(r2, beta - 2.0) / (h * h);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = c * (x[i] - x0[i]);
    return g;
  }

  PointFn fn(double t) const {
    return [self = *this, t](std::span<const double> x) { return self(t, x); };
  }
  GradFn grad(double t) const {
    return [self = *this, t](std::span<const double> x) { return self.gradient(t, x); };
  }
};

/// L ||x - x0||^β / (1∨β): sits on the boundary of the Hölder class at x0 and
/// maximizes the kernel smoothing bias.
inline PointFn holder_extremal(double beta, double L, Point x0) {
  check_smoothness(beta, static_cast<int>(x0.size()));
  const double c = L / beta_floor(beta);
  return [beta, c, x0 = std::move(x0)](std::span<const double> x) {
    return c * detail::norm_pow(detail::sq_dist(x, x0), beta);
  };
}

// --------------------------------------------------------- Hölder membership

using ProbePair = std::pair<Point, Point>;

struct HolderCheck {
  bool member = true;
  double worst_ratio = 0.0;
};

/// Worst ratio |f(x) - f(y)| / ||x - y||^β (β <= 1) or
/// ||∇f(x) - ∇f(y)|| / ||x - y||^{β-1} (β > 1) over the probe pairs.
/// The class is anchored at the estimation point, so pairs are normally (x0, x).
inline HolderCheck holder_membership_check(const PointFn& f, const GradFn& grad_f, double beta, double L,
                                           const std::vector<ProbePair>& probes) {
  require(beta > 0.0 && beta <= 2.0, ErrorCode::DomainError, "beta must lie in (0, 2]");
  require(L > 0.0, ErrorCode::DomainError, "L must be > 0");
  require(!probes.empty(), ErrorCode::DegenerateInput, "need at least one probe pair");
  require(beta <= 1.0 || static_cast<bool>(grad_f), ErrorCode::MissingGradient, "beta > 1 requires a gradient");
  HolderCheck out;
  for (const auto& [x, y] : probes) {
    require(x.size() == y.size(), ErrorCode::DomainError, "probe points differ in dimension");
    const double dist = std::sqrt(detail::sq_dist(x, y));
    if (dist == 0.0) continue;
    double ratio;
    if (beta <= 1.0) {
      ratio = std::abs(f(x) - f(y)) / std::pow(dist, beta);
    } else {
      const auto gx = grad_f(x), gy = grad_f(y);
      ratio = std::sqrt(detail::sq_dist(gx, gy)) / std::pow(dist, beta - 1.0);
    }
    out.worst_ratio = std::max(out.worst_ratio, ratio);
  }
  out.member = out.worst_ratio <= L * (1.0 + 1e-9);
  return out;
}

/// `count` pairs (x0, x) with x uniform in the ball of the given radius.
inline std::vector<ProbePair> anchored_probes(const Point& x0, double radius, std::size_t count, std::uint64_t seed) {
  Stream s(seed, 0, StreamTag::Probe);
  const std::size_t d = x0.size();
  std::vector<ProbePair> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Point dir(d);
    double nn = 0.0;
    do {
      for (auto& v : dir) v = s.normal();
      nn = std::sqrt(detail::sq_norm(dir));
    } while (nn == 0.0);
    const double r = radius * std::pow(s.uniform(), 1.0 / static_cast<double>(d));
    Point x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = x0[i] + r * dir[i] / nn;
    out.emplace_back(x0, std::move(x));
  }
  return out;
}

// ------------------------------------------------------------------ samples

struct RegressionSample {
  int d = 1;
  std::vector<double> xs;  ///< row-major n × d
  std::vector<double> ys;

  std::size_t size() const { return ys.size(); }
  std::span<const double> x(std::size_t i) const { return {xs.data() + i * d, static_cast<std::size_t>(d)}; }
};

struct SimConfig {
  HolderProblem problem{};
  Covariate covariate = Covariate::Cube;
  std::size_t reps = 1000;
  std::uint64_t seed = 20240601;
  std::size_t t_nodes = 33;
  Point x0{};  ///< empty means the origin
  unsigned threads = 0;
  double ridge_r = 6.0;
  double fisher_target = 1.0;
  std::optional<double> estimator_bandwidth{};
  std::string estimator = "nw";
  std::string prior = "avt2";
  bool records = false;

  std::size_t n() const { return static_cast<std::size_t>(problem.n); }

  Point anchor() const { return x0.empty() ? Point(static_cast<std::size_t>(problem.d), 0.0) : x0; }

  void validate() const {
    // Noise-free runs are allowed here; the rate formulas still need σ² > 0.
    HolderProblem p = problem;
    if (p.sigma2 == 0.0) p.sigma2 = 1.0;
    p.validate();
    require(problem.n == std::floor(problem.n), ErrorCode::ConfigError, "n must be an integer");
    require(reps >= 1, ErrorCode::ConfigError, "reps must be >= 1");
    require(t_nodes >= 2 && t_nodes <= 256, ErrorCode::ConfigError, "t_nodes must lie in [2, 256]");
    require(x0.empty() || x0.size() == static_cast<std::size_t>(problem.d), ErrorCode::ConfigError,
            "x0 must have d coordinates");
    for (double v : x0) require(std::isfinite(v), ErrorCode::ConfigError, "x0 must be finite");
    const double dens = covariate_density(covariate, problem.d);
    require(std::abs(problem.px0 - dens) <= 1e-9 * dens, ErrorCode::ConfigError,
            "px0 must equal the covariate density " + std::to_string(dens));
    require(ridge_r > 0.0 && std::isfinite(ridge_r), ErrorCode::ConfigError, "ridge_r must be > 0");
    require(fisher_target > 0.0 && std::isfinite(fisher_target), ErrorCode::ConfigError, "fisher_target must be > 0");
    require(!estimator_bandwidth || (*estimator_bandwidth > 0.0 && std::isfinite(*estimator_bandwidth)),
            ErrorCode::ConfigError, "estimator_bandwidth must be > 0");
    require(estimator == "nw", ErrorCode::ConfigError, "estimator must be nw");
    require(prior == "avt2" || prior == "cosine", ErrorCode::ConfigError, "prior must be avt2 or cosine");
  }
};

namespace detail {

inline void draw_design(const SimConfig& c, std::size_t rep, std::vector<double>& xs) {
  const std::size_t n = c.n(), d = static_cast<std::size_t>(c.problem.d);
  xs.resize(n * d);
  Stream s(c.seed, rep, StreamTag::Covariate);
  if (c.covariate == Covariate::Cube) {
    for (auto& v : xs) v = s.uniform(-1.0, 1.0);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double* p = xs.data() + i * d;
    double nn = 0.0;
    do {
      for (std::size_t k = 0; k < d; ++k) p[k] = s.normal();
      nn = std::sqrt(sq_norm({p, d}));
    } while (nn == 0.0);
    const double r = std::pow(s.uniform(), 1.0 / static_cast<double>(d));
    for (std::size_t k = 0; k < d; ++k) p[k] *= r / nn;
  }
}

/// σ ε_i for i < n.
inline void draw_noise(const SimConfig& c, std::size_t rep, std::vector<double>& eps) {
  eps.resize(c.n());
  Stream s(c.seed, rep, StreamTag::Noise);
  const double sigma = std::sqrt(c.problem.sigma2);
  for (auto& v : eps) v = sigma * s.normal();
}

/// Runs body(i) for i < count; each index owns its output slot, so results
/// do not depend on the thread count.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  unsigned t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  t = static_cast<unsigned>(std::min<std::size_t>(t, count));
  if (t <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned id = 0; id < t; ++id) {
    pool.emplace_back([&, id] {
      for (std::size_t i = id; i < count; i += t) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

}  // namespace detail

/// Deterministic in (seed, rep): Y_i = f(X_i) + ε_i.
inline RegressionSample simulate_dataset(const PointFn& f, const SimConfig& config, std::size_t rep) {
  config.validate();
  RegressionSample s;
  s.d = config.problem.d;
  detail::draw_design(config, rep, s.xs);
  detail::draw_noise(config, rep, s.ys);
  for (std::size_t i = 0; i < s.size(); ++i) s.ys[i] += f(s.x(i));
  return s;
}

// --------------------------------------------------------------- estimator

struct EstimatorSpec {
  double beta = 2.0;
  int d = 1;
  double h = 1.0;
  double r = 6.0;
  double normalizer = 1.0;  ///< scales K to integrate to one

  static EstimatorSpec nadaraya_watson(double beta, int d, double h, double r = 6.0) {
    const auto k = kernel_constants(beta, d);
    require(h > 0.0 && std::isfinite(h), ErrorCode::DomainError, "bandwidth must be > 0");
    require(r > 0.0 && std::isfinite(r), ErrorCode::DomainError, "ridge exponent must be > 0");
    return EstimatorSpec{beta, d, h, r, k.normalizer};
  }
};

/// Weights w with f̂(x0) = Σ w_i Y_i; they depend on the design only.
inline void nw_weights(const RegressionSample& s, const EstimatorSpec& spec, std::span<const double> x0,
                       std::vector<double>& w) {
  const std::size_t n = s.size();
  require(x0.size() == static_cast<std::size_t>(s.d) && spec.d == s.d, ErrorCode::DomainError,
          "estimator, sample and x0 dimensions differ");
  w.assign(n, 0.0);
  if (n == 0) return;
  const double inv_h2 = 1.0 / (spec.h * spec.h);
  const double scale = spec.normalizer / std::pow(spec.h, spec.d) / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = bump_kernel(spec.beta, detail::sq_dist(s.x(i), x0) * inv_h2);
    if (k > 0.0) {
      w[i] = scale * k;
      total += w[i];
    }
  }
  const double den = total + std::pow(static_cast<double>(n), -spec.r);
  for (auto& v : w) v /= den;
}

inline double nw_estimate(const RegressionSample& s, const EstimatorSpec& spec, std::span<const double> x0) {
  std::vector<double> w;
  nw_weights(s, spec, x0, w);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += w[i] * s.ys[i];
  return acc;
}

// ---------------------------------------------------------------- risks

struct MonteCarloResult {
  double risk = 0.0;
  double se = 0.0;
  std::size_t reps = 0;
};

inline MonteCarloResult mean_and_se(std::span<const double> v) {
  MonteCarloResult r;
  r.reps = v.size();
  if (v.empty()) return r;
  const double m = detail::pairwise_sum(v) / static_cast<double>(v.size());
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - m) * (v[i] - m);
  r.risk = m;
  if (v.size() > 1) r.se = std::sqrt(detail::pairwise_sum(dev) / static_cast<double>(v.size() - 1) / v.size());
  return r;
}

/// Mean and standard error of (f̂(x0) - f(x0))² over replications.
inline MonteCarloResult mc_pointwise_risk(const PointFn& f, const EstimatorSpec& spec, const SimConfig& config) {
  config.validate();
  require(config.reps >= 30, ErrorCode::DomainError, "pointwise risk needs reps >= 30");
  const Point x0 = config.anchor();
  const double truth = f(x0);
  std::vector<double> loss(config.reps);
  detail::parallel_for(config.reps, config.threads, [&](std::size_t rep) {
    const auto s = simulate_dataset(f, config, rep);
    const double e = nw_estimate(s, spec, x0) - truth;
    loss[rep] = e * e;
  });
  return mean_and_se(loss);
}

/// Estimator of t for the bump subfamily.
struct TEstimator {
  std::string name;
  /// t̂ from the sample. The second argument is the true t; only test doubles read it.
  std::function<double(const RegressionSample&, double)> evaluate;
  /// Optional: weights w with t̂ = Σ w_i Y_i, which lets all t-nodes share one pass.
  std::function<void(const RegressionSample&, std::vector<double>&)> linear;
  bool uses_truth = false;

  /// t̂ = (1∨β)/(L h^β) f̂(x0) with f̂ the Nadaraya–Watson estimate.
  static TEstimator nadaraya_watson(const EstimatorSpec& spec, const BumpFamily& family) {
    require(spec.d == family.d(), ErrorCode::DomainError, "estimator and family dimensions differ");
    const double inv_peak = 1.0 / family.peak();
    const Point x0 = family.x0;
    TEstimator e;
    e.name = "nw";
    e.linear = [spec, x0, inv_peak](const RegressionSample& s, std::vector<double>& w) {
      nw_weights(s, spec, x0, w);
      for (auto& v : w) v *= inv_peak;
    };
    e.evaluate = [spec, x0, inv_peak](const RegressionSample& s, double) { return inv_peak * nw_estimate(s, spec, x0); };
    return e;
  }

  static TEstimator constant(double c) {
    TEstimator e;
    e.name = "constant";
    e.evaluate = [c](const RegressionSample&, double) { return c; };
    return e;
  }

  /// Test double: returns the truth.
  static TEstimator perfect() {
    TEstimator e;
    e.name = "perfect";
    e.evaluate = [](const RegressionSample&, double t) { return t; };
    e.uses_truth = true;
    return e;
  }
};

struct GaussRule {
  std::vector<double> nodes;  ///< ascending in (-1, 1)
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(std::size_t n) {
  require(n >= 1, ErrorCode::DomainError, "need at least one node");
  // P_n(x) and P_{n-1}(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = p2;
    }
    return n == 1 ? std::pair{x, 1.0} : std::pair{p1, p0};
  };
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre(x);
      dp = static_cast<double>(n) * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre(x);
    dp = static_cast<double>(n) * (x * pn - pm) / (x * x - 1.0);
    g.nodes[n - 1 - i] = x;
    g.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

/// Product-integration weights w_j = ∫ μ(t) ℓ_j(t) dt, with ℓ_j the Lagrange
/// basis on the Gauss nodes. Σ w_j g(t_j) integrates polynomial g (degree < n)
/// against μ exactly, whatever the smoothness of μ.
inline std::vector<double> prior_weights(const PriorDensity& prior, const GaussRule& g) {
  const std::size_t n = g.nodes.size();
  std::vector<double> bary(n);
  for (std::size_t j = 0; j < n; ++j) {
    bary[j] = ((j % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - g.nodes[j] * g.nodes[j]) * g.weights[j]);
  }
  auto basis = [&](std::size_t j, double t) {
    double den = 0.0, num = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (t == g.nodes[k]) return k == j ? 1.0 : 0.0;
      const double c = bary[k] / (t - g.nodes[k]);
      den += c;
      if (k == j) num = c;
    }
    return num / den;
  };
  const double p = std::min(0.0, prior.end_exponent());
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = integrate_pieces_edge([&](double t, double e) { return prior.at(t, e) * basis(j, t); }, prior.domain(),
                                 prior.breaks(), p, 1e-11);
  }
  return w;
}

struct BayesRecord {
  std::size_t rep;
  double t;
  double estimate;
  double sq_error;
};

struct BayesResult {
  double risk = 0.0;
  double se = 0.0;
  std::size_t reps = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> node_risk;  ///< E_t (t̂ - t)² at each node
  /// max over nodes of node_risk, a lower estimate of the sup over t.
  double max_node_risk = 0.0;
};

/// ∫ E_t (t̂ - t)² μ(t) dt: the inner expectation by Monte Carlo with common
/// random numbers across t, the outer integral by product quadrature.
inline BayesResult mc_bayes_risk(const BumpFamily& family, const PriorDensity& prior, const TEstimator& est,
                                 const SimConfig& config, const std::function<void(const BayesRecord&)>& sink = {}) {
  config.validate();
  require(family.d() == config.problem.d, ErrorCode::DomainError, "family and config dimensions differ");
  require(prior.domain().lo == -1.0 && prior.domain().hi == 1.0, ErrorCode::DomainError, "prior must live on [-1, 1]");
  require(static_cast<bool>(est.evaluate), ErrorCode::DomainError, "estimator is empty");

  BayesResult out;
  const GaussRule rule = gauss_legendre(config.t_nodes);
  out.nodes = rule.nodes;
  out.weights = prior_weights(prior, rule);
  const std::size_t nt = rule.nodes.size();
  out.reps = config.reps;

  std::vector<double> loss(config.reps);
  std::vector<double> node_sum(nt, 0.0);
  constexpr std::size_t kBlock = 2048;
  std::vector<double> est_block;
  for (std::size_t start = 0; start < config.reps; start += kBlock) {
    const std::size_t count = std::min(kBlock, config.reps - start);
    est_block.assign(count * nt, 0.0);
    detail::parallel_for(count, config.threads, [&](std::size_t k) {
      const std::size_t rep = start + k;
      RegressionSample s;
      s.d = family.d();
      detail::draw_design(config, rep, s.xs);
      std::vector<double> eps;
      detail::draw_noise(config, rep, eps);
      std::vector<double> g(eps.size());
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = family(1.0, s.x(i));
      double* row = est_block.data() + k * nt;
      if (est.linear && !est.uses_truth) {
        std::vector<double> w;
        s.ys = eps;
        est.linear(s, w);
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
          a += w[i] * g[i];
          b += w[i] * eps[i];
        }
        for (std::size_t j = 0; j < nt; ++j) row[j] = rule.nodes[j] * a + b;
      } else {
        s.ys.resize(eps.size());
        for (std::size_t j = 0; j < nt; ++j) {
          for (std::size_t i = 0; i < eps.size(); ++i) s.ys[i] = rule.nodes[j] * g[i] + eps[i];
          row[j] = est.evaluate(s, rule.nodes[j]);
        }
      }
    });
    for (std::size_t k = 0; k < count; ++k) {
      const double* row = est_block.data() + k * nt;
      double acc = 0.0;
      for (std::size_t j = 0; j < nt; ++j) {
        const double e = row[j] - rule.nodes[j];
        acc += out.weights[j] * e * e;
        node_sum[j] += e * e;
        if (sink) sink(BayesRecord{start + k, rule.nodes[j], row[j], e * e});
      }
      loss[start + k] = acc;
    }
  }
  const auto m = mean_and_se(loss);
  out.risk = m.risk;
  out.se = m.se;
  out.node_risk.resize(nt);
  for (std::size_t j = 0; j < nt; ++j) out.node_risk[j] = node_sum[j] / static_cast<double>(config.reps);
  out.max_node_risk = *std::max_element(out.node_risk.begin(), out.node_risk.end());
  return out;
}

// ------------------------------------------------------- information, rate

/// L² n h^{2β+d} / ((1∨β)² σ²) ∫ K²(u) p_X(x0 + h u) du. Both covariate laws
/// are constant on the bump support, so the integral is px0 ∫ K².
inline double subfamily_fisher_info(const BumpFamily& family, Covariate covariate, double sigma2, double n) {
  require(sigma2 > 0.0 && std::isfinite(sigma2), ErrorCode::DomainError, "sigma2 must be > 0");
  require(n >= 1.0 && std::isfinite(n), ErrorCode::DomainError, "n must be >= 1");
  require(covariate_contains(covariate, family.x0, family.h), ErrorCode::SupportViolation,
          "bump support leaves the covariate support");
  const int d = family.d();
  const double beta = family.beta;
  const double k2 = radial_integral(
      [beta](double r) {
        const double k = 1.0 - std::pow(r, beta);
        return k * k;
      },
      d, 1e-13);
  const double lb = beta_floor(beta);
  return family.L * family.L * n * std::pow(family.h, 2.0 * beta + d) * covariate_density(covariate, d) * k2 /
         (lb * lb * sigma2);
}

/// Least-squares slope of log risk against log n.
inline double rate_regression(const std::vector<std::pair<double, double>>& points) {
  require(points.size() >= 4, ErrorCode::DegenerateInput, "need at least 4 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [n, risk] = points[i];
    require(risk > 0.0 && std::isfinite(risk), ErrorCode::DegenerateInput, "risks must be > 0");
    require(n > 0.0 && (i == 0 || n > points[i - 1].first), ErrorCode::DegenerateInput,
            "n must be positive and strictly increasing");
    mx += std::log(n);
    my += std::log(risk);
  }
  mx /= points.size();
  my /= points.size();
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [n, risk] : points) {
    const double dx = std::log(n) - mx;
    sxy += dx * (std::log(risk) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// ------------------------------------------------------------ experiments

struct BayesExperiment {
  BumpFamily family;
  double fisher = 0.0;
  double bound = 0.0;
  double estimator_bandwidth = 0.0;
  BayesResult result;
  bool pass = false;  ///< risk >= bound - 3 se
};

/// The bump subfamily with information `fisher_target`, the configured prior
/// and its Bayes lower bound, and the Monte Carlo Bayes risk of `est`
/// (Nadaraya–Watson by default).
inline BayesExperiment run_bayes_experiment(const SimConfig& config, std::optional<TEstimator> est = std::nullopt,
                                            const std::function<void(const BayesRecord&)>& sink = {}) {
  config.validate();
  const auto& p = config.problem;
  BayesExperiment ex;
  ex.family = BumpFamily::make(p.beta, p.L, bandwidth_for_information(p, config.fisher_target), config.anchor());
  ex.fisher = subfamily_fisher_info(ex.family, config.covariate, p.sigma2, p.n);

  const Interval unit(-1.0, 1.0);
  std::optional<PriorDensity> prior;
  if (config.prior == "avt2") {
    const auto b = avt2_bound(ex.fisher);
    require(b.prior.has_value(), ErrorCode::DegenerateInput, "the optimal prior degenerates at this information");
    prior = *b.prior;
    ex.bound = b.value;
  } else {
    prior = PriorDensity::cosine();
    ex.bound = classical_vt_bound(FisherPath::constant(unit, ex.fisher), *prior).value;
  }

  ex.estimator_bandwidth = config.estimator_bandwidth.value_or(optimal_bandwidth(p));
  if (!est) {
    const auto spec = EstimatorSpec::nadaraya_watson(p.beta, p.d, ex.estimator_bandwidth, config.ridge_r);
    est = TEstimator::nadaraya_watson(spec, ex.family);
  }
  ex.result = mc_bayes_risk(ex.family, *prior, *est, config, sink);
  ex.pass = ex.result.risk >= ex.bound - 3.0 * ex.result.se;
  return ex;
}

struct RatePoint {
  double n = 0.0;
  double bandwidth = 0.0;
  MonteCarloResult mc;
  double upper_bound = 0.0;  ///< C(β, d) · rate
};

struct RateExperiment {
  std::vector<RatePoint> points;
  double slope = 0.0;
};

/// Nadaraya–Watson risk at the class-extremal function with the optimal
/// bandwidth, for each n in `ns`.
inline RateExperiment run_rate_experiment(const SimConfig& base, const std::vector<double>& ns) {
  RateExperiment ex;
  std::vector<std::pair<double, double>> pts;
  for (double n : ns) {
    SimConfig c = base;
    c.problem.n = n;
    c.validate();
    RatePoint rp;
    rp.n = n;
    rp.bandwidth = c.estimator_bandwidth.value_or(optimal_bandwidth(c.problem));
    const auto spec = EstimatorSpec::nadaraya_watson(c.problem.beta, c.problem.d, rp.bandwidth, c.ridge_r);
    rp.mc = mc_pointwise_risk(holder_extremal(c.problem.beta, c.problem.L, c.anchor()), spec, c);
    rp.upper_bound = upper_bound_risk(c.problem);
    pts.emplace_back(n, rp.mc.risk);
    ex.points.push_back(rp);
  }
  if (pts.size() >= 4) ex.slope = rate_regression(pts);
  return ex;
}

}  // namespace avt
