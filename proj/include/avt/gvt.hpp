#pragma once

// Generalized (multivariate, vector-functional) augmented van Trees bound:
//   Γ = V M⁻¹ Vᵀ,  V = ∫ ∇φ α,  M = ∫ (I α² + ∇α ∇αᵀ)/μ,
//   bound = (sqrt(λ_max(Γ)) - (∫ ||ψ - φ||² μ)^{1/2})₊²
// on an axis-aligned box in R^d, d <= 3, Euclidean norm.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "avt/bounds.hpp"
#include "avt/error.hpp"
#include "avt/numerics.hpp"

namespace avt {

using Box = std::vector<Interval>;
using VecFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using MatFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
using ScalarFnD = std::function<double(const Eigen::VectorXd&)>;

namespace detail {

/// 3^d probe points: each coordinate at lo, mid or hi.
inline std::vector<Eigen::VectorXd> box_probes(const Box& box, bool interior) {
  const std::size_t d = box.size();
  std::vector<Eigen::VectorXd> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    Eigen::VectorXd t(static_cast<Eigen::Index>(d));
    std::size_t c = code;
    for (std::size_t i = 0; i < d; ++i) {
      const int which = static_cast<int>(c % 3);
      c /= 3;
      const double frac = interior ? 0.25 + 0.25 * which : 0.5 * which;
      t[static_cast<Eigen::Index>(i)] = box[i].lo + frac * box[i].width();
    }
    out.push_back(std::move(t));
  }
  return out;
}

/// Points on ∂box: for each axis, both faces, at the 3^{d-1} face probes.
inline std::vector<Eigen::VectorXd> boundary_probes(const Box& box) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& p : box_probes(box, false)) {
    for (std::size_t i = 0; i < box.size(); ++i) {
      const double v = p[static_cast<Eigen::Index>(i)];
      if (v == box[i].lo || v == box[i].hi) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

inline void check_box(const Box& box) {
  require(!box.empty() && box.size() <= 3, ErrorCode::DomainError, "parameter box must have dimension 1..3");
}

}  // namespace detail

/// Parameter box with a matrix-valued Fisher information.
struct MultiPath {
  Box box;
  MatFn info;

  static MultiPath make(Box box, MatFn info) {
    detail::check_box(box);
    MultiPath p{std::move(box), std::move(info)};
    const auto d = static_cast<Eigen::Index>(p.box.size());
    for (const auto& t : detail::box_probes(p.box, false)) {
      const Eigen::MatrixXd m = p.info(t);
      require(m.rows() == d && m.cols() == d, ErrorCode::DomainError, "information matrix must be d x d");
      require(m.allFinite(), ErrorCode::DomainError, "information matrix must be finite");
      require((m - m.transpose()).norm() <= 1e-10 * std::max(1.0, m.norm()), ErrorCode::DomainError,
              "information matrix must be symmetric");
      const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()[0];
      require(lmin >= -1e-10 * std::max(1.0, m.trace()), ErrorCode::DomainError,
              "information matrix must be positive semidefinite");
    }
    return p;
  }

  /// I(t) = c · Id.
  static MultiPath isotropic(Box box, double c) {
    require(c >= 0.0 && std::isfinite(c), ErrorCode::DomainError, "information must be >= 0");
    const auto d = static_cast<Eigen::Index>(box.size());
    return make(std::move(box), [c, d](const Eigen::VectorXd&) {
      return Eigen::MatrixXd(c * Eigen::MatrixXd::Identity(d, d));
    });
  }

  static MultiPath scalar(const FisherPath& path) {
    return make({path.domain()}, [path](const Eigen::VectorXd& t) {
      Eigen::MatrixXd m(1, 1);
      m(0, 0) = path(t[0]);
      return m;
    });
  }

  std::size_t dim() const { return box.size(); }
};

/// φ : T → R^k with its k x d Jacobian.
struct ApproxFn {
  std::size_t k = 1;
  VecFn phi;
  MatFn grad;

  /// Analytic Jacobian, checked against central differences (1e-5).
  static ApproxFn make(const Box& box, std::size_t k, VecFn phi, MatFn grad) {
    detail::check_box(box);
    ApproxFn f{k, std::move(phi), std::move(grad)};
    const auto d = static_cast<Eigen::Index>(box.size());
    for (const auto& t : detail::box_probes(box, true)) {
      const Eigen::VectorXd v = f.phi(t);
      require(v.size() == static_cast<Eigen::Index>(k), ErrorCode::DomainError, "phi has the wrong output size");
      const Eigen::MatrixXd g = f.grad(t);
      require(g.rows() == static_cast<Eigen::Index>(k) && g.cols() == d, ErrorCode::DomainError,
              "grad_phi must be k x d");
      for (Eigen::Index j = 0; j < d; ++j) {
        const double h = 1e-6 * box[static_cast<std::size_t>(j)].width();
        Eigen::VectorXd tp = t, tm = t;
        tp[j] += h;
        tm[j] -= h;
        const Eigen::VectorXd fd = (f.phi(tp) - f.phi(tm)) / (2.0 * h);
        for (Eigen::Index i = 0; i < fd.size(); ++i) {
          require(std::abs(fd[i] - g(i, j)) <= 1e-5 * std::max(1.0, std::abs(g(i, j))), ErrorCode::DomainError,
                  "grad_phi inconsistent with phi under central differences");
        }
      }
    }
    return f;
  }

  /// Jacobian by central differences.
  static ApproxFn finite_difference(const Box& box, std::size_t k, VecFn phi) {
    std::vector<double> steps;
    for (const auto& iv : box) steps.push_back(1e-6 * iv.width());
    auto grad = [phi, steps, k](const Eigen::VectorXd& t) {
      Eigen::MatrixXd g(static_cast<Eigen::Index>(k), t.size());
      for (Eigen::Index j = 0; j < t.size(); ++j) {
        Eigen::VectorXd tp = t, tm = t;
        const double h = steps[static_cast<std::size_t>(j)];
        tp[j] += h;
        tm[j] -= h;
        g.col(j) = (phi(tp) - phi(tm)) / (2.0 * h);
      }
      return g;
    };
    return make(box, k, std::move(phi), std::move(grad));
  }

  static ApproxFn identity(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return ApproxFn{d, [](const Eigen::VectorXd& t) { return t; },
                    [n](const Eigen::VectorXd&) { return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n)); }};
  }

  static ApproxFn constant(const Eigen::VectorXd& c, std::size_t d) {
    const auto rows = c.size();
    const auto cols = static_cast<Eigen::Index>(d);
    return ApproxFn{static_cast<std::size_t>(c.size()), [c](const Eigen::VectorXd&) { return c; },
                    [rows, cols](const Eigen::VectorXd&) { return Eigen::MatrixXd(Eigen::MatrixXd::Zero(rows, cols)); }};
  }

  /// Scalar φ(t) on a 1-D box.
  static ApproxFn scalar(const Interval& dom, std::function<double(double)> f, std::function<double(double)> df) {
    return make(
        {dom}, 1,
        [f](const Eigen::VectorXd& t) {
          Eigen::VectorXd v(1);
          v[0] = f(t[0]);
          return v;
        },
        [df](const Eigen::VectorXd& t) {
          Eigen::MatrixXd g(1, 1);
          g(0, 0) = df(t[0]);
          return g;
        });
  }
};

/// α : T → R vanishing on ∂T, with its gradient.
struct AugmentationD {
  ScalarFnD alpha;
  VecFn grad;

  static AugmentationD make(const Box& box, ScalarFnD alpha, VecFn grad) {
    detail::check_box(box);
    AugmentationD a{std::move(alpha), std::move(grad)};
    for (const auto& t : detail::boundary_probes(box)) {
      require(std::abs(a.alpha(t)) <= 1e-12, ErrorCode::BoundaryViolation, "alpha must vanish on the boundary");
    }
    return a;
  }

  /// ∏ cos²(π(t_i - c_i)/w_i) on the box (c: centre, w: width).
  static AugmentationD product_cosine(const Box& box) {
    std::vector<double> centre, width;
    for (const auto& iv : box) {
      centre.push_back(iv.mid());
      width.push_back(iv.width());
    }
    auto factor = [centre, width](const Eigen::VectorXd& t, Eigen::Index i) {
      const double c = std::cos(std::numbers::pi * (t[i] - centre[static_cast<std::size_t>(i)]) /
                                width[static_cast<std::size_t>(i)]);
      return c * c;
    };
    auto alpha = [factor](const Eigen::VectorXd& t) {
      double v = 1.0;
      for (Eigen::Index i = 0; i < t.size(); ++i) v *= factor(t, i);
      return v;
    };
    auto grad = [factor, centre, width](const Eigen::VectorXd& t) {
      Eigen::VectorXd g(t.size());
      for (Eigen::Index j = 0; j < t.size(); ++j) {
        const double w = width[static_cast<std::size_t>(j)];
        double v = -(std::numbers::pi / w) * std::sin(2.0 * std::numbers::pi * (t[j] - centre[static_cast<std::size_t>(j)]) / w);
        for (Eigen::Index i = 0; i < t.size(); ++i) {
          if (i != j) v *= factor(t, i);
        }
        g[j] = v;
      }
      return g;
    };
    return make(box, alpha, grad);
  }

  static AugmentationD scalar(const Augmentation& a) {
    return make(
        {a.domain()}, [a](const Eigen::VectorXd& t) { return a.value(t[0]); },
        [a](const Eigen::VectorXd& t) {
          Eigen::VectorXd g(1);
          g[0] = a.derivative(t[0]);
          return g;
        });
  }
};

struct GvtOptions {
  /// Simpson nodes per axis (odd).
  std::size_t nodes = 257;
  /// 0 = hardware concurrency.
  unsigned threads = 0;
};

struct GammaResult {
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd middle;  ///< ∫ (I α² + ∇α∇αᵀ)/μ
  Eigen::MatrixXd v;       ///< ∫ ∇φ α
  double approx_error = 0.0;
  double prior_mass = 0.0;
  bool infinite_middle = false;
  bool jittered = false;
};

namespace detail {

struct GvtSums {
  Eigen::MatrixXd v, middle;
  double err2 = 0.0, mass = 0.0;
  bool infinite = false;
};

/// One pass of tensor-product Simpson over the box; partial sums per slab of
/// the first axis are combined in index order so the result does not depend
/// on the thread count.
inline GvtSums gvt_sums(const MultiPath& path, const ScalarFnD& mu, const ApproxFn& phi, const AugmentationD& alpha,
                        const ApproxFn* psi, const GvtOptions& opt) {
  const std::size_t n = opt.nodes;
  require(n >= 3 && n % 2 == 1, ErrorCode::InvalidGrid, "tensor grid needs an odd node count >= 3");
  const std::size_t d = path.dim();
  const auto di = static_cast<Eigen::Index>(d);
  const auto ki = static_cast<Eigen::Index>(phi.k);

  std::vector<double> w1(n);
  for (std::size_t i = 0; i < n; ++i) w1[i] = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  double scale = 1.0;
  for (const auto& iv : path.box) scale *= iv.width() / (3.0 * static_cast<double>(n - 1));
  auto coord = [&](std::size_t axis, std::size_t i) {
    const Interval& iv = path.box[axis];
    return (i + 1 == n) ? iv.hi : iv.lo + iv.width() * static_cast<double>(i) / static_cast<double>(n - 1);
  };

  std::size_t inner = 1;
  for (std::size_t a = 1; a < d; ++a) inner *= n;

  auto slab = [&](std::size_t i0) {
    GvtSums s{Eigen::MatrixXd::Zero(ki, di), Eigen::MatrixXd::Zero(di, di), 0.0, 0.0, false};
    Eigen::VectorXd t(di);
    t[0] = coord(0, i0);
    for (std::size_t code = 0; code < inner; ++code) {
      double w = w1[i0];
      std::size_t c = code;
      for (std::size_t a = 1; a < d; ++a) {
        const std::size_t ia = c % n;
        c /= n;
        t[static_cast<Eigen::Index>(a)] = coord(a, ia);
        w *= w1[ia];
      }
      const double m = mu(t);
      const double al = alpha.alpha(t);
      const Eigen::VectorXd ga = alpha.grad(t);
      s.v.noalias() += w * al * phi.grad(t);
      const Eigen::MatrixXd top = path.info(t) * (al * al) + ga * ga.transpose();
      if (m > 0.0) {
        s.middle.noalias() += (w / m) * top;
      } else if (top.cwiseAbs().maxCoeff() > 0.0) {
        s.infinite = true;
      }
      s.mass += w * m;
      if (psi) s.err2 += w * m * (psi->phi(t) - phi.phi(t)).squaredNorm();
    }
    return s;
  };

  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<GvtSums> parts(n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) parts[i] = slab(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned tid = 0; tid < threads; ++tid) {
      pool.emplace_back([&, tid] {
        for (std::size_t i = tid; i < n; i += threads) parts[i] = slab(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  GvtSums total{Eigen::MatrixXd::Zero(ki, di), Eigen::MatrixXd::Zero(di, di), 0.0, 0.0, false};
  for (const auto& p : parts) {
    total.v += p.v;
    total.middle += p.middle;
    total.err2 += p.err2;
    total.mass += p.mass;
    total.infinite = total.infinite || p.infinite;
  }
  total.v *= scale;
  total.middle *= scale;
  total.err2 *= scale;
  total.mass *= scale;
  return total;
}

inline GammaResult finish_gamma(GvtSums s, std::size_t d) {
  GammaResult r;
  r.v = s.v;
  r.prior_mass = s.mass;
  r.approx_error = std::sqrt(std::max(0.0, s.err2));
  const auto k = s.v.rows();
  if (s.infinite) {
    // An infinite information denominator makes the bound vanish.
    r.infinite_middle = true;
    r.middle = Eigen::MatrixXd::Constant(s.middle.rows(), s.middle.cols(), std::numeric_limits<double>::infinity());
    r.gamma = Eigen::MatrixXd::Zero(k, k);
    return r;
  }
  Eigen::MatrixXd m = 0.5 * (s.middle + s.middle.transpose());
  auto well_conditioned = [](const Eigen::MatrixXd& x) {
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(x, Eigen::EigenvaluesOnly).eigenvalues();
    return ev[0] > 0.0 && ev[ev.size() - 1] / ev[0] <= 1e14;
  };
  if (!well_conditioned(m)) {
    m += (1e-12 * m.trace() / static_cast<double>(d)) * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    r.jittered = true;
    require(well_conditioned(m), ErrorCode::SingularInformation,
            "information matrix is singular (condition number > 1e14 after jitter)");
  }
  r.middle = m;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  const Eigen::MatrixXd g = s.v * ldlt.solve(s.v.transpose());
  r.gamma = 0.5 * (g + g.transpose());
  return r;
}

}  // namespace detail

/// Γ = (∫∇φ α) (∫ (I α² + ∇α∇αᵀ)/μ)⁻¹ (∫∇φ α)ᵀ, a k x k PSD matrix.
inline GammaResult gamma_matrix(const MultiPath& path, const ScalarFnD& mu, const ApproxFn& phi,
                                const AugmentationD& alpha, const GvtOptions& opt = {}) {
  return detail::finish_gamma(detail::gvt_sums(path, mu, phi, alpha, nullptr, opt), path.dim());
}

struct GvtResult {
  double value = 0.0;
  double lambda_max = 0.0;
  double approx_error = 0.0;
  GammaResult gamma;
};

/// (sqrt(λ_max(Γ)) - (∫ ||ψ - φ||² μ)^{1/2})₊², Euclidean norm.
inline GvtResult gvt_minimax_bound(const MultiPath& path, const ApproxFn& psi, const ApproxFn& phi, const ScalarFnD& mu,
                                   const AugmentationD& alpha, const GvtOptions& opt = {}) {
  require(psi.k == phi.k, ErrorCode::DomainError, "psi and phi must have the same output dimension");
  GvtResult r;
  r.gamma = detail::finish_gamma(detail::gvt_sums(path, mu, phi, alpha, &psi, opt), path.dim());
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r.gamma.gamma, Eigen::EigenvaluesOnly).eigenvalues();
  r.lambda_max = std::max(0.0, ev[ev.size() - 1]);
  r.approx_error = r.gamma.approx_error;
  const double gap = std::max(0.0, std::sqrt(r.lambda_max) - r.approx_error);
  r.value = gap * gap;
  return r;
}

struct RecoveryCheck {
  double gvt_value;
  double bounds_value;
  double abs_diff;
  bool matches;  ///< abs_diff <= 1e-6
};

/// Scalar consistency check: the generalized bound with ψ = id, the supplied
/// φ, α and its optimal prior against the scalar minimax bound.
inline RecoveryCheck recover_scalar_check(double fisher, const Augmentation& alpha,
                                          const std::optional<ApproxFn>& phi = std::nullopt,
                                          const GvtOptions& opt = {}) {
  const FisherPath path = FisherPath::constant(alpha.domain(), fisher);
  const BoundResult scalar = augmented_minimax_bound(path, alpha);
  const PriorDensity& mu = *scalar.prior;
  const GvtResult g = gvt_minimax_bound(
      MultiPath::scalar(path), ApproxFn::identity(1), phi ? *phi : ApproxFn::identity(1),
      [mu](const Eigen::VectorXd& t) { return mu(t[0]); }, AugmentationD::scalar(alpha), opt);
  const double diff = std::abs(g.value - scalar.value);
  return RecoveryCheck{g.value, scalar.value, diff, diff <= 1e-6};
}

}  // namespace avt
