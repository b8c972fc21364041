#pragma once

// Quadrature, grid functions and derivative-free optimizers shared by the
// bound, Hölder and simulation modules. Everything here is a pure function
// of its arguments.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "avt/error.hpp"

namespace avt {

struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, ErrorCode::DomainError,
            "interval requires finite lo < hi");
  }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Values of a function at N uniformly spaced nodes (endpoints included),
/// N odd so composite Simpson is exact on the node set.
class GridFunction {
 public:
  GridFunction(Interval domain, std::vector<double> values) : domain_(domain), values_(std::move(values)) {
    require(values_.size() >= 3 && values_.size() % 2 == 1, ErrorCode::InvalidGrid,
            "grid needs an odd node count >= 3, got " + std::to_string(values_.size()));
    for (double v : values_) require(std::isfinite(v), ErrorCode::InvalidGrid, "grid values must be finite");
  }

  template <class F>
  static GridFunction sample(Interval domain, F&& f, std::size_t nodes) {
    require(nodes >= 3 && nodes % 2 == 1, ErrorCode::InvalidGrid, "grid needs an odd node count >= 3");
    std::vector<double> v(nodes);
    const double h = domain.width() / static_cast<double>(nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i) {
      const double t = (i + 1 == nodes) ? domain.hi : domain.lo + h * static_cast<double>(i);
      v[i] = f(t);
    }
    return GridFunction(domain, std::move(v));
  }

  const Interval& domain() const { return domain_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return domain_.width() / static_cast<double>(values_.size() - 1); }
  double node(std::size_t i) const {
    return (i + 1 == values_.size()) ? domain_.hi : domain_.lo + spacing() * static_cast<double>(i);
  }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Piecewise-linear interpolation; constant extension outside the domain.
  double operator()(double t) const {
    const auto [i, w] = locate(t);
    return (1.0 - w) * values_[i] + w * values_[i + 1];
  }

  /// Central differences at interior nodes, one-sided second order at the
  /// ends, linearly interpolated between nodes.
  double derivative(double t) const {
    const auto [i, w] = locate(t);
    return (1.0 - w) * node_derivative(i) + w * node_derivative(i + 1);
  }

  double node_derivative(std::size_t i) const {
    const std::size_t n = values_.size();
    const double h = spacing();
    if (i == 0) return (-3.0 * values_[0] + 4.0 * values_[1] - values_[2]) / (2.0 * h);
    if (i + 1 == n) return (3.0 * values_[n - 1] - 4.0 * values_[n - 2] + values_[n - 3]) / (2.0 * h);
    return (values_[i + 1] - values_[i - 1]) / (2.0 * h);
  }

  double simpson() const {
    const std::size_t n = values_.size();
    double s = values_.front() + values_.back();
    for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * values_[i];
    return s * spacing() / 3.0;
  }

 private:
  std::pair<std::size_t, double> locate(double t) const {
    const std::size_t n = values_.size();
    if (t <= domain_.lo) return {0, 0.0};
    if (t >= domain_.hi) return {n - 2, 1.0};
    const double x = (t - domain_.lo) / spacing();
    std::size_t i = static_cast<std::size_t>(x);
    if (i >= n - 1) i = n - 2;
    return {i, x - static_cast<double>(i)};
  }

  Interval domain_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Adaptive quadrature
// ---------------------------------------------------------------------------

struct QuadOptions {
  /// Relative tolerance, measured against the integral of |f|.
  double tol = 1e-10;
  std::size_t max_intervals = std::size_t{1} << 20;
  /// Caller-flagged power-law endpoint behaviour f ~ |t - a|^p (p > -1).
  /// The integrator substitutes t = a + (b - a) u^{1/(1+p)}, which makes the
  /// integrand bounded. Not auto-detected.
  std::optional<double> singular_at_a;
  std::optional<double> singular_at_b;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
};

namespace detail {

struct SimpsonCell {
  double a, b;
  double fa, fm, fb;
  double flm, frm;
  double value;
  double error;
  double abs_value;
  bool operator<(const SimpsonCell& o) const { return error < o.error; }
};

/// Evaluates f at an endpoint of the integration range. Integrands are only
/// required to be evaluable on the open interval, so a non-finite endpoint
/// value is replaced by a value slightly inside.
template <class F>
double endpoint_value(F& f, double x, double inward, std::size_t& evals) {
  double v = f(x);
  ++evals;
  if (std::isfinite(v)) return v;
  for (double s : {0x1p-40, 0x1p-30, 0x1p-20}) {
    v = f(x + s * inward);
    ++evals;
    if (std::isfinite(v)) return v;
  }
  fail(ErrorCode::NonConvergence, "integrand not finite near endpoint " + std::to_string(x));
}

template <class F>
double interior_value(F& f, double x, std::size_t& evals) {
  const double v = f(x);
  ++evals;
  if (!std::isfinite(v)) fail(ErrorCode::NonConvergence, "integrand not finite at " + std::to_string(x));
  return v;
}

template <class F>
SimpsonCell make_cell(F& f, double a, double b, double fa, double fm, double fb, std::size_t& evals) {
  SimpsonCell c{a, b, fa, fm, fb, 0, 0, 0, 0, 0};
  const double m = 0.5 * (a + b);
  c.flm = interior_value(f, 0.5 * (a + m), evals);
  c.frm = interior_value(f, 0.5 * (m + b), evals);
  const double w = b - a;
  const double coarse = w / 6.0 * (fa + 4.0 * fm + fb);
  const double fine = w / 12.0 * (fa + 4.0 * c.flm + 2.0 * fm + 4.0 * c.frm + fb);
  c.value = fine + (fine - coarse) / 15.0;
  c.error = std::abs(fine - coarse) / 15.0;
  c.abs_value = w / 12.0 *
                (std::abs(fa) + 4.0 * std::abs(c.flm) + 2.0 * std::abs(fm) + 4.0 * std::abs(c.frm) + std::abs(fb));
  return c;
}

/// Globally adaptive Simpson with Richardson extrapolation: always bisects the
/// cell with the largest error estimate until the summed estimate meets the
/// tolerance.
template <class F>
QuadResult adaptive_simpson(F& f, double a, double b, const QuadOptions& opt) {
  QuadResult out;
  constexpr int kInitialCells = 8;
  std::array<double, 2 * kInitialCells + 1> fx{};
  const double w = (b - a) / (2 * kInitialCells);
  fx[0] = endpoint_value(f, a, b - a, out.evaluations);
  fx[2 * kInitialCells] = endpoint_value(f, b, a - b, out.evaluations);
  for (int i = 1; i < 2 * kInitialCells; ++i) fx[i] = interior_value(f, a + w * i, out.evaluations);

  std::priority_queue<SimpsonCell> heap;
  double done_value = 0.0, done_error = 0.0, done_abs = 0.0;
  for (int i = 0; i < kInitialCells; ++i) {
    const double lo = a + w * (2 * i);
    const double hi = (i + 1 == kInitialCells) ? b : a + w * (2 * i + 2);
    heap.push(make_cell(f, lo, hi, fx[2 * i], fx[2 * i + 1], fx[2 * i + 2], out.evaluations));
  }

  const double eps = std::numeric_limits<double>::epsilon();
  std::size_t cells = kInitialCells;
  std::size_t since_resum = 0;
  double total_value = 0.0, total_error = 0.0, total_abs = 0.0;
  auto resum = [&] {
    total_value = done_value;
    total_error = done_error;
    total_abs = done_abs;
    auto copy = heap;
    while (!copy.empty()) {
      total_value += copy.top().value;
      total_error += copy.top().error;
      total_abs += copy.top().abs_value;
      copy.pop();
    }
  };
  resum();

  while (!heap.empty()) {
    const double target = std::max(opt.tol, 64.0 * eps) * total_abs;
    if (total_error <= target) break;
    if (cells >= opt.max_intervals) {
      fail(ErrorCode::NonConvergence, "refinement budget exhausted (error " + std::to_string(total_error) +
                                          ", target " + std::to_string(target) + ")");
    }
    SimpsonCell c = heap.top();
    heap.pop();
    const double m = 0.5 * (c.a + c.b);
    // Cells that can no longer be bisected in floating point are retired.
    if (!(c.a < 0.5 * (c.a + m)) || !(0.5 * (m + c.b) < c.b) || (c.b - c.a) <= 4.0 * eps * std::abs(m)) {
      done_value += c.value;
      done_error += c.error;
      done_abs += c.abs_value;
      if (heap.empty()) break;
      continue;
    }
    SimpsonCell left = make_cell(f, c.a, m, c.fa, c.flm, c.fm, out.evaluations);
    SimpsonCell right = make_cell(f, m, c.b, c.fm, c.frm, c.fb, out.evaluations);
    total_value += left.value + right.value - c.value;
    total_error += left.error + right.error - c.error;
    total_abs += left.abs_value + right.abs_value - c.abs_value;
    heap.push(left);
    heap.push(right);
    ++cells;
    if (++since_resum == 256) {
      resum();
      since_resum = 0;
    }
  }
  resum();
  out.value = total_value;
  out.error = total_error;
  out.intervals = cells;
  return out;
}

}  // namespace detail

/// Adaptive integral of f over [a, b]; reversed limits negate the result.
/// Singular exponents in `opt` refer to the endpoints a and b as passed.
template <class F>
QuadResult integrate_detailed(F&& f, double a, double b, const QuadOptions& opt = {}) {
  require(std::isfinite(a) && std::isfinite(b), ErrorCode::DomainError, "integration limits must be finite");
  if (a == b) return {};
  if (a > b) {
    QuadOptions swapped = opt;
    std::swap(swapped.singular_at_a, swapped.singular_at_b);
    QuadResult r = integrate_detailed(f, b, a, swapped);
    r.value = -r.value;
    return r;
  }
  for (const auto& p : {opt.singular_at_a, opt.singular_at_b}) {
    if (p) require(*p > -1.0, ErrorCode::DomainError, "singular exponent must exceed -1");
  }
  const bool sa = opt.singular_at_a.has_value() && *opt.singular_at_a != 0.0;
  const bool sb = opt.singular_at_b.has_value() && *opt.singular_at_b != 0.0;

  if (sa && sb) {
    const double c = 0.5 * (a + b);
    QuadOptions left = opt, right = opt;
    left.singular_at_b.reset();
    right.singular_at_a.reset();
    QuadResult l = integrate_detailed(f, a, c, left);
    QuadResult r = integrate_detailed(f, c, b, right);
    return {l.value + r.value, l.error + r.error, l.intervals + r.intervals, l.evaluations + r.evaluations};
  }
  if (sa || sb) {
    const double k = 1.0 / (1.0 + (sa ? *opt.singular_at_a : *opt.singular_at_b));
    const double w = b - a;
    auto g = [&](double u) {
      const double uk = std::pow(u, k);
      const double jac = w * k * std::pow(u, k - 1.0);
      const double t = sa ? a + w * uk : b - w * uk;
      return f(t) * jac;
    };
    QuadOptions plain = opt;
    plain.singular_at_a.reset();
    plain.singular_at_b.reset();
    return detail::adaptive_simpson(g, 0.0, 1.0, plain);
  }
  return detail::adaptive_simpson(f, a, b, opt);
}

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10) {
  QuadOptions opt;
  opt.tol = tol;
  return integrate_detailed(f, a, b, opt).value;
}

template <class F>
double integrate(F&& f, double a, double b, const QuadOptions& opt) {
  return integrate_detailed(f, a, b, opt).value;
}

/// Integral over `domain` split at the interior `breaks`. A negative
/// `end_exponent` flags a power-law singularity at both outer endpoints.
template <class F>
double integrate_pieces(F&& f, const Interval& domain, std::vector<double> breaks, double end_exponent = 0.0,
                        double tol = 1e-10) {
  std::erase_if(breaks, [&](double x) { return !(x > domain.lo && x < domain.hi); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> pts;
  pts.reserve(breaks.size() + 2);
  pts.push_back(domain.lo);
  pts.insert(pts.end(), breaks.begin(), breaks.end());
  pts.push_back(domain.hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    QuadOptions opt;
    opt.tol = tol;
    if (end_exponent < 0.0) {
      if (i == 0) opt.singular_at_a = end_exponent;
      if (i + 2 == pts.size()) opt.singular_at_b = end_exponent;
    }
    total += integrate(f, pts[i], pts[i + 1], opt);
  }
  return total;
}

/// Same as `integrate_pieces` for integrands f(t, e) that also take e, the
/// distance from t to the nearer endpoint of `domain`. Inside flagged
/// endpoint pieces e is produced directly by the substitution, so integrands
/// that blow up like e^p can be evaluated arbitrarily close to the boundary
/// without the cancellation in e.g. 1 - |t|.
template <class F>
double integrate_pieces_edge(F&& f, const Interval& domain, std::vector<double> breaks, double end_exponent = 0.0,
                             double tol = 1e-10) {
  require(end_exponent > -1.0, ErrorCode::DomainError, "singular exponent must exceed -1");
  const bool singular = end_exponent < 0.0;
  if (singular) breaks.push_back(domain.mid());
  std::erase_if(breaks, [&](double x) { return !(x > domain.lo && x < domain.hi); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> pts;
  pts.reserve(breaks.size() + 2);
  pts.push_back(domain.lo);
  pts.insert(pts.end(), breaks.begin(), breaks.end());
  pts.push_back(domain.hi);
  auto plain = [&](double t) { return f(t, std::min(t - domain.lo, domain.hi - t)); };
  const double k = 1.0 / (1.0 + end_exponent);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const bool first = i == 0, last = i + 2 == pts.size();
    const double w = pts[i + 1] - pts[i];
    if (singular && (first || last)) {
      // Below u_floor the distance would underflow; the transformed integrand
      // is flat there (the power law has been absorbed), so it is held
      // constant.
      const double u_floor = std::pow(1e-150 / w, 1.0 / k);
      auto g = [&](double u) {
        u = std::max(u, u_floor);
        const double e = w * std::pow(u, k);
        const double jac = w * k * std::pow(u, k - 1.0);
        return f(first ? domain.lo + e : domain.hi - e, e) * jac;
      };
      total += integrate(g, 0.0, 1.0, tol);
    } else {
      total += integrate(plain, pts[i], pts[i + 1], tol);
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Derivative-free optimization
// ---------------------------------------------------------------------------

struct Min1d {
  double argmin;
  double min;
};

/// Global-ish minimum over [lo, hi]: uniform scan, then golden-section
/// refinement around the best scan node. Unimodality is not assumed.
template <class G>
Min1d minimize_1d(G&& g, double lo, double hi, double tol = 1e-10, std::size_t scan_points = 200) {
  require(lo < hi, ErrorCode::InvalidBracket, "minimize_1d requires lo < hi");
  scan_points = std::max<std::size_t>(scan_points, 3);
  auto eval = [&](double x) {
    const double v = g(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  const double step = (hi - lo) / static_cast<double>(scan_points - 1);
  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scan_points; ++i) {
    const double x = (i + 1 == scan_points) ? hi : lo + step * static_cast<double>(i);
    const double v = eval(x);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  Min1d out{best + 1 == scan_points ? hi : lo + step * static_cast<double>(best), best_val};

  double a = (best == 0) ? lo : lo + step * static_cast<double>(best - 1);
  double b = (best + 1 >= scan_points) ? hi : std::min(hi, lo + step * static_cast<double>(best + 1));
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = eval(c), fd = eval(d);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = eval(d);
    }
  }
  for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}}) {
    if (v < out.min) out = {x, v};
  }
  return out;
}

struct Max2d {
  std::array<double, 2> argmax;
  double max;
  std::size_t evaluations = 0;
};

struct Max2dOptions {
  std::size_t grid = 16;
  /// Upper limit on simplex refinements started from grid local maxima.
  std::size_t max_starts = 8;
  std::size_t max_iterations = 2000;
};

/// Maximizes g over a box: coarse grid (grid x grid nodes, corners
/// included), then a bounded Nelder–Mead simplex from each of the best
/// discrete local maxima. Deterministic.
template <class G>
Max2d maximize_2d(G&& g, const Interval& bx, const Interval& by, double tol = 1e-9, const Max2dOptions& opt = {}) {
  const std::size_t n = std::max<std::size_t>(opt.grid, 2);
  std::size_t evals = 0;
  auto eval = [&](double x, double y) {
    const double v = g(x, y);
    ++evals;
    require(!std::isnan(v), ErrorCode::NonFinite,
            "objective is NaN at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
    return v;
  };
  auto coord = [n](const Interval& iv, std::size_t i) {
    return (i + 1 == n) ? iv.hi : iv.lo + iv.width() * static_cast<double>(i) / static_cast<double>(n - 1);
  };

  std::vector<double> vals(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) vals[i * n + j] = eval(coord(bx, i), coord(by, j));

  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      bool peak = true;
      for (int di = -1; di <= 1 && peak; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ii = static_cast<std::ptrdiff_t>(i) + di;
          const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(n) || jj >= static_cast<std::ptrdiff_t>(n)) continue;
          if (vals[static_cast<std::size_t>(ii) * n + static_cast<std::size_t>(jj)] > vals[i * n + j]) {
            peak = false;
            break;
          }
        }
      }
      if (peak) peaks.push_back(i * n + j);
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t p, std::size_t q) { return vals[p] > vals[q]; });
  if (peaks.size() > opt.max_starts) peaks.resize(std::max<std::size_t>(opt.max_starts, 1));

  const std::size_t best_node = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
  Max2d out{{coord(bx, best_node / n), coord(by, best_node % n)}, vals[best_node]};

  auto clamp_pt = [&](std::array<double, 2> p) {
    return std::array<double, 2>{std::clamp(p[0], bx.lo, bx.hi), std::clamp(p[1], by.lo, by.hi)};
  };
  const double hx = bx.width() / static_cast<double>(n - 1);
  const double hy = by.width() / static_cast<double>(n - 1);

  for (std::size_t node : peaks) {
    const std::array<double, 2> start{coord(bx, node / n), coord(by, node % n)};
    std::array<std::array<double, 2>, 3> s{start, clamp_pt({start[0] + 0.5 * hx, start[1]}),
                                           clamp_pt({start[0], start[1] + 0.5 * hy})};
    if (s[1] == s[0]) s[1] = clamp_pt({start[0] - 0.5 * hx, start[1]});
    if (s[2] == s[0]) s[2] = clamp_pt({start[0], start[1] - 0.5 * hy});
    // Minimize -g.
    std::array<double, 3> fv{-vals[node], -eval(s[1][0], s[1][1]), -eval(s[2][0], s[2][1])};
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
      std::array<int, 3> idx{0, 1, 2};
      std::sort(idx.begin(), idx.end(), [&](int p, int q) { return fv[p] < fv[q]; });
      const auto& b = s[idx[0]];
      const double diam = std::max({std::hypot(s[idx[1]][0] - b[0], s[idx[1]][1] - b[1]),
                                    std::hypot(s[idx[2]][0] - b[0], s[idx[2]][1] - b[1])});
      if (diam < tol) break;
      const std::array<double, 2> centroid{0.5 * (s[idx[0]][0] + s[idx[1]][0]), 0.5 * (s[idx[0]][1] + s[idx[1]][1])};
      const auto& worst = s[idx[2]];
      auto along = [&](double coef) {
        return clamp_pt({centroid[0] + coef * (worst[0] - centroid[0]), centroid[1] + coef * (worst[1] - centroid[1])});
      };
      const auto xr = along(-1.0);
      const double fr = -eval(xr[0], xr[1]);
      if (fr < fv[idx[0]]) {
        const auto xe = along(-2.0);
        const double fe = -eval(xe[0], xe[1]);
        if (fe < fr) {
          s[idx[2]] = xe;
          fv[idx[2]] = fe;
        } else {
          s[idx[2]] = xr;
          fv[idx[2]] = fr;
        }
        continue;
      }
      if (fr < fv[idx[1]]) {
        s[idx[2]] = xr;
        fv[idx[2]] = fr;
        continue;
      }
      const bool outside = fr < fv[idx[2]];
      const auto xc = along(outside ? -0.5 : 0.5);
      const double fc = -eval(xc[0], xc[1]);
      if (fc < (outside ? fr : fv[idx[2]])) {
        s[idx[2]] = xc;
        fv[idx[2]] = fc;
        continue;
      }
      for (int k : {idx[1], idx[2]}) {
        s[k] = clamp_pt({b[0] + 0.5 * (s[k][0] - b[0]), b[1] + 0.5 * (s[k][1] - b[1])});
        fv[k] = -eval(s[k][0], s[k][1]);
      }
    }
    for (int k = 0; k < 3; ++k) {
      if (-fv[k] > out.max) out = {s[k], -fv[k]};
    }
  }
  out.evaluations = evals;
  return out;
}

}  // namespace avt
