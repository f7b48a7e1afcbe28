#pragma once

// Test-side oracles. Nothing here calls into the library's derivative,
// geometry or eigen machinery: finite differences use only Expr::evaluate,
// and the spectral oracles integrate the radial/1D eigen-ODE directly.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bakry/expr.hpp"
#include "bakry/geometry.hpp"
#include "bakry/hypersurface.hpp"

namespace testing_support {

inline const double kPi = std::acos(-1.0);

// ---------------------------------------------------------------- builders

inline bakry::Axis axis(double lo, double hi, bool periodic = false, bakry::EndKind lo_end = bakry::EndKind::Boundary,
                        bakry::EndKind hi_end = bakry::EndKind::Boundary) {
  bakry::Axis a;
  a.lo = lo;
  a.hi = hi;
  a.periodic = periodic;
  a.lo_end = lo_end;
  a.hi_end = hi_end;
  return a;
}

inline bakry::WeightedManifold manifold(std::vector<bakry::Axis> axes, const std::vector<std::string>& metric,
                                        const std::string& weight) {
  const int dim = static_cast<int>(axes.size());
  bakry::ChartMetric g;
  g.dim = dim;
  for (std::size_t i = 0; i < metric.size(); ++i) g.components[i] = bakry::parse(metric[i], dim);
  return bakry::WeightedManifold::from_expressions(bakry::Domain{std::move(axes)}, g, bakry::parse(weight, dim));
}

inline bakry::WeightedManifold interval(double lo, double hi, const std::string& weight = "0") {
  return manifold({axis(lo, hi)}, {"1"}, weight);
}

/// Unit sphere chart (colatitude, longitude) between colatitudes lo and hi.
inline bakry::WeightedManifold sphere_chart(double lo, double hi, bakry::EndKind lo_end, bakry::EndKind hi_end,
                                            const std::string& weight = "0") {
  return manifold({axis(lo, hi, false, lo_end, hi_end), axis(0.0, 2.0 * kPi, true)}, {"1", "0", "sin(x1)^2"}, weight);
}

/// Unit disk in polar coordinates.
inline bakry::WeightedManifold polar_disk(const std::string& weight) {
  return manifold({axis(0.0, 1.0, false, bakry::EndKind::Singular, bakry::EndKind::Boundary), axis(0.0, 2.0 * kPi, true)},
                  {"1", "0", "x1^2"}, weight);
}

inline bakry::WeightedManifold flat_plane(const std::string& weight, double half = 1.0) {
  return manifold({axis(-half, half), axis(-half, half)}, {"1", "0", "1"}, weight);
}

inline bakry::Immersion immersion(bakry::Domain domain, const std::array<std::string, 3>& map,
                                  const std::string& ambient_weight,
                                  bakry::Orientation o = bakry::Orientation::Plus, int shape_sign = 1) {
  bakry::Immersion imm;
  imm.domain = std::move(domain);
  for (int a = 0; a < 3; ++a) imm.map[a] = bakry::parse(map[a], 2);
  imm.ambient_weight = bakry::parse(ambient_weight, 3);
  imm.orientation = o;
  imm.shape_sign = shape_sign;
  return imm;
}

inline bakry::Domain sphere_domain() {
  return bakry::Domain{{axis(0.0, kPi, false, bakry::EndKind::Singular, bakry::EndKind::Singular),
                        axis(0.0, 2.0 * kPi, true)}};
}

/// Round sphere; `r` is the radius as an expression.
inline bakry::Immersion sphere(const std::string& r, const std::string& ambient_weight) {
  return immersion(sphere_domain(),
                   {r + "*sin(x1)*cos(x2)", r + "*sin(x1)*sin(x2)", r + "*cos(x1)"}, ambient_weight);
}

inline bakry::Immersion shrinker_sphere() {
  return immersion(sphere_domain(),
                   {"sqrt(2)*sin(x1)*cos(x2)", "sqrt(2)*sin(x1)*sin(x2)", "sqrt(2)*cos(x1)"},
                   "(x1^2 + x2^2 + x3^2)/2");
}

inline bakry::Immersion plane_disk(const std::string& ambient_weight = "(x1^2 + x2^2 + x3^2)/2") {
  return immersion(bakry::Domain{{axis(0.0, 1.0, false, bakry::EndKind::Singular, bakry::EndKind::Boundary),
                                  axis(0.0, 2.0 * kPi, true)}},
                   {"x1*cos(x2)", "x1*sin(x2)", "0"}, ambient_weight);
}

inline bakry::Immersion cylinder(double height) {
  return immersion(bakry::Domain{{axis(0.0, height), axis(0.0, 2.0 * kPi, true)}}, {"cos(x2)", "sin(x2)", "x1"}, "0",
                   bakry::Orientation::Minus);
}

// ------------------------------------------------------- random expressions

/// Random smooth expression over x1..x{dim}, defined on all of R^dim and of
/// moderate size on [-1, 1]^dim.
class ExpressionGenerator {
 public:
  ExpressionGenerator(int dim, std::uint64_t seed) : dim_(dim), rng_(seed) {}

  std::string next(int depth = 3) { return node(depth); }

  std::string coefficient() {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    return number(d(rng_));
  }

  /// Random polynomial of total degree <= degree with coefficients in [-1, 1].
  std::string polynomial(int degree) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    std::string out = "0";
    std::vector<int> e(dim_, 0);
    std::function<void(int, int)> rec = [&](int axis, int left) {
      if (axis == dim_) {
        std::string term = number(c(rng_));
        for (int i = 0; i < dim_; ++i)
          if (e[i] > 0) term += "*x" + std::to_string(i + 1) + "^" + std::to_string(e[i]);
        out += " + " + term;
        return;
      }
      for (int k = 0; k <= left; ++k) {
        e[axis] = k;
        rec(axis + 1, left - k);
      }
      e[axis] = 0;
    };
    rec(0, degree);
    return out;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  static std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "(%.6f)", v);
    return buf;
  }

  std::string leaf() {
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_int_distribution<int> var(1, dim_);
    if (pick(rng_) == 0) return coefficient();
    return "x" + std::to_string(var(rng_));
  }

  std::string node(int depth) {
    if (depth == 0) return leaf();
    std::uniform_int_distribution<int> pick(0, 11);
    const std::string a = node(depth - 1);
    switch (pick(rng_)) {
      case 0: return "(" + a + " + " + node(depth - 1) + ")";
      case 1: return "(" + a + " - " + node(depth - 1) + ")";
      case 2: return "(" + a + ")*(" + node(depth - 1) + ")";
      case 3: return "sin(" + a + ")";
      case 4: return "cos(" + a + ")";
      case 5: return "exp(0.5*sin(" + a + "))";
      case 6: return "log(2 + (" + a + ")^2)";
      case 7: return "sqrt(1 + (" + a + ")^2)";
      case 8: return "(" + a + ")/(2 + cos(" + node(depth - 1) + "))";
      case 9: return "(1.5 + sin(" + a + "))^(1/3)";
      case 10: return "(" + a + ")^3";
      default: return leaf() + "*" + a;
    }
  }

  int dim_;
  std::mt19937_64 rng_;
};

inline std::vector<double> random_point(std::mt19937_64& rng, int dim, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> p(dim);
  for (auto& x : p) x = d(rng);
  return p;
}

// ------------------------------------------------------ finite differences

/// Mixed partial derivative d^counts f at p from nested central stencils on
/// the value channel only: eighth order for first and second derivatives,
/// sixth order for pure third derivatives. The default step is 0.01; pure
/// third derivatives extrapolate steps 0.01 and 0.005.
inline double central_difference(const bakry::Expr& f, std::vector<double> p, std::array<int, 3> counts,
                                 double h = 0.0) {
  if (h == 0.0 && std::max({counts[0], counts[1], counts[2]}) == 3) {
    // One Richardson step removes the leading h^6 term of the stencil.
    const double coarse = central_difference(f, p, counts, 0.01);
    const double fine = central_difference(f, p, counts, 0.005);
    return (64.0 * fine - coarse) / 63.0;
  }
  if (h == 0.0) h = 0.01;
  static const std::array<double, 4> d1{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  static const std::array<double, 4> d2{8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
  static const std::array<double, 4> d3{-61.0 / 30.0, 169.0 / 120.0, -3.0 / 10.0, 7.0 / 240.0};
  const int dim = static_cast<int>(p.size());
  std::function<double(int)> rec = [&](int axis) -> double {
    while (axis < dim && counts[axis] == 0) ++axis;
    if (axis == dim) return f.evaluate(std::span<const double>(p));
    const int n = counts[axis];
    const double x0 = p[axis];
    double sum = 0.0;
    if (n == 2) {
      sum += -205.0 / 72.0 * rec(axis + 1);
    }
    for (int k = 1; k <= 4; ++k) {
      const double w = n == 1 ? d1[k - 1] : n == 2 ? d2[k - 1] : d3[k - 1];
      p[axis] = x0 + k * h;
      const double plus = rec(axis + 1);
      p[axis] = x0 - k * h;
      const double minus = rec(axis + 1);
      sum += n == 2 ? w * (plus + minus) : w * (plus - minus);
    }
    p[axis] = x0;
    return sum / std::pow(h, n);
  };
  return rec(0);
}

// ---------------------------------------------------------- shooting oracles

/// RK4 for u'' + p(x) u' + (lambda - q(x)) u = 0 from (x0, u0, du0) to x1.
inline std::pair<double, double> shoot(const std::function<double(double)>& p, const std::function<double(double)>& q,
                                       double lambda, double x0, double x1, double u0, double du0, int steps) {
  const double h = (x1 - x0) / steps;
  auto rhs = [&](double x, double u, double v) { return -p(x) * v - (lambda - q(x)) * u; };
  double x = x0, u = u0, v = du0;
  for (int i = 0; i < steps; ++i) {
    const double k1u = v, k1v = rhs(x, u, v);
    const double k2u = v + 0.5 * h * k1v, k2v = rhs(x + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    const double k3u = v + 0.5 * h * k2v, k3v = rhs(x + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    const double k4u = v + h * k3v, k4v = rhs(x + h, u + h * k3u, v + h * k3v);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    x += h;
  }
  return {u, v};
}

/// First sign change of F on [lo, hi] found by scanning with `step`, then bisected.
inline double first_root(const std::function<double(double)>& F, double lo, double hi, double step) {
  double a = lo, fa = F(a);
  for (double b = lo + step; b <= hi + 1e-15; b += step) {
    const double fb = F(b);
    if ((fa < 0.0) != (fb < 0.0)) {
      for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
        const double mid = 0.5 * (a + b);
        const double fm = F(mid);
        if ((fa < 0.0) == (fm < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    a = b;
    fa = fb;
  }
  return NAN;
}

/// First Dirichlet eigenvalue of the drift Laplacian on the unit disk with
/// h = r^2/2: u'' + (1/r - r) u' + lambda u = 0, regular at 0, u(1) = 0.
inline double gaussian_disk_dirichlet_oracle() {
  const double r0 = 1e-6;
  auto F = [&](double lam) {
    const double u0 = 1.0 - lam * r0 * r0 / 4.0;
    const double du0 = -lam * r0 / 2.0;
    return shoot([](double r) { return 1.0 / r - r; }, [](double) { return 0.0; }, lam, r0, 1.0, u0, du0, 20000).first;
  };
  return first_root(F, 1.0, 10.0, 0.25);
}

/// First Dirichlet eigenvalue of u'' - x u' + lambda u = 0 on [-R, R].
inline double ou_interval_dirichlet_oracle(double R) {
  auto F = [&](double lam) {
    return shoot([](double x) { return -x; }, [](double) { return 0.0; }, lam, -R, R, 0.0, 1.0, 40000).first;
  };
  return first_root(F, 0.0, 0.01, 1e-4);
}

/// Smallest nonzero Neumann eigenvalue of the unit-sphere band between
/// colatitudes t0 and pi - t0, minimised over Fourier modes 0..max_mode.
inline double sphere_band_neumann_oracle(double t0, int max_mode) {
  double best = INFINITY;
  for (int k = 0; k <= max_mode; ++k) {
    auto F = [&](double lam) {
      return shoot([](double t) { return std::cos(t) / std::sin(t); },
                   [k](double t) { return k * k / (std::sin(t) * std::sin(t)); }, lam, t0, kPi - t0, 1.0, 0.0, 20000)
          .second;
    };
    const double root = first_root(F, 0.01, 20.0, 0.05);
    if (std::isfinite(root)) best = std::min(best, root);
  }
  return best;
}

}  // namespace testing_support
