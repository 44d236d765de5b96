#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "radapt/error.hpp"
#include "radapt/mesh.hpp"

namespace radapt {

/// Gauss-Legendre points and weights on the unit interval [0,1].
template <typename Scalar>
struct GaussLegendre {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> points;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;

  int order() const { return static_cast<int>(points.size()); }
};

/// Golub-Welsch eigenvalue construction, polished by Newton on the Legendre
/// recurrence. Exact for polynomials of degree <= 2*order-1.
template <typename Scalar>
GaussLegendre<Scalar> compute_gauss_legendre(int order);

/// Cached double-precision rule; thread-safe.
const GaussLegendre<double>& gauss_legendre(int order);

/// Composite rule: `order` Gauss points on each of `subdivisions` equal pieces
/// of every cell. When max_subcell > 0, cells longer than it are split further
/// so that no piece exceeds it.
/// When singular_at is set and a piece ends there, that piece is split
/// dyadically toward it (exact for polynomials still; fixes the slow
/// convergence of Gauss rules on x^alpha-type endpoint behaviour).
struct QuadratureRule {
  int order = 5;
  int subdivisions = 1;
  double max_subcell = 0.0;
  double singular_at = std::numeric_limits<double>::quiet_NaN();
  static constexpr int kGradeLevels = 32;

  int pieces(double h) const {
    int p = subdivisions;
    if (max_subcell > 0.0) p = std::max(p, static_cast<int>(std::ceil(h / max_subcell - 1e-12)));
    return std::max(p, 1);
  }
  std::string key() const;
};

/// Rule used for action, load and energy integrals of a given forcing term.
/// Polynomials get order 5 (exact for the products that occur); Gaussians get
/// order 7 with pieces no longer than sigma/2; anything else gets order 5 with
/// pieces no longer than (b-a)/256.
QuadratureRule rule_for(const ScalarField& f, double a, double b);

namespace detail {
[[noreturn]] void throw_non_finite(double x);
}

/// Calls visit(x, w) for every quadrature point of [lo,hi]; the weights sum
/// to hi - lo.
template <typename Visit>
void for_each_point(double lo, double hi, const QuadratureRule& rule, Visit&& visit) {
  const auto& gl = gauss_legendre(rule.order);
  auto plain = [&](double l, double r) {
    const double h = r - l;
    for (int q = 0; q < gl.order(); ++q) visit(l + h * gl.points[q], h * gl.weights[q]);
  };
  const int pieces = rule.pieces(hi - lo);
  const double h = (hi - lo) / pieces;
  const bool graded = !std::isnan(rule.singular_at);
  const double touch = 1e-12 * (hi - lo);
  for (int p = 0; p < pieces; ++p) {
    const double l = lo + p * h;
    const double r = p + 1 == pieces ? hi : lo + (p + 1) * h;
    if (graded && std::fabs(l - rule.singular_at) <= touch) {
      double inner = r;
      for (int k = 0; k < QuadratureRule::kGradeLevels; ++k) {
        const double mid = l + 0.5 * (inner - l);
        plain(mid, inner);
        inner = mid;
      }
      plain(l, inner);
    } else if (graded && std::fabs(r - rule.singular_at) <= touch) {
      double inner = l;
      for (int k = 0; k < QuadratureRule::kGradeLevels; ++k) {
        const double mid = inner + 0.5 * (r - inner);
        plain(inner, mid);
        inner = mid;
      }
      plain(inner, r);
    } else {
      plain(l, r);
    }
  }
}

template <typename F>
double integrate_interval(const F& f, double lo, double hi, const QuadratureRule& rule) {
  double total = 0.0;
  for_each_point(lo, hi, rule, [&](double x, double w) {
    const double v = f(x);
    if (!std::isfinite(v)) detail::throw_non_finite(x);
    total += w * v;
  });
  return total;
}

/// Sum of per-cell Gauss approximations over the given partition, in cell
/// order.
template <typename F>
double integrate(const F& f, const Mesh& partition, const QuadratureRule& rule) {
  double total = 0.0;
  for (int c = 0; c < partition.cells(); ++c) {
    total += integrate_interval(f, partition.node(c), partition.node(c + 1), rule);
  }
  return total;
}

/// Integrals of f against the two linear shape functions of [lo,hi]:
/// first = int f (hi-x)/(hi-lo), second = int f (x-lo)/(hi-lo).
template <typename F>
std::pair<double, double> hat_moments(const F& f, double lo, double hi, const QuadratureRule& rule) {
  const double len = hi - lo;
  double left_moment = 0.0;
  double right_moment = 0.0;
  for_each_point(lo, hi, rule, [&](double x, double w) {
    const double v = f(x);
    if (!std::isfinite(v)) detail::throw_non_finite(x);
    const double t = (x - lo) / len;
    left_moment += w * v * (1.0 - t);
    right_moment += w * v * t;
  });
  return {left_moment, right_moment};
}

/// Running integral of a nonnegative integrand on a uniform grid.
struct CumulativeTable {
  Vector x;
  Vector cumulative;  // cumulative[i] = int_a^{x[i]} f
};

/// samples >= 2 grid points, uniform on [a,b]. Throws InvalidParameter when a
/// quadrature sample of f is negative.
CumulativeTable cumulative_table(const std::function<double(double)>& f, double a, double b, int samples,
                                 const QuadratureRule& rule = {});

/// Table resolution for a target element count n: max(4096, 64 n).
inline int default_table_samples(int n) { return std::max(4096, 64 * n); }

}  // namespace radapt
