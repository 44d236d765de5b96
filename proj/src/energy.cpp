#include "radapt/energy.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "radapt/error.hpp"

namespace radapt {

double action(const DirichletLagrangian& lagrangian, const PiecewiseAffine& u, const QuadratureRule& rule) {
  const Mesh& mesh = u.mesh();
  const Vector& v = u.values();
  double total = 0.0;
  for (int c = 0; c < mesh.cells(); ++c) {
    const double lo = mesh.node(c);
    const double hi = mesh.node(c + 1);
    const double s = u.slope(c);
    const auto [m0, m1] = hat_moments(lagrangian.forcing, lo, hi, rule);
    total += 0.5 * s * s * (hi - lo) + v[c] * m0 + v[c + 1] * m1;
  }
  return total;
}

namespace {

class ReferenceActionCache {
 public:
  template <typename Compute>
  double get(const std::string& key, Compute&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const double value = compute();
    std::unique_lock lock(mutex_);
    return values_.emplace(key, value).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<std::string, double> values_;
};

ReferenceActionCache& reference_cache() {
  static ReferenceActionCache cache;
  return cache;
}

QuadratureRule dense_rule(const QuadratureRule& rule) {
  QuadratureRule dense;
  dense.order = std::max(rule.order, 5);
  dense.singular_at = rule.singular_at;
  return dense;
}

}  // namespace

double reference_action(const ExactSolution& exact, const QuadratureRule& rule) {
  const QuadratureRule dense = dense_rule(rule);
  return reference_cache().get(exact.key() + "|" + dense.key(), [&] {
    const Mesh grid(exact.grid());
    const ScalarField& f = exact.source();
    return integrate(
        [&](double x) {
          const double du = exact.deriv1(x);
          return 0.5 * du * du + f(x) * exact(x);
        },
        grid, dense);
  });
}

EnergyReport renormalized_gap(const DirichletLagrangian& lagrangian, const PiecewiseAffine& u,
                              const ExactSolution& exact, int n, const QuadratureRule& rule) {
  constexpr double kBoundaryTol = 1e-12;
  const Vector& v = u.values();
  if (std::abs(v[0]) > kBoundaryTol || std::abs(v[v.size() - 1]) > kBoundaryTol) {
    throw Inadmissible("boundary values (" + format_number(v[0]) + ", " + format_number(v[v.size() - 1]) +
                       ") violate u(a) = u(b) = 0");
  }
  EnergyReport report;
  report.n = n;
  report.action = action(lagrangian, u, rule);
  report.exact_action = reference_action(exact, rule);
  report.gap = report.action - report.exact_action;
  report.renormalized = static_cast<double>(n) * n * report.gap;
  return report;
}

namespace {

void require_vanishing_ends(const ScalarField& g, double a, double b) {
  constexpr double kTol = 1e-12;
  if (std::abs(g(a)) > kTol || std::abs(g(b)) > kTol) {
    throw InvalidParameter("test direction " + g.label() + " does not vanish at the interval ends");
  }
}

}  // namespace

double second_variation(const DirichletLagrangian& lagrangian, const ExactSolution& exact, const ScalarField& g,
                        const QuadratureRule& rule, Diagnostics* diag) {
  require_vanishing_ends(g, exact.a(), exact.b());
  if (!g.has_deriv1() && diag) diag->warn("second variation: " + g.label() + " has no analytic derivative; using finite differences");
  const Mesh grid(exact.grid());
  return integrate(
      [&](double x) {
        const double gv = g(x);
        const double gd = g.deriv1(x);
        const auto h = lagrangian.hessian(x, exact(x), exact.deriv1(x));
        return h.zz * gv * gv + 2.0 * h.zp * gv * gd + h.pp * gd * gd;
      },
      grid, dense_rule(rule));
}

Extended limit_functional(const DirichletLagrangian& lagrangian, const ExactSolution& exact, const ScalarField& g,
                          const std::function<double(double)>& y_density, const QuadratureRule& rule,
                          Diagnostics* diag) {
  const double half_second = 0.5 * second_variation(lagrangian, exact, g, rule, diag);
  const Mesh grid(exact.grid());
  const double len = exact.b() - exact.a();
  bool infinite = false;
  double where = 0.0;
  const double penalty = integrate(
      [&](double x) {
        const double rho = y_density(x);
        if (rho < 0.0) throw InvalidParameter("negative mesh density at x = " + format_number(x));
        const double d2 = exact.deriv2(x);
        if (rho == 0.0) {
          if (d2 != 0.0 && !infinite) {
            infinite = true;
            where = x;
          }
          return 0.0;
        }
        // The (N = 1) contraction L_pp : u'' (x) u''.
        const double lpp = lagrangian.hessian(x, exact(x), exact.deriv1(x)).pp;
        return lpp * d2 * d2 / (rho * rho);
      },
      grid, dense_rule(rule));
  if (infinite) return Extended::infinite("u_*'' nonzero where the mesh density vanishes (x = " + format_number(where) + ")");
  return Extended::finite(half_second + len * len / 24.0 * penalty);
}

double min_limit_energy(const ScalarField& f, double a, double b, const QuadratureRule& rule) {
  const auto table = cumulative_table([&f](double x) { return std::pow(std::abs(f(x)), 2.0 / 3.0); }, a, b,
                                      default_table_samples(1), dense_rule(rule));
  const double mass = table.cumulative[table.cumulative.size() - 1];
  return mass * mass * mass / 24.0;
}

}  // namespace radapt
