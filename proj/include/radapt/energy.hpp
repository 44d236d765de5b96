#pragma once

#include <functional>

#include "radapt/exact.hpp"
#include "radapt/field.hpp"
#include "radapt/mesh.hpp"
#include "radapt/outcome.hpp"
#include "radapt/quadrature.hpp"

namespace radapt {

/// F(u), F(u_*) and the renormalized gap n^2 (F(u) - F(u_*)).
struct EnergyReport {
  int n = 0;
  double action = 0.0;
  double exact_action = 0.0;
  double gap = 0.0;
  double renormalized = 0.0;
};

/// F(u) = int 1/2 |u'|^2 + f u. The gradient part is summed in closed form
/// from the cell slopes; the load part uses hat_moments on every cell, the
/// same moments the Galerkin load vector is assembled from.
double action(const DirichletLagrangian& lagrangian, const PiecewiseAffine& u, const QuadratureRule& rule);

/// F(u_*) integrated on the exact solution's dense grid. Cached per
/// (solution, rule); safe to call concurrently.
double reference_action(const ExactSolution& exact, const QuadratureRule& rule);

/// Throws Inadmissible when |u(a)| or |u(b)| exceeds 1e-12.
EnergyReport renormalized_gap(const DirichletLagrangian& lagrangian, const PiecewiseAffine& u,
                              const ExactSolution& exact, int n, const QuadratureRule& rule);

/// int (g, g') . Hess_{(z,p)} L . (g, g')^T at u_*; for the Dirichlet
/// Lagrangian this is int |g'|^2. g must vanish at both ends.
double second_variation(const DirichletLagrangian& lagrangian, const ExactSolution& exact, const ScalarField& g,
                        const QuadratureRule& rule, Diagnostics* diag = nullptr);

/// 1/2 second_variation(g) + (b-a)^2/24 int L_pp |u_*''|^2 / y'(x)^2 dx,
/// where y_density is y' for a map y of [a,b] onto itself. Points with
/// u_*'' = 0 = y' contribute nothing; u_*'' != 0 = y' gives +infinity.
Extended limit_functional(const DirichletLagrangian& lagrangian, const ExactSolution& exact, const ScalarField& g,
                          const std::function<double(double)>& y_density, const QuadratureRule& rule,
                          Diagnostics* diag = nullptr);

/// Minimum of the limit functional over maps y with g = 0:
/// (1/24) (int_a^b |f|^{2/3})^3.
double min_limit_energy(const ScalarField& f, double a, double b, const QuadratureRule& rule = {});

}  // namespace radapt
