#pragma once

#include <memory>

#include "radapt/field.hpp"
#include "radapt/mesh.hpp"
#include "radapt/quadrature.hpp"

namespace radapt {

/// Minimizer u_* of int 1/2 |u'|^2 + f u with u(a) = u(b) = 0, i.e. the
/// solution of u'' = f. Immutable; copies share the underlying table.
class ExactSolution {
 public:
  ExactSolution(ScalarField u, ScalarField source, double a, double b, Vector grid, std::string key);

  double operator()(double x) const { return u_(x); }
  double deriv1(double x) const { return u_.deriv1(x); }
  double deriv2(double x) const { return u_.deriv2(x); }

  const ScalarField& u() const { return u_; }
  const ScalarField& source() const { return source_; }
  double a() const { return a_; }
  double b() const { return b_; }
  /// Dense partition of [a,b] on which integrals of u_* are taken.
  const Vector& grid() const { return grid_; }
  /// Identifies the solution in the reference-action cache.
  const std::string& key() const { return key_; }

 private:
  ScalarField u_;
  ScalarField source_;
  double a_;
  double b_;
  Vector grid_;
  std::string key_;
};

/// Green's function representation
///   u(x) = int_a^x (x-s) f(s) ds - (x-a)/(b-a) int_a^b (b-s) f(s) ds
/// on a dense cumulative table. Between table points the two running
/// integrals are completed by a local Gauss rule. The table starts at
/// `table_points` and doubles until successive resolutions agree to 1e-12
/// in sup-norm on a 997-point probe grid.
ExactSolution solve_exact(const ScalarField& f, double a, double b, const QuadratureRule& rule = {},
                          int table_points = 16384);

/// Closed form on [0,1] for constant and monomial forcing:
/// u = (x^{k+2} - x) / ((k+1)(k+2)) for f = x^k, u = c x(x-1)/2 for f = c.
/// Throws NotAvailable for other catalog entries.
ExactSolution closed_form_exact(const CatalogSpec& spec);

}  // namespace radapt
