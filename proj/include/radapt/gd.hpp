#pragma once

#include <string>
#include <vector>

#include "radapt/exact.hpp"
#include "radapt/field.hpp"
#include "radapt/mesh.hpp"
#include "radapt/outcome.hpp"
#include "radapt/quadrature.hpp"

namespace radapt {

/// Interior node positions and interior nodal values of an n-cell
/// piecewise-affine function with zero boundary values. The gradient is laid
/// out as [d/dxi (n-1 entries), d/du (n-1 entries)].
struct OptimizationState {
  Vector xi;
  Vector uvals;
  double energy = 0.0;
  Vector grad;
  int iter = 0;

  int cells() const { return static_cast<int>(xi.size()) + 1; }
};

enum class GdMethod {
  /// x <- x - eta grad E_n with a fixed eta.
  Fixed,
  /// x <- x - eta P^{-1} grad E_n, where P is the finite-difference Hessian
  /// of E_n shifted until positive definite. eta starts at 1 every iteration.
  Preconditioned,
};

struct GdConfig {
  GdMethod method = GdMethod::Preconditioned;
  /// Initial step; nonpositive selects default_eta for the method and n.
  double eta = 0.0;
  double tol = 1e-6;
  int max_iter = 100000;
  bool backtracking = true;

  /// 0.1/n^3 for Fixed (the curvature of E_n grows like n^3: n^2 from the
  /// renormalization, n from the 1/h stiffness), 1 for Preconditioned.
  static double default_eta(GdMethod method, int n);
};

std::string to_string(GdMethod method);
GdMethod parse_gd_method(const std::string& text);

enum class GdStatus { Converged, MaxIterations, Stalled, Infeasible };

std::string to_string(GdStatus status);

struct GdTraceRow {
  int iter = 0;
  double energy = 0.0;
  double gradnorm = 0.0;
  /// Rounding bound of `energy`; with backtracking the next row's energy is
  /// at most energy + noise.
  double noise = 0.0;
};

struct GdResult {
  OptimizationState state;
  std::vector<GdTraceRow> trace;
  GdStatus status = GdStatus::MaxIterations;

  bool converged() const { return status == GdStatus::Converged; }
};

/// True when the nodes are strictly increasing inside (a,b) with every cell
/// at least the minimum cell length.
bool feasible_nodes(const Vector& xi, double a, double b);

/// E_n(xi, u) = n^2 (F(u) - F(u_*)) for the implied piecewise-affine
/// function; +infinity when the nodes do not form a valid mesh.
Extended discrete_energy(const ScalarField& f, const OptimizationState& state, const ExactSolution& exact,
                         const QuadratureRule& rule);

/// Analytic gradient of E_n. The node block is the configurational force
///   n^2 [ (s_i^2 - s_{i-1}^2)/2 - s_{i-1} int_{cell i-1} f phi_i - s_i int_{cell i} f phi_i ]
/// obtained from Leibniz' rule (the endpoint terms cancel by continuity), so
/// no derivative of f is needed. The value block is n^2 times the Galerkin
/// residual. Throws InvalidParameter on an infeasible state.
Vector energy_gradient(const ScalarField& f, const OptimizationState& state, const ExactSolution& exact,
                       const QuadratureRule& rule);

/// State on the given mesh with Galerkin nodal values, energy and gradient
/// filled in.
OptimizationState galerkin_state(const ScalarField& f, const Mesh& mesh, const ExactSolution& exact,
                                 const QuadratureRule& rule);

Mesh state_mesh(const OptimizationState& state, double a, double b);
PiecewiseAffine state_function(const OptimizationState& state, double a, double b);

/// Finite-difference Hessian of E_n from the analytic gradient (12 gradient
/// evaluations, using the nearest-neighbour coupling of the variables).
Eigen::MatrixXd energy_hessian(const ScalarField& f, const OptimizationState& state, const ExactSolution& exact,
                               const QuadratureRule& rule);

/// Descent on E_n until ||grad E_n||_1 < tol or max_iter steps. With
/// backtracking, steps that leave the feasible set or raise the energy beyond
/// its evaluation noise are retried with eta halved (eta is restored on the
/// next iteration); eta below 1e-18 ends the run as Stalled. Throws
/// InvalidParameter for an infeasible initial state.
GdResult gd_run(const ScalarField& f, const OptimizationState& init, const GdConfig& cfg, const ExactSolution& exact,
                const QuadratureRule& rule);

}  // namespace radapt
