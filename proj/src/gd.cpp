#include "radapt/gd.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "radapt/energy.hpp"
#include "radapt/error.hpp"
#include "radapt/fem.hpp"

namespace radapt {

std::string to_string(GdStatus status) {
  switch (status) {
    case GdStatus::Converged:
      return "converged";
    case GdStatus::MaxIterations:
      return "max-iterations";
    case GdStatus::Stalled:
      return "stalled";
    case GdStatus::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

double GdConfig::default_eta(GdMethod method, int n) {
  if (method == GdMethod::Preconditioned) return 1.0;
  return 0.1 / (static_cast<double>(n) * n * n);
}

std::string to_string(GdMethod method) { return method == GdMethod::Fixed ? "fixed" : "preconditioned"; }

GdMethod parse_gd_method(const std::string& text) {
  if (text == "fixed") return GdMethod::Fixed;
  if (text == "preconditioned") return GdMethod::Preconditioned;
  throw InvalidParameter("unknown descent method '" + text + "' (expected fixed or preconditioned)");
}

bool feasible_nodes(const Vector& xi, double a, double b) {
  const double eps = Mesh::min_cell(a, b);
  double prev = a;
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    if (!std::isfinite(xi[i]) || !(xi[i] - prev >= eps)) return false;
    prev = xi[i];
  }
  return b - prev >= eps;
}

namespace {

/// One pass over the cells producing E_n, an estimate of its rounding noise
/// and optionally the gradient.
struct Evaluation {
  double energy = 0.0;
  double noise = 0.0;
  Vector grad;
};

Evaluation evaluate(const ScalarField& f, const Vector& xi, const Vector& u, double reference, double a, double b,
                    const QuadratureRule& rule, bool with_gradient) {
  const int n = static_cast<int>(xi.size()) + 1;
  const double n2 = static_cast<double>(n) * n;
  auto node = [&](int i) { return i == 0 ? a : (i == n ? b : xi[i - 1]); };
  auto value = [&](int i) { return (i == 0 || i == n) ? 0.0 : u[i - 1]; };

  Evaluation out;
  if (with_gradient) out.grad = Vector::Zero(2 * (n - 1));
  double total = 0.0;
  double magnitude = std::abs(reference);
  double prev_slope = 0.0;
  double prev_right_moment = 0.0;
  for (int c = 0; c < n; ++c) {
    const double lo = node(c);
    const double hi = node(c + 1);
    const double h = hi - lo;
    const double s = (value(c + 1) - value(c)) / h;
    const auto [m0, m1] = hat_moments(f, lo, hi, rule);
    const double grad_part = 0.5 * s * s * h;
    const double load_part = value(c) * m0 + value(c + 1) * m1;
    total += grad_part + load_part;
    magnitude += grad_part + std::abs(value(c) * m0) + std::abs(value(c + 1) * m1);
    if (with_gradient && c >= 1) {
      // Node c sits between cell c-1 (slope prev_slope) and cell c.
      const int i = c - 1;
      out.grad[i] = n2 * (0.5 * (s * s - prev_slope * prev_slope) - prev_slope * prev_right_moment - s * m0);
      out.grad[(n - 1) + i] = n2 * (prev_slope - s + prev_right_moment + m0);
    }
    prev_slope = s;
    prev_right_moment = m1;
  }
  out.energy = n2 * (total - reference);
  out.noise = 16.0 * std::numeric_limits<double>::epsilon() * n2 * magnitude;
  return out;
}

void require_shapes(const OptimizationState& state) {
  if (state.xi.size() != state.uvals.size()) {
    throw InvalidParameter("optimization state has mismatched node and value counts");
  }
}

}  // namespace

Extended discrete_energy(const ScalarField& f, const OptimizationState& state, const ExactSolution& exact,
                         const QuadratureRule& rule) {
  require_shapes(state);
  if (!feasible_nodes(state.xi, exact.a(), exact.b())) return Extended::infinite("nodes do not form a valid mesh");
  const double reference = reference_action(exact, rule);
  return Extended::finite(evaluate(f, state.xi, state.uvals, reference, exact.a(), exact.b(), rule, false).energy);
}

Vector energy_gradient(const ScalarField& f, const OptimizationState& state, const ExactSolution& exact,
                       const QuadratureRule& rule) {
  require_shapes(state);
  if (!feasible_nodes(state.xi, exact.a(), exact.b())) {
    throw InvalidParameter("energy gradient requested at an infeasible state");
  }
  return evaluate(f, state.xi, state.uvals, 0.0, exact.a(), exact.b(), rule, true).grad;
}

Mesh state_mesh(const OptimizationState& state, double a, double b) { return mesh_from_interior(state.xi, a, b); }

PiecewiseAffine state_function(const OptimizationState& state, double a, double b) {
  Vector values = Vector::Zero(state.xi.size() + 2);
  values.segment(1, state.uvals.size()) = state.uvals;
  return PiecewiseAffine(state_mesh(state, a, b), std::move(values));
}

OptimizationState galerkin_state(const ScalarField& f, const Mesh& mesh, const ExactSolution& exact,
                                 const QuadratureRule& rule) {
  const auto uh = galerkin_solve(f, mesh, rule);
  OptimizationState state;
  state.xi = mesh.interior();
  state.uvals = uh.values().segment(1, mesh.cells() - 1);
  const auto ev = evaluate(f, state.xi, state.uvals, reference_action(exact, rule), exact.a(), exact.b(), rule, true);
  state.energy = ev.energy;
  state.grad = ev.grad;
  return state;
}

namespace {

Eigen::MatrixXd fd_hessian(const ScalarField& f, const Vector& xi, const Vector& u, double a, double b,
                           const QuadratureRule& rule) {
  const int m = static_cast<int>(xi.size());
  const int n = m + 1;
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  const double uscale = std::max(u.lpNorm<Eigen::Infinity>(), 1e-3);
  auto cell = [&](int c) {
    const double lo = c == 0 ? a : xi[c - 1];
    const double hi = c == n - 1 ? b : xi[c];
    return hi - lo;
  };
  // Variables of nodes i and k couple only when |i - k| <= 1, so nodes with
  // equal i mod 3 can be perturbed together.
  for (int block = 0; block < 2; ++block) {
    for (int color = 0; color < 3; ++color) {
      Vector step = Vector::Zero(m);
      for (int i = color; i < m; i += 3) {
        step[i] = block == 0 ? 1e-6 * std::min(cell(i), cell(i + 1)) : 1e-6 * uscale;
      }
      if (step.isZero()) continue;
      Vector xp = xi;
      Vector xm = xi;
      Vector up = u;
      Vector um = u;
      if (block == 0) {
        xp += step;
        xm -= step;
      } else {
        up += step;
        um -= step;
      }
      const Vector gp = evaluate(f, xp, up, 0.0, a, b, rule, true).grad;
      const Vector gm = evaluate(f, xm, um, 0.0, a, b, rule, true).grad;
      for (int i = color; i < m; i += 3) {
        const int col = block * m + i;
        for (int k = std::max(0, i - 1); k <= std::min(m - 1, i + 1); ++k) {
          hess(k, col) = (gp[k] - gm[k]) / (2.0 * step[i]);
          hess(m + k, col) = (gp[m + k] - gm[m + k]) / (2.0 * step[i]);
        }
      }
    }
  }
  return 0.5 * (hess + hess.transpose());
}

/// -P^{-1} g with P = H + mu D, D the diagonal of |H| (floored), mu grown
/// from zero until the Cholesky factorization succeeds.
Vector preconditioned_direction(const Eigen::MatrixXd& hess, const Vector& grad) {
  const Eigen::Index size = hess.rows();
  Vector scale = hess.diagonal().cwiseAbs();
  const double floor = std::max(scale.maxCoeff(), 1.0) * 1e-12;
  scale = scale.cwiseMax(floor);
  double mu = 0.0;
  for (int attempt = 0; attempt < 60; ++attempt) {
    Eigen::MatrixXd shifted = hess;
    shifted.diagonal() += mu * scale;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      Vector d = -llt.solve(grad);
      if (d.allFinite() && d.dot(grad) < 0.0) return d;
    }
    mu = mu == 0.0 ? 1e-8 : mu * 10.0;
  }
  (void)size;
  return -grad.cwiseQuotient(scale);
}

/// Largest step fraction that keeps every cell at least half its length.
double max_feasible_step(const Vector& xi, const Vector& dxi, double a, double b) {
  const int m = static_cast<int>(xi.size());
  double limit = std::numeric_limits<double>::infinity();
  for (int c = 0; c <= m; ++c) {
    const double lo = c == 0 ? a : xi[c - 1];
    const double hi = c == m ? b : xi[c];
    const double dlo = c == 0 ? 0.0 : dxi[c - 1];
    const double dhi = c == m ? 0.0 : dxi[c];
    const double shrink = dlo - dhi;  // rate at which the cell shrinks
    if (shrink > 0.0) limit = std::min(limit, 0.5 * (hi - lo) / shrink);
  }
  return limit;
}

}  // namespace

Eigen::MatrixXd energy_hessian(const ScalarField& f, const OptimizationState& state, const ExactSolution& exact,
                               const QuadratureRule& rule) {
  require_shapes(state);
  if (!feasible_nodes(state.xi, exact.a(), exact.b())) {
    throw InvalidParameter("energy Hessian requested at an infeasible state");
  }
  return fd_hessian(f, state.xi, state.uvals, exact.a(), exact.b(), rule);
}

GdResult gd_run(const ScalarField& f, const OptimizationState& init, const GdConfig& cfg, const ExactSolution& exact,
                const QuadratureRule& rule) {
  require_shapes(init);
  const double a = exact.a();
  const double b = exact.b();
  if (!feasible_nodes(init.xi, a, b)) throw InvalidParameter("gradient descent started from an infeasible state");
  if (!(cfg.tol > 0.0)) throw InvalidParameter("gradient tolerance must be positive");
  const int n = init.cells();
  const int m = n - 1;
  const double eta0 = cfg.eta > 0.0 ? cfg.eta : GdConfig::default_eta(cfg.method, n);
  const double reference = reference_action(exact, rule);

  GdResult result;
  OptimizationState& st = result.state;
  st = init;
  st.iter = 0;
  auto current = evaluate(f, st.xi, st.uvals, reference, a, b, rule, true);
  st.energy = current.energy;
  st.grad = current.grad;
  result.trace.push_back({0, st.energy, st.grad.lpNorm<1>(), current.noise});

  Vector xi_trial(m);
  Vector u_trial(m);
  Vector direction(2 * m);
  while (true) {
    const double gnorm = st.grad.lpNorm<1>();
    if (gnorm < cfg.tol) {
      result.status = GdStatus::Converged;
      break;
    }
    if (st.iter >= cfg.max_iter) {
      result.status = GdStatus::MaxIterations;
      break;
    }
    double eta = eta0;
    if (cfg.method == GdMethod::Preconditioned) {
      direction = preconditioned_direction(fd_hessian(f, st.xi, st.uvals, a, b, rule), st.grad);
      eta = std::min(eta, max_feasible_step(st.xi, direction.head(m), a, b));
    } else {
      direction = -st.grad;
    }
    bool accepted = false;
    while (eta >= 1e-18) {
      xi_trial = st.xi + eta * direction.head(m);
      u_trial = st.uvals + eta * direction.tail(m);
      if (!feasible_nodes(xi_trial, a, b)) {
        if (!cfg.backtracking) {
          result.status = GdStatus::Infeasible;
          return result;
        }
        eta *= 0.5;
        continue;
      }
      auto trial = evaluate(f, xi_trial, u_trial, reference, a, b, rule, true);
      if (cfg.backtracking && trial.energy > current.energy + current.noise) {
        eta *= 0.5;
        continue;
      }
      st.xi = xi_trial;
      st.uvals = u_trial;
      current = std::move(trial);
      accepted = true;
      break;
    }
    if (!accepted) {
      result.status = GdStatus::Stalled;
      break;
    }
    ++st.iter;
    st.energy = current.energy;
    st.grad = current.grad;
    result.trace.push_back({st.iter, st.energy, st.grad.lpNorm<1>(), current.noise});
  }
  return result;
}

}  // namespace radapt
