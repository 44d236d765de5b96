#include "radapt/fem.hpp"

#include "radapt/error.hpp"

namespace radapt {

Vector load_vector(const ScalarField& f, const Mesh& mesh, const QuadratureRule& rule) {
  const int n = mesh.cells();
  Vector load = Vector::Zero(std::max(n - 1, 0));
  for (int c = 0; c < n; ++c) {
    const auto [m0, m1] = hat_moments(f, mesh.node(c), mesh.node(c + 1), rule);
    if (c >= 1) load[c - 1] += m0;
    if (c + 1 <= n - 1) load[c] += m1;
  }
  return load;
}

namespace {

TridiagonalSystem<double> stiffness(const Mesh& mesh) {
  const int m = mesh.cells() - 1;
  TridiagonalSystem<double> sys(m);
  for (int i = 0; i < m; ++i) {
    const double left = 1.0 / mesh.cell_length(i);
    const double right = 1.0 / mesh.cell_length(i + 1);
    sys.diag[i] = left + right;
    if (i > 0) sys.sub[i] = -left;
    if (i + 1 < m) sys.super[i] = -right;
  }
  return sys;
}

}  // namespace

PiecewiseAffine galerkin_solve(const ScalarField& f, const Mesh& mesh, const QuadratureRule& rule) {
  const int n = mesh.cells();
  Vector values = Vector::Zero(n + 1);
  if (n >= 2) {
    auto sys = stiffness(mesh);
    const Vector load = load_vector(f, mesh, rule);
    sys.rhs = -load;
    const Vector interior = sys.solve();
    const double res = (sys.apply(interior) - sys.rhs).lpNorm<Eigen::Infinity>();
    const double scale = std::max(1.0, load.lpNorm<Eigen::Infinity>());
    if (!(res <= 1e-10 * scale)) {
      throw NumericError("Galerkin solve residual " + format_number(res) + " exceeds tolerance");
    }
    values.segment(1, n - 1) = interior;
  }
  return PiecewiseAffine(mesh, std::move(values));
}

Vector residual(const ScalarField& f, const Mesh& mesh, const PiecewiseAffine& u, const QuadratureRule& rule) {
  const int n = mesh.cells();
  if (u.mesh().cells() != n) throw InvalidParameter("residual: function and mesh have different cell counts");
  if (n < 2) return Vector();
  Vector r = load_vector(f, mesh, rule);
  for (int i = 1; i < n; ++i) r[i - 1] += u.slope(i - 1) - u.slope(i);
  return r;
}

}  // namespace radapt
