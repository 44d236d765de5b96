#pragma once

#include <Eigen/Core>

#include "radapt/field.hpp"
#include "radapt/mesh.hpp"
#include "radapt/quadrature.hpp"

namespace radapt {

/// Tridiagonal system A x = rhs with sub-, main and super-diagonal.
/// sub[0] and super[last] are unused.
template <typename Scalar>
struct TridiagonalSystem {
  using VectorS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  VectorS sub;
  VectorS diag;
  VectorS super;
  VectorS rhs;

  explicit TridiagonalSystem(Eigen::Index size)
      : sub(VectorS::Zero(size)), diag(VectorS::Zero(size)), super(VectorS::Zero(size)), rhs(VectorS::Zero(size)) {}

  Eigen::Index size() const { return diag.size(); }

  VectorS apply(const VectorS& x) const {
    VectorS y = diag.cwiseProduct(x);
    const Eigen::Index m = size();
    if (m > 1) {
      y.tail(m - 1) += sub.tail(m - 1).cwiseProduct(x.head(m - 1));
      y.head(m - 1) += super.head(m - 1).cwiseProduct(x.tail(m - 1));
    }
    return y;
  }

  /// Thomas elimination without pivoting; valid for the symmetric positive
  /// definite systems assembled here.
  VectorS solve() const {
    const Eigen::Index m = size();
    VectorS c(m);
    VectorS d(m);
    VectorS x(m);
    if (m == 0) return x;
    c[0] = super[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for (Eigen::Index i = 1; i < m; ++i) {
      const Scalar denom = diag[i] - sub[i] * c[i - 1];
      c[i] = super[i] / denom;
      d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    x[m - 1] = d[m - 1];
    for (Eigen::Index i = m - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
    return x;
  }
};

/// Hat-function load vector int f phi_i over interior nodes i = 1..n-1.
Vector load_vector(const ScalarField& f, const Mesh& mesh, const QuadratureRule& rule);

/// Minimizer of the Dirichlet action over piecewise-affine functions on the
/// mesh with zero boundary values. Throws NumericError when the post-solve
/// residual exceeds 1e-10 (relative to the load).
PiecewiseAffine galerkin_solve(const ScalarField& f, const Mesh& mesh, const QuadratureRule& rule);

/// Gradient of the discrete action with respect to the interior nodal
/// values: K u + load.
Vector residual(const ScalarField& f, const Mesh& mesh, const PiecewiseAffine& u, const QuadratureRule& rule);

}  // namespace radapt
