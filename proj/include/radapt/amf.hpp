#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "radapt/field.hpp"
#include "radapt/mesh.hpp"
#include "radapt/outcome.hpp"
#include "radapt/quadrature.hpp"

namespace radapt {

/// Tabulated nondecreasing map y : [a,b] -> [0,1] with y(a) = 0, y(b) = 1.
/// When a density y' is attached, values between grid points are completed
/// by local Gauss integration of the density instead of linear
/// interpolation.
class MonotoneMap {
 public:
  MonotoneMap(Vector grid, Vector values, std::function<double(double)> density = {}, bool degenerate = false);

  double a() const { return grid_[0]; }
  double b() const { return grid_[grid_.size() - 1]; }
  const Vector& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  bool degenerate() const { return degenerate_; }

  double operator()(double x) const;
  /// y'(x); piecewise-constant table slope when no density is attached.
  double density(double x) const;
  /// Plateau [lo, hi] of the table on which y equals t (within 1e-14), if any.
  std::optional<std::pair<double, double>> plateau_at(double t) const;
  /// Pseudo-inverse: x with y(x) = t. On a plateau at level t returns its
  /// midpoint.
  double inverse(double t) const;

 private:
  double crossing(double t) const;

  Vector grid_;
  Vector values_;
  std::function<double(double)> density_;
  bool degenerate_;
};

/// y(x) = int_a^x |f|^{2/3} / int_a^b |f|^{2/3}, tabulated on `samples`
/// uniform points. Zero total mass yields the identity map flagged
/// degenerate.
MonotoneMap asymptotic_map(const ScalarField& f, double a, double b, const QuadratureRule& rule = {},
                           int samples = 4096);

/// Nodes x_i = y^{-1}(i/n). Targets falling on a plateau of y are spread
/// uniformly across it (a single target lands on its midpoint). Nodes are
/// then pushed apart to the minimum cell length; a warning is recorded if
/// that moves them by more than 0.1% of the domain in total.
Mesh amf_mesh(const MonotoneMap& map, int n, Diagnostics* diag = nullptr);

}  // namespace radapt
