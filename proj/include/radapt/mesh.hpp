#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

#include "radapt/field.hpp"

namespace radapt {

using Vector = Eigen::VectorXd;

/// Strictly increasing nodes a = x_0 < x_1 < ... < x_n = b. Cells are
/// half-open [x_i, x_{i+1}) except the last, which also contains b.
class Mesh {
 public:
  /// Throws InvalidParameter when fewer than two nodes are given or any cell
  /// is shorter than min_cell(a,b).
  explicit Mesh(Vector nodes);

  static double min_cell(double a, double b) { return 1e-12 * (b - a); }

  int cells() const { return static_cast<int>(nodes_.size()) - 1; }
  double a() const { return nodes_[0]; }
  double b() const { return nodes_[nodes_.size() - 1]; }
  double length() const { return b() - a(); }
  double node(int i) const { return nodes_[i]; }
  double cell_length(int i) const { return nodes_[i + 1] - nodes_[i]; }
  const Vector& nodes() const { return nodes_; }
  Vector interior() const { return nodes_.segment(1, cells() - 1); }

  /// Index of the cell containing x; interior nodes belong to the cell on
  /// their right. Throws OutOfDomain outside [a,b].
  int locate(double x) const;

 private:
  Vector nodes_;
};

Mesh uniform_mesh(int n, double a, double b);
/// Mesh from interior nodes plus fixed endpoints.
Mesh mesh_from_interior(const Vector& interior, double a, double b);

/// Continuous function, affine on each cell of its mesh.
class PiecewiseAffine {
 public:
  PiecewiseAffine(Mesh mesh, Vector values);

  const Mesh& mesh() const { return mesh_; }
  const Vector& values() const { return values_; }
  double slope(int cell) const {
    return (values_[cell + 1] - values_[cell]) / mesh_.cell_length(cell);
  }

  double operator()(double x) const;
  /// Slope of the containing cell (right-continuous at interior nodes).
  double deriv(double x) const;

 private:
  Mesh mesh_;
  Vector values_;
};

PiecewiseAffine interpolate(const ScalarField& field, const Mesh& mesh);

inline double eval_pa(const PiecewiseAffine& u, double x) { return u(x); }
inline double eval_pa_deriv(const PiecewiseAffine& u, double x) { return u.deriv(x); }

// CSV: a mesh is one node per line under header "x"; a piecewise-affine
// function uses header "x,u".
void write_mesh_csv(std::ostream& os, const Mesh& mesh);
void write_pa_csv(std::ostream& os, const PiecewiseAffine& u);
Mesh read_mesh_csv(std::istream& is);
PiecewiseAffine read_pa_csv(std::istream& is);

/// Shortest round-trip decimal representation used by every CSV writer.
std::string format_number(double v);

}  // namespace radapt
