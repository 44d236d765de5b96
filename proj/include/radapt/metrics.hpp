#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "radapt/exact.hpp"
#include "radapt/mesh.hpp"
#include "radapt/quadrature.hpp"

namespace radapt {

/// Error value; `relative` is false when the reference norm vanishes and the
/// absolute error is reported instead.
struct ErrorValue {
  double value = 0.0;
  bool relative = true;
};

/// ||u_* - u_n||_{L2} / ||u_*||_{L2}.
ErrorValue rel_l2_error(const PiecewiseAffine& un, const ExactSolution& exact, const QuadratureRule& rule = {});
/// ||u_*' - u_n'||_{L2} / ||u_*'||_{L2}.
ErrorValue rel_h1_error(const PiecewiseAffine& un, const ExactSolution& exact, const QuadratureRule& rule = {});

enum class NodeNorm { L1, L2 };

/// Averaged over interior nodes: l1 = mean |a_i - b_i|, l2 = sqrt(mean
/// (a_i - b_i)^2). Throws InvalidParameter for different cell counts.
double node_discrepancy(const Mesh& first, const Mesh& second, NodeNorm norm);

enum class MeshMethod { Equidistributed, Amf, Gd };

std::string to_string(MeshMethod method);
MeshMethod parse_mesh_method(const std::string& text);

/// One line of the comparison table. Node discrepancies are measured
/// against the GD mesh of the same n.
struct ComparisonRow {
  int n = 0;
  MeshMethod method = MeshMethod::Equidistributed;
  double rel_l2 = 0.0;
  double rel_h1 = 0.0;
  double renormalized_energy = 0.0;
  double node_discrepancy_l2 = 0.0;
  double node_discrepancy_l1 = 0.0;
  std::string note;  // e.g. GD status when not converged; not part of the CSV
};

/// Header "n,method,rel_l2,rel_h1,energy,disc_l2,disc_l1" then one row each.
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);

}  // namespace radapt
