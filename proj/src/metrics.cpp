#include "radapt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "radapt/error.hpp"

namespace radapt {

namespace {

constexpr int kErrorGridCells = 4096;

/// Mesh nodes merged with a uniform 4096-cell grid, so that every piece lies
/// inside one cell of the piecewise-affine function.
std::vector<double> union_partition(const Mesh& mesh) {
  std::vector<double> pts;
  pts.reserve(mesh.nodes().size() + kErrorGridCells + 1);
  for (Eigen::Index i = 0; i < mesh.nodes().size(); ++i) pts.push_back(mesh.nodes()[i]);
  for (int i = 0; i <= kErrorGridCells; ++i) pts.push_back(mesh.a() + i * mesh.length() / kErrorGridCells);
  std::sort(pts.begin(), pts.end());
  const double eps = Mesh::min_cell(mesh.a(), mesh.b());
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts) {
    if (out.empty() || p - out.back() >= eps) out.push_back(p);
  }
  out.back() = mesh.b();
  return out;
}

/// Returns (int |e|^2, int |ref|^2) with e = ref - approx, over the union
/// partition.
template <typename Ref, typename Approx>
std::pair<double, double> squared_norms(const PiecewiseAffine& un, const Ref& ref, const Approx& approx,
                                        const QuadratureRule& rule) {
  QuadratureRule local;
  local.order = std::max(rule.order, 5);
  const auto pts = union_partition(un.mesh());
  double err = 0.0;
  double norm = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double lo = pts[k];
    const double hi = pts[k + 1];
    const int cell = un.mesh().locate(0.5 * (lo + hi));
    err += integrate_interval(
        [&](double x) {
          const double e = ref(x) - approx(cell, x);
          return e * e;
        },
        lo, hi, local);
    norm += integrate_interval(
        [&](double x) {
          const double r = ref(x);
          return r * r;
        },
        lo, hi, local);
  }
  return {err, norm};
}

ErrorValue finish(std::pair<double, double> sq) {
  if (sq.second > 0.0) return {std::sqrt(sq.first / sq.second), true};
  return {std::sqrt(sq.first), false};
}

}  // namespace

ErrorValue rel_l2_error(const PiecewiseAffine& un, const ExactSolution& exact, const QuadratureRule& rule) {
  const Mesh& mesh = un.mesh();
  const Vector& v = un.values();
  return finish(squared_norms(
      un, [&](double x) { return exact(x); },
      [&](int c, double x) { return v[c] + un.slope(c) * (x - mesh.node(c)); }, rule));
}

ErrorValue rel_h1_error(const PiecewiseAffine& un, const ExactSolution& exact, const QuadratureRule& rule) {
  return finish(squared_norms(
      un, [&](double x) { return exact.deriv1(x); }, [&](int c, double) { return un.slope(c); }, rule));
}

double node_discrepancy(const Mesh& first, const Mesh& second, NodeNorm norm) {
  if (first.cells() != second.cells()) {
    throw InvalidParameter("node discrepancy needs meshes with equal cell counts (" + std::to_string(first.cells()) +
                           " vs " + std::to_string(second.cells()) + ")");
  }
  const int m = first.cells() - 1;
  if (m == 0) return 0.0;
  const Vector diff = first.interior() - second.interior();
  if (norm == NodeNorm::L1) return diff.lpNorm<1>() / m;
  return std::sqrt(diff.squaredNorm() / m);
}

std::string to_string(MeshMethod method) {
  switch (method) {
    case MeshMethod::Equidistributed:
      return "equidistributed";
    case MeshMethod::Amf:
      return "amf";
    case MeshMethod::Gd:
      return "gd";
  }
  return "unknown";
}

MeshMethod parse_mesh_method(const std::string& text) {
  if (text == "equi" || text == "equidistributed" || text == "uniform") return MeshMethod::Equidistributed;
  if (text == "amf") return MeshMethod::Amf;
  if (text == "gd") return MeshMethod::Gd;
  throw InvalidParameter("unknown method '" + text + "' (expected equi, amf or gd)");
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  os << "n,method,rel_l2,rel_h1,energy,disc_l2,disc_l1\n";
  for (const auto& r : rows) {
    os << r.n << ',' << to_string(r.method) << ',' << format_number(r.rel_l2) << ',' << format_number(r.rel_h1) << ','
       << format_number(r.renormalized_energy) << ',' << format_number(r.node_discrepancy_l2) << ','
       << format_number(r.node_discrepancy_l1) << '\n';
  }
}

}  // namespace radapt
