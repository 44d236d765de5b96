#include "radapt/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "radapt/error.hpp"

namespace radapt {

Mesh::Mesh(Vector nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw InvalidParameter("a mesh needs at least two nodes");
  const double eps = min_cell(a(), b());
  if (!(b() > a())) throw InvalidParameter("mesh endpoints must satisfy a < b");
  for (int i = 0; i < cells(); ++i) {
    if (!std::isfinite(nodes_[i]) || !(cell_length(i) >= eps)) {
      throw InvalidParameter("mesh cell " + std::to_string(i) + " is shorter than the minimum length " +
                             format_number(eps));
    }
  }
}

int Mesh::locate(double x) const {
  if (!(x >= a() && x <= b())) throw OutOfDomain("x = " + format_number(x) + " outside mesh domain");
  if (x == b()) return cells() - 1;
  const auto* begin = nodes_.data();
  const auto* end = begin + nodes_.size();
  const auto* it = std::upper_bound(begin, end, x);
  return static_cast<int>(it - begin) - 1;
}

Mesh uniform_mesh(int n, double a, double b) {
  if (n < 1) throw InvalidParameter("uniform mesh needs n >= 1");
  if (!(a < b)) throw InvalidParameter("uniform mesh needs a < b");
  Vector nodes(n + 1);
  for (int i = 0; i <= n; ++i) nodes[i] = a + i * (b - a) / n;
  nodes[n] = b;
  return Mesh(std::move(nodes));
}

Mesh mesh_from_interior(const Vector& interior, double a, double b) {
  Vector nodes(interior.size() + 2);
  nodes[0] = a;
  nodes.segment(1, interior.size()) = interior;
  nodes[nodes.size() - 1] = b;
  return Mesh(std::move(nodes));
}

PiecewiseAffine::PiecewiseAffine(Mesh mesh, Vector values) : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (values_.size() != mesh_.nodes().size()) {
    throw InvalidParameter("piecewise-affine function needs one value per mesh node");
  }
}

double PiecewiseAffine::operator()(double x) const {
  const int c = mesh_.locate(x);
  // Convex form: exact at both ends of the cell.
  const double t = (x - mesh_.node(c)) / mesh_.cell_length(c);
  return (1.0 - t) * values_[c] + t * values_[c + 1];
}

double PiecewiseAffine::deriv(double x) const { return slope(mesh_.locate(x)); }

PiecewiseAffine interpolate(const ScalarField& field, const Mesh& mesh) {
  Vector values(mesh.nodes().size());
  for (Eigen::Index i = 0; i < values.size(); ++i) values[i] = field(mesh.nodes()[i]);
  return PiecewiseAffine(mesh, std::move(values));
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_mesh_csv(std::ostream& os, const Mesh& mesh) {
  os << "x\n";
  for (Eigen::Index i = 0; i < mesh.nodes().size(); ++i) os << format_number(mesh.nodes()[i]) << '\n';
}

void write_pa_csv(std::ostream& os, const PiecewiseAffine& u) {
  os << "x,u\n";
  for (Eigen::Index i = 0; i < u.values().size(); ++i) {
    os << format_number(u.mesh().nodes()[i]) << ',' << format_number(u.values()[i]) << '\n';
  }
}

namespace {

std::vector<std::vector<double>> read_columns(std::istream& is, const std::string& header, std::size_t ncols) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidParameter("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw InvalidParameter("expected CSV header '" + header + "', got '" + line + "'");
  std::vector<std::vector<double>> cols(ncols);
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t start = 0;
    for (std::size_t c = 0; c < ncols; ++c) {
      const auto stop = c + 1 < ncols ? line.find(',', start) : line.size();
      if (stop == std::string::npos) {
        throw InvalidParameter("line " + std::to_string(lineno) + ": expected " + std::to_string(ncols) + " columns");
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + stop, v);
      if (ec != std::errc() || ptr != line.data() + stop) {
        throw InvalidParameter("line " + std::to_string(lineno) + ": malformed number");
      }
      cols[c].push_back(v);
      start = stop + 1;
    }
  }
  return cols;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

Mesh read_mesh_csv(std::istream& is) {
  auto cols = read_columns(is, "x", 1);
  return Mesh(to_vector(cols[0]));
}

PiecewiseAffine read_pa_csv(std::istream& is) {
  auto cols = read_columns(is, "x,u", 2);
  return PiecewiseAffine(Mesh(to_vector(cols[0])), to_vector(cols[1]));
}

}  // namespace radapt
