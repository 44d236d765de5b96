#include "radapt/amf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "radapt/error.hpp"

namespace radapt {

namespace {
constexpr double kPlateauTol = 1e-14;
}

MonotoneMap::MonotoneMap(Vector grid, Vector values, std::function<double(double)> density, bool degenerate)
    : grid_(std::move(grid)), values_(std::move(values)), density_(std::move(density)), degenerate_(degenerate) {
  if (grid_.size() < 2 || grid_.size() != values_.size()) {
    throw InvalidParameter("monotone map needs matching grid and value tables of length >= 2");
  }
  for (Eigen::Index i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw InvalidParameter("monotone map grid must be strictly increasing");
    if (values_[i] < values_[i - 1]) throw InvalidParameter("monotone map values must be nondecreasing");
  }
  if (values_[0] != 0.0 || values_[values_.size() - 1] != 1.0) {
    throw InvalidParameter("monotone map must run from 0 to 1");
  }
}

double MonotoneMap::operator()(double x) const {
  if (!(x >= a() && x <= b())) throw OutOfDomain("x = " + format_number(x) + " outside map domain");
  const auto* begin = grid_.data();
  const auto* end = begin + grid_.size();
  const auto k = std::min<Eigen::Index>(std::upper_bound(begin, end, x) - begin - 1, grid_.size() - 2);
  if (x == grid_[k]) return values_[k];
  if (density_) {
    QuadratureRule local;
    local.order = 7;
    const double v = values_[k] + integrate_interval(density_, grid_[k], x, local);
    return std::clamp(v, values_[k], values_[k + 1]);
  }
  const double t = (x - grid_[k]) / (grid_[k + 1] - grid_[k]);
  return values_[k] + t * (values_[k + 1] - values_[k]);
}

double MonotoneMap::density(double x) const {
  if (density_) return density_(x);
  const auto* begin = grid_.data();
  const auto k = std::clamp<Eigen::Index>(std::upper_bound(begin, begin + grid_.size(), x) - begin - 1, 0,
                                          grid_.size() - 2);
  return (values_[k + 1] - values_[k]) / (grid_[k + 1] - grid_[k]);
}

std::optional<std::pair<double, double>> MonotoneMap::plateau_at(double t) const {
  const auto* begin = values_.data();
  const auto* end = begin + values_.size();
  const auto lo = std::lower_bound(begin, end, t - kPlateauTol) - begin;
  const auto hi = std::upper_bound(begin, end, t + kPlateauTol) - begin - 1;
  if (hi - lo >= 1) return std::make_pair(grid_[lo], grid_[hi]);
  return std::nullopt;
}

double MonotoneMap::crossing(double t) const {
  const auto* begin = values_.data();
  const auto* end = begin + values_.size();
  auto k = std::lower_bound(begin, end, t) - begin;
  if (k == 0) return a();
  if (k >= values_.size()) return b();
  const double lo = grid_[k - 1];
  const double hi = grid_[k];
  const double dv = values_[k] - values_[k - 1];
  double x = dv > 0.0 ? lo + (t - values_[k - 1]) / dv * (hi - lo) : 0.5 * (lo + hi);
  if (density_) {
    // One Newton correction against the locally integrated density.
    const double slope = density_(x);
    if (slope > 0.0) x = std::clamp(x - ((*this)(x) - t) / slope, lo, hi);
  }
  return x;
}

double MonotoneMap::inverse(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw OutOfDomain("level " + format_number(t) + " outside [0,1]");
  // The ends are pinned even when y sits on a (numerical) plateau there.
  if (t == 0.0) return a();
  if (t == 1.0) return b();
  if (auto plateau = plateau_at(t)) return 0.5 * (plateau->first + plateau->second);
  return crossing(t);
}

MonotoneMap asymptotic_map(const ScalarField& f, double a, double b, const QuadratureRule& rule, int samples) {
  auto weight = [f](double x) { return std::pow(std::abs(f(x)), 2.0 / 3.0); };
  QuadratureRule table_rule = rule;
  table_rule.order = std::max(rule.order, 5);
  table_rule.subdivisions = 1;
  table_rule.max_subcell = 0.0;
  auto table = cumulative_table(weight, a, b, samples, table_rule);
  const double mass = table.cumulative[samples - 1];
  if (!(mass > 0.0)) {
    Vector identity = (table.x.array() - a) / (b - a);
    identity[0] = 0.0;
    identity[samples - 1] = 1.0;
    const double inv_len = 1.0 / (b - a);
    return MonotoneMap(table.x, identity, [inv_len](double) { return inv_len; }, true);
  }
  Vector values = table.cumulative / mass;
  values[0] = 0.0;
  values[samples - 1] = 1.0;
  return MonotoneMap(table.x, values, [weight, mass](double x) { return weight(x) / mass; });
}

Mesh amf_mesh(const MonotoneMap& map, int n, Diagnostics* diag) {
  if (n < 1) throw InvalidParameter("AMF mesh needs n >= 1");
  const double a = map.a();
  const double b = map.b();
  if (map.degenerate()) {
    if (diag) diag->warn("degenerate mesh density (f vanishes almost everywhere); using the uniform mesh");
    return uniform_mesh(n, a, b);
  }

  Vector nodes(n + 1);
  nodes[0] = a;
  nodes[n] = b;
  // Group targets by the plateau they fall on; spread each group uniformly.
  std::map<std::pair<double, double>, std::vector<int>> plateau_groups;
  for (int i = 1; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    if (auto plateau = map.plateau_at(t)) {
      plateau_groups[*plateau].push_back(i);
    } else {
      nodes[i] = map.inverse(t);
    }
  }
  for (const auto& [plateau, members] : plateau_groups) {
    const double m = static_cast<double>(members.size());
    for (std::size_t j = 0; j < members.size(); ++j) {
      nodes[members[j]] = plateau.first + (j + 1.0) * (plateau.second - plateau.first) / (m + 1.0);
    }
  }

  const double eps = Mesh::min_cell(a, b);
  double moved = 0.0;
  for (int i = 1; i < n; ++i) {
    const double floor = nodes[i - 1] + eps;
    if (nodes[i] < floor) {
      moved += floor - nodes[i];
      nodes[i] = floor;
    }
  }
  for (int i = n - 1; i >= 1; --i) {
    const double ceiling = nodes[i + 1] - eps;
    if (nodes[i] > ceiling) {
      moved += nodes[i] - ceiling;
      nodes[i] = ceiling;
    }
  }
  if (moved > 1e-3 * (b - a) && diag) {
    diag->warn("AMF nodes moved by " + format_number(moved) + " to respect the minimum cell length; increase the table resolution");
  }
  return Mesh(std::move(nodes));
}

}  // namespace radapt
