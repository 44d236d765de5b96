#include "radapt/exact.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cmath>
#include <sstream>

#include "radapt/error.hpp"

namespace radapt {

ExactSolution::ExactSolution(ScalarField u, ScalarField source, double a, double b, Vector grid, std::string key)
    : u_(std::move(u)), source_(std::move(source)), a_(a), b_(b), grid_(std::move(grid)), key_(std::move(key)) {}

namespace {

/// Running integrals F0(x) = int_a^x f and F1(x) = int_a^x (s-a) f(s) ds.
struct GreenTable {
  ScalarField f;
  double a = 0.0;
  double b = 1.0;
  QuadratureRule local;  // single-piece rule used inside table cells
  Vector x;
  Vector f0;
  Vector f1;
  double boundary_term = 0.0;  // int_a^b (b-s) f(s) ds

  GreenTable(ScalarField field, double lo, double hi, int points, const QuadratureRule& rule)
      : f(std::move(field)), a(lo), b(hi) {
    local.order = std::max(rule.order, 5);
    local.subdivisions = 1;
    local.singular_at = rule.singular_at;
    x.resize(points);
    f0.resize(points);
    f1.resize(points);
    const int cells = points - 1;
    for (int i = 0; i < points; ++i) x[i] = a + i * (b - a) / cells;
    x[cells] = b;
    f0[0] = 0.0;
    f1[0] = 0.0;
    for (int i = 0; i < cells; ++i) {
      const auto [i0, i1] = local_integrals(x[i], x[i + 1]);
      f0[i + 1] = f0[i] + i0;
      f1[i + 1] = f1[i] + i1;
    }
    boundary_term = (b - a) * f0[cells] - f1[cells];
  }

  std::pair<double, double> local_integrals(double lo, double hi) const {
    double s0 = 0.0;
    double s1 = 0.0;
    for_each_point(lo, hi, local, [&](double s, double w) {
      const double v = f(s);
      if (!std::isfinite(v)) throw NumericError("non-finite forcing at x = " + format_number(s), s);
      s0 += w * v;
      s1 += w * v * (s - a);
    });
    return {s0, s1};
  }

  int cell_of(double t) const {
    if (!(t >= a && t <= b)) throw OutOfDomain("x = " + format_number(t) + " outside [a,b]");
    const int cells = static_cast<int>(x.size()) - 1;
    const double pos = (t - a) / (b - a) * cells;
    int k = std::clamp(static_cast<int>(pos), 0, cells - 1);
    while (k > 0 && x[k] > t) --k;
    while (k < cells - 1 && x[k + 1] <= t) ++k;
    return k;
  }

  std::pair<double, double> running(double t) const {
    const int k = cell_of(t);
    if (t == x[k]) return {f0[k], f1[k]};
    const auto [i0, i1] = local_integrals(x[k], t);
    return {f0[k] + i0, f1[k] + i1};
  }

  double u(double t) const {
    const auto [r0, r1] = running(t);
    return (t - a) * r0 - r1 - (t - a) / (b - a) * boundary_term;
  }

  double du(double t) const { return running(t).first - boundary_term / (b - a); }
};

}  // namespace

ExactSolution solve_exact(const ScalarField& f, double a, double b, const QuadratureRule& rule, int table_points) {
  if (!(a < b)) throw InvalidParameter("exact solve needs a < b");
  if (table_points < 2) throw InvalidParameter("exact solve needs at least two table points");
  constexpr int kMaxPoints = 1 << 21;
  constexpr int kProbes = 997;

  auto table = std::make_shared<GreenTable>(f, a, b, table_points, rule);
  while (2 * (table->x.size() - 1) + 1 <= kMaxPoints) {
    auto finer = std::make_shared<GreenTable>(f, a, b, 2 * (static_cast<int>(table->x.size()) - 1) + 1, rule);
    double diff = 0.0;
    for (int i = 0; i < kProbes; ++i) {
      const double t = a + (i + 0.5) * (b - a) / kProbes;
      diff = std::max(diff, std::abs(finer->u(t) - table->u(t)));
    }
    table = finer;
    if (diff <= 1e-12) break;
  }

  auto u_fn = [table](double t) { return table->u(t); };
  auto du_fn = [table](double t) { return table->du(t); };
  auto d2u_fn = [table](double t) { return table->f(t); };
  ScalarField u(u_fn, du_fn, d2u_fn, "u*[" + f.label() + "]");

  std::ostringstream key;
  key << "green|" << f.label();
  // Non-catalog fields have no identity beyond this solve; addresses get
  // reused, so number the solves instead.
  static std::atomic<std::uint64_t> serial{0};
  if (!f.catalog()) key << '#' << serial.fetch_add(1);
  key << '|' << format_number(a) << ',' << format_number(b) << '|' << table->x.size();
  return ExactSolution(u.on_domain(a, b), f.on_domain(a, b), a, b, table->x, key.str());
}

ExactSolution closed_form_exact(const CatalogSpec& spec) {
  constexpr int kGrid = 16385;
  Vector grid(kGrid);
  for (int i = 0; i < kGrid; ++i) grid[i] = static_cast<double>(i) / (kGrid - 1);

  if (spec.kind == CatalogSpec::Kind::Constant) {
    const double c = spec.value;
    ScalarField u([c](double x) { return c * x * (x - 1.0) / 2.0; }, [c](double x) { return c * (2.0 * x - 1.0) / 2.0; },
                  [c](double) { return c; }, "u*closed[" + spec.to_string() + "]");
    return ExactSolution(u, make_field(spec), 0.0, 1.0, grid, "closed|" + spec.to_string());
  }
  if (spec.kind == CatalogSpec::Kind::Monomial) {
    const int k = spec.degree;
    const double denom = (k + 1.0) * (k + 2.0);
    ScalarField u([=](double x) { return (std::pow(x, k + 2) - x) / denom; },
                  [=](double x) { return ((k + 2.0) * std::pow(x, k + 1) - 1.0) / denom; },
                  [=](double x) { return std::pow(x, k); }, "u*closed[" + spec.to_string() + "]");
    return ExactSolution(u, make_field(spec), 0.0, 1.0, grid, "closed|" + spec.to_string());
  }
  throw NotAvailable("no closed-form exact solution for " + spec.to_string());
}

}  // namespace radapt
