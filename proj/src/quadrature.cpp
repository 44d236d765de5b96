#include "radapt/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <map>
#include <memory>
#include <mutex>

namespace radapt {

template <typename Scalar>
GaussLegendre<Scalar> compute_gauss_legendre(int order) {
  using VectorS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixS = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (order < 1) throw InvalidParameter("Gauss-Legendre order must be >= 1");

  // Jacobi matrix of the Legendre recurrence.
  MatrixS jacobi = MatrixS::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const Scalar beta = Scalar(k) / std::sqrt(Scalar(4 * k * k - 1));
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<MatrixS> eig(jacobi);
  VectorS x = eig.eigenvalues();

  VectorS w(order);
  for (int i = 0; i < order; ++i) {
    Scalar dp = 0;
    for (int it = 0; it < 3; ++it) {
      Scalar p0 = 1;
      Scalar p1 = x[i];
      for (int k = 2; k <= order; ++k) {
        const Scalar p2 = ((2 * k - 1) * x[i] * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1;
      dp = order * (x[i] * p1 - p0) / (x[i] * x[i] - 1);
      x[i] -= p1 / dp;
    }
    w[i] = 2 / ((1 - x[i] * x[i]) * dp * dp);
  }
  // Enforce exact symmetry about the midpoint.
  for (int i = 0; i < order / 2; ++i) {
    const Scalar xs = (x[order - 1 - i] - x[i]) / 2;
    const Scalar ws = (w[order - 1 - i] + w[i]) / 2;
    x[i] = -xs;
    x[order - 1 - i] = xs;
    w[i] = ws;
    w[order - 1 - i] = ws;
  }
  if (order % 2 == 1) x[order / 2] = 0;

  GaussLegendre<Scalar> out;
  out.points = (x.array() + 1) / 2;
  out.weights = w / 2;
  return out;
}

template GaussLegendre<double> compute_gauss_legendre<double>(int);
template GaussLegendre<long double> compute_gauss_legendre<long double>(int);

const GaussLegendre<double>& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendre<double>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    // Computed in extended precision, then rounded.
    const auto ext = compute_gauss_legendre<long double>(order);
    slot = std::make_unique<GaussLegendre<double>>();
    slot->points = ext.points.cast<double>();
    slot->weights = ext.weights.cast<double>();
  }
  return *slot;
}

std::string QuadratureRule::key() const {
  std::string k = std::to_string(order) + "/" + std::to_string(subdivisions) + "/" + format_number(max_subcell);
  if (!std::isnan(singular_at)) k += "/s" + format_number(singular_at);
  return k;
}

QuadratureRule rule_for(const ScalarField& f, double a, double b) {
  QuadratureRule rule;
  const auto& cat = f.catalog();
  // x^k and x^(1/p) are not smooth at 0 once |f|^(2/3) (or f itself, for
  // roots) is integrated.
  const bool origin_inside = a <= 0.0 && 0.0 <= b;
  if (cat && (cat->kind == CatalogSpec::Kind::Constant || cat->kind == CatalogSpec::Kind::Monomial)) {
    if (cat->kind == CatalogSpec::Kind::Monomial && cat->degree > 0 && origin_inside) rule.singular_at = 0.0;
    return rule;
  }
  if (cat && cat->kind == CatalogSpec::Kind::Gaussian) {
    rule.order = 7;
    rule.max_subcell = std::min(cat->sigma / 2.0, (b - a) / 16.0);
    return rule;
  }
  rule.max_subcell = (b - a) / 256.0;
  if (cat && cat->kind == CatalogSpec::Kind::Root && origin_inside) rule.singular_at = 0.0;
  return rule;
}

namespace detail {
void throw_non_finite(double x) {
  throw NumericError("non-finite integrand value at x = " + format_number(x), x);
}
}  // namespace detail

CumulativeTable cumulative_table(const std::function<double(double)>& f, double a, double b, int samples,
                                 const QuadratureRule& rule) {
  if (samples < 2) throw InvalidParameter("cumulative table needs at least two samples");
  if (!(a < b)) throw InvalidParameter("cumulative table needs a < b");
  auto checked = [&f](double x) {
    const double v = f(x);
    if (v < 0.0) throw InvalidParameter("negative integrand " + format_number(v) + " at x = " + format_number(x));
    return v;
  };
  CumulativeTable table;
  table.x.resize(samples);
  table.cumulative.resize(samples);
  const int cells = samples - 1;
  for (int i = 0; i < samples; ++i) table.x[i] = a + i * (b - a) / cells;
  table.x[cells] = b;
  table.cumulative[0] = 0.0;
  for (int i = 0; i < cells; ++i) {
    table.cumulative[i + 1] = table.cumulative[i] + integrate_interval(checked, table.x[i], table.x[i + 1], rule);
  }
  return table;
}

}  // namespace radapt
