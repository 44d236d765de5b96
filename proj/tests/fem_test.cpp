#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "radapt/energy.hpp"
#include "radapt/exact.hpp"
#include "radapt/fem.hpp"

using namespace radapt;

TEST_CASE("tridiagonal solve against a dense factorization") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 30);
    TridiagonalSystem<double> sys(n);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      sys.sub[i] = i > 0 ? u(rng) : 0.0;
      sys.super[i] = i + 1 < n ? u(rng) : 0.0;
      sys.diag[i] = 3.0 + u(rng);
      sys.rhs[i] = u(rng);
      dense(i, i) = sys.diag[i];
      if (i > 0) dense(i, i - 1) = sys.sub[i];
      if (i + 1 < n) dense(i, i + 1) = sys.super[i];
    }
    const Vector x = sys.solve();
    const Vector want = dense.partialPivLu().solve(sys.rhs);
    CHECK((x - want).lpNorm<Eigen::Infinity>() < 1e-13);
    CHECK((sys.apply(x) - sys.rhs).lpNorm<Eigen::Infinity>() < 1e-13);
  }
}

TEST_CASE("galerkin examples") {
  const auto zero = galerkin_solve(make_constant(0), uniform_mesh(5, 0, 1), {});
  CHECK(zero.values().isZero(0.0));
  const auto one = galerkin_solve(make_constant(1), uniform_mesh(2, 0, 1), {});
  CHECK(one.values()[1] == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(one.values()[0] == 0.0);
  CHECK(one.values()[2] == 0.0);
}

TEST_CASE("property: nodal exactness for polynomial forcing on random meshes") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int deg = static_cast<int>(rng() % 6);
    std::vector<double> c(deg + 1);
    for (auto& v : c) v = u(rng);
    const double a = u(rng), b = a + 0.5 + std::fabs(u(rng));
    ScalarField f([c](double x) { return oracle::polynomial(c, x); }, "random polynomial");
    const int n = 2 + static_cast<int>(rng() % 50);
    const Mesh m(oracle::random_nodes(rng, n, a, b, 0.05));
    const auto gal = galerkin_solve(f, m, {5, 1, 0.0});
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
      worst = std::max(worst, std::fabs(gal.values()[i] - oracle::polynomial_solution(c, a, b, m.node(i))));
    }
    CAPTURE(trial);
    CHECK(worst <= 1e-12);
    CHECK(residual(f, m, gal, {5, 1, 0.0}).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("x^2 nodal values against the closed form") {
  std::mt19937_64 rng(2);
  const auto cf = closed_form_exact(parse_field_spec("poly:2"));
  const Mesh m(oracle::random_nodes(rng, 17));
  const auto gal = galerkin_solve(make_monomial(2), m, {});
  for (int i = 0; i <= 17; ++i) CHECK(std::fabs(gal.values()[i] - cf(m.node(i))) < 1e-12);
}

TEST_CASE("residual") {
  std::mt19937_64 rng(6);
  const Mesh m(oracle::random_nodes(rng, 9));
  const auto f = make_constant(1);
  const Vector r = residual(f, m, PiecewiseAffine(m, Vector::Zero(10)), {});
  REQUIRE(r.size() == 8);
  for (int i = 1; i <= 8; ++i) CHECK(r[i - 1] == doctest::Approx((m.cell_length(i - 1) + m.cell_length(i)) / 2));

  // Directional derivative of the action against finite differences.
  const auto g = make_gaussian(0.4, 0.15);
  const auto rule = rule_for(g, 0, 1);
  std::normal_distribution<double> nd;
  Vector vals(10);
  for (auto& v : vals) v = 0.1 * nd(rng);
  vals[0] = vals[9] = 0.0;
  const PiecewiseAffine u(m, vals);
  const Vector res = residual(g, m, u, rule);
  const double delta = 1e-6;
  for (int i = 1; i <= 8; ++i) {
    Vector up = vals, down = vals;
    up[i] += delta;
    down[i] -= delta;
    const double fd = (action(DirichletLagrangian{g}, PiecewiseAffine(m, up), rule) -
                       action(DirichletLagrangian{g}, PiecewiseAffine(m, down), rule)) /
                      (2 * delta);
    CHECK(res[i - 1] == doctest::Approx(fd).epsilon(1e-6).scale(1e-8));
  }
}

TEST_CASE("property: energy ordering galerkin <= interpolant <= perturbations") {
  std::mt19937_64 rng(44);
  std::normal_distribution<double> nd;
  for (const char* spec : {"poly:3", "gauss:0.5,0.1", "root:2"}) {
    const auto f = make_field(spec);
    const auto rule = rule_for(f, 0, 1);
    const auto exact = solve_exact(f, 0, 1, rule);
    const DirichletLagrangian L{f};
    const Mesh m(oracle::random_nodes(rng, 10));
    const double gal = action(L, galerkin_solve(f, m, rule), rule);
    const auto interp = interpolate(exact.u(), m);
    const double ip = action(L, interp, rule);
    CHECK(gal <= ip + 1e-15);
    for (int k = 0; k < 100; ++k) {
      Vector vals = interp.values();
      for (int i = 1; i < vals.size() - 1; ++i) vals[i] += 1e-3 * nd(rng);
      CHECK(gal <= action(L, PiecewiseAffine(m, vals), rule) + 1e-15);
    }
  }
}

TEST_CASE("property: uniform renormalized gap settles") {
  for (const char* spec : {"const:2", "poly:1", "poly:2", "poly:3", "poly:4", "poly:5", "gauss:0.5,0.05",
                           "gauss:0.5,0.1", "gauss:0.5,0.5"}) {
    const auto f = make_field(spec);
    const auto rule = rule_for(f, 0, 1);
    const auto exact = solve_exact(f, 0, 1, rule);
    const DirichletLagrangian L{f};
    auto at = [&](int n) {
      return renormalized_gap(L, galerkin_solve(f, uniform_mesh(n, 0, 1), rule), exact, n, rule).renormalized;
    };
    const double r128 = at(128), r256 = at(256);
    CAPTURE(std::string(spec));
    CHECK(std::isfinite(r128));
    CHECK(std::fabs(r256 - r128) < 0.02 * std::fabs(r256));
  }
}
