#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "radapt/amf.hpp"
#include "radapt/energy.hpp"
#include "radapt/error.hpp"
#include "radapt/fem.hpp"

using namespace radapt;

namespace {

// Per-cell action of a piecewise-affine function, integrated independently.
double action_oracle(const oracle::Fn& f, const PiecewiseAffine& u) {
  long double total = 0.0L;
  const auto& m = u.mesh();
  for (int c = 0; c < m.cells(); ++c) {
    const double s = u.slope(c);
    const double l = m.node(c), r = m.node(c + 1);
    const double vl = u.values()[c], vr = u.values()[c + 1];
    total += 0.5L * s * s * (r - l);
    auto load = [&](double x) { return f(x) * (vl + (vr - vl) * (x - l) / (r - l)); };
    if (l == 0.0) {
      // x = h t^6 smooths x^(1/p) at the origin.
      const double h = r - l;
      total += oracle::simpson([&](double t) { return load(h * std::pow(t, 6)) * 6 * h * std::pow(t, 5); }, 0, 1, 4000);
    } else {
      total += oracle::simpson(load, l, r, 400);
    }
  }
  return static_cast<double>(total);
}

std::vector<std::string> catalog() {
  return {"const:1", "poly:1", "poly:2", "poly:3", "poly:4", "poly:5", "root:2", "root:3",
          "root:4",  "root:5", "root:6", "gauss:0.5,0.05", "gauss:0.5,0.1", "gauss:0.5,0.5"};
}

}  // namespace

TEST_CASE("action examples") {
  Vector x(2), v(2);
  x << 0, 1;
  v << 0, 1;
  CHECK(action(DirichletLagrangian{make_constant(0)}, PiecewiseAffine(Mesh(x), v), {}) == doctest::Approx(0.5));

  std::mt19937_64 rng(2);
  const Mesh m(oracle::random_nodes(rng, 9));
  CHECK(action(DirichletLagrangian{make_constant(1)}, PiecewiseAffine(m, Vector::Zero(10)), {}) == 0.0);

  ScalarField bubble([](double t) { return t * (t - 1) / 2; }, "bubble");
  const auto ui = interpolate(bubble, uniform_mesh(2, 0, 1));
  const double want = action_oracle([](double) { return 1.0; }, ui);
  CHECK(want == doctest::Approx(-0.03125).epsilon(1e-14));
  CHECK(action(DirichletLagrangian{make_constant(1)}, ui, {}) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("action matches the oracle on random functions") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (const char* spec : {"poly:3", "gauss:0.5,0.1", "root:3"}) {
    const auto f = make_field(spec);
    for (int k = 0; k < 10; ++k) {
      const int n = 2 + static_cast<int>(rng() % 20);
      Vector vals(n + 1);
      for (auto& v : vals) v = g(rng);
      const PiecewiseAffine u(Mesh(oracle::random_nodes(rng, n)), vals);
      CHECK(action(DirichletLagrangian{f}, u, rule_for(f, 0, 1)) ==
            doctest::Approx(action_oracle([&](double t) { return f(t); }, u)).epsilon(1e-9));
    }
  }
}

TEST_CASE("constant forcing: renormalized gap is 1/24 at every n") {
  const auto f = make_constant(1.0);
  const auto exact = solve_exact(f, 0, 1);
  // Oracle: the Galerkin solution is the nodal interpolant, and each cell
  // contributes 1/2 int (u'-u_*')^2 = h^3/24.
  for (int n : {1, 2, 3, 4, 8, 16, 64, 100}) {
    const auto u = galerkin_solve(f, uniform_mesh(n, 0, 1), {});
    const auto r = renormalized_gap(DirichletLagrangian{f}, u, exact, n, {});
    const double h = 1.0 / n;
    const double oracle_gap = n * std::pow(h, 3) / 24.0;
    CHECK(r.gap == doctest::Approx(oracle_gap).epsilon(1e-9));
    CHECK(std::fabs(r.renormalized - 1.0 / 24) <= 1e-9);
    CHECK(r.exact_action == doctest::Approx(-1.0 / 24).epsilon(1e-12));
  }
}

TEST_CASE("zero forcing: exact interpolant has zero gap") {
  const auto f = make_constant(0.0);
  const auto exact = solve_exact(f, 0, 1);
  const auto u = interpolate(exact.u(), uniform_mesh(7, 0, 1));
  CHECK(renormalized_gap(DirichletLagrangian{f}, u, exact, 7, {}).renormalized == 0.0);
}

TEST_CASE("x^2 on the AMF mesh is within 5% of the limit minimum") {
  const auto f = make_monomial(2);
  const auto exact = solve_exact(f, 0, 1);
  const auto mesh = amf_mesh(asymptotic_map(f, 0, 1), 64);
  const auto r = renormalized_gap(DirichletLagrangian{f}, galerkin_solve(f, mesh, {}), exact, 64, {});
  CHECK(r.renormalized == doctest::Approx(27.0 / 8232).epsilon(0.05));
}

TEST_CASE("renormalized gap rejects nonzero boundary values") {
  const auto f = make_constant(1.0);
  const auto exact = solve_exact(f, 0, 1);
  CHECK_THROWS_AS(renormalized_gap(DirichletLagrangian{f}, PiecewiseAffine(uniform_mesh(2, 0, 1), Vector::Ones(3)), exact,
                                   2, {}),
                  Inadmissible);
}

TEST_CASE("second variation") {
  const DirichletLagrangian L{make_monomial(2)};
  const auto exact = solve_exact(L.forcing, 0, 1);
  ScalarField sine([](double x) { return std::sin(oracle::kPi * x); },
                   [](double x) { return oracle::kPi * std::cos(oracle::kPi * x); },
                   [](double x) { return -oracle::kPi * oracle::kPi * std::sin(oracle::kPi * x); }, "sin");
  const double want = oracle::simpson([](double x) { return std::pow(oracle::kPi * std::cos(oracle::kPi * x), 2); }, 0, 1);
  CHECK(want == doctest::Approx(oracle::kPi * oracle::kPi / 2).epsilon(1e-12));
  CHECK(second_variation(L, exact, sine, {7, 16, 0.0}) == doctest::Approx(4.93480).epsilon(1e-6));
  CHECK(second_variation(L, exact, sine, {7, 16, 0.0}) == doctest::Approx(want).epsilon(1e-12));
  CHECK(second_variation(L, exact, make_constant(0), {}) == 0.0);
  ScalarField bump([](double x) { return x * (1 - x); }, [](double x) { return 1 - 2 * x; }, [](double) { return -2.0; },
                   "bump");
  CHECK(second_variation(L, exact, bump, {}) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK_THROWS_AS(second_variation(L, exact, make_constant(1), {}), InvalidParameter);

  Diagnostics diag;
  ScalarField plain([](double x) { return x * (1 - x); }, "plain");
  CHECK(second_variation(L, exact, plain, {}, &diag) == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK_FALSE(diag.empty());
}

TEST_CASE("property: quadratic structure around u_*") {
  // F(u_* + t g) - F(u_*) = t^2/2 * second variation. Both sides come from
  // the oracle except the second variation.
  const auto f = make_monomial(2);
  const DirichletLagrangian L{f};
  const auto exact = solve_exact(f, 0, 1);
  ScalarField g([](double x) { return std::sin(oracle::kPi * x) * (1 + x); },
                [](double x) {
                  return oracle::kPi * std::cos(oracle::kPi * x) * (1 + x) + std::sin(oracle::kPi * x);
                },
                nullptr, "g");
  const double sv = second_variation(L, exact, g, {9, 32, 0.0});
  auto F = [&](double t) {
    return oracle::simpson(
        [&](double x) {
          const double p = oracle::monomial_solution_d1(2, x) + t * g.deriv1(x);
          const double z = oracle::monomial_solution(2, x) + t * g(x);
          return 0.5 * p * p + x * x * z;
        },
        0, 1, 20000);
  };
  const long double base = F(0.0);
  for (double t : {1e-2, 1e-1, 1.0}) {
    const double diff = static_cast<double>(F(t) - base);
    CAPTURE(t);
    CHECK(diff == doctest::Approx(0.5 * t * t * sv).epsilon(1e-10));
  }
}

TEST_CASE("limit functional") {
  const auto one = make_constant(1.0);
  const auto e1 = solve_exact(one, 0, 1);
  const auto zero = make_constant(0.0);
  const auto v = limit_functional(DirichletLagrangian{one}, e1, zero, [](double) { return 1.0; }, {});
  REQUIRE(v.is_finite());
  CHECK(v.value() == doctest::Approx(1.0 / 24).epsilon(1e-13));

  const auto sq = make_monomial(2);
  const auto e2 = solve_exact(sq, 0, 1, rule_for(sq, 0, 1));
  const auto opt = limit_functional(DirichletLagrangian{sq}, e2, zero,
                                    [](double x) { return std::pow(x, 4.0 / 3.0) / (3.0 / 7.0); }, {5, 64, 0.0});
  CHECK(opt.value() == doctest::Approx(27.0 / 8232).epsilon(1e-8));

  // Density vanishing on [0.4,0.6] while u_*'' = 1 there.
  const auto inf = limit_functional(DirichletLagrangian{one}, e1, zero,
                                    [](double x) { return std::fabs(x - 0.5) < 0.1 ? 0.0 : 1.25; }, {});
  CHECK_FALSE(inf.is_finite());
  CHECK_THROWS_AS(inf.value(), Error);
}

TEST_CASE("limit minimum") {
  CHECK(min_limit_energy(make_constant(1), 0, 1) == doctest::Approx(1.0 / 24).epsilon(1e-14));
  CHECK(std::fabs(min_limit_energy(make_monomial(2), 0, 1) - 27.0 / 8232) <= 1e-10);
  CHECK(27.0 / 8232 == doctest::Approx(3.27988e-3).epsilon(1e-5));
  CHECK(min_limit_energy(make_constant(0), 0, 1) == 0.0);
  // Length dependence for constant forcing: (b-a)^3/24.
  CHECK(min_limit_energy(make_constant(1), -1, 2) == doctest::Approx(27.0 / 24).epsilon(1e-13));
}

TEST_CASE("property: the optimal density attains the minimum; the uniform one does not beat it") {
  const auto zero = make_constant(0.0);
  for (const auto& spec : catalog()) {
    const auto f = make_field(spec);
    const auto rule = rule_for(f, 0, 1);
    const auto exact = solve_exact(f, 0, 1, rule);
    const double mass = static_cast<double>(
        oracle::adaptive_simpson([&](double x) { return std::pow(std::fabs(f(x)), 2.0 / 3.0); }, 0, 1, 1e-14L));
    const double best = min_limit_energy(f, 0, 1, rule);
    CAPTURE(spec);
    CHECK(best == doctest::Approx(mass * mass * mass / 24).epsilon(1e-8));
    const auto at_opt = limit_functional(DirichletLagrangian{f}, exact, zero,
                                         [&](double x) { return std::pow(std::fabs(f(x)), 2.0 / 3.0) / mass; }, rule);
    CHECK(at_opt.value() == doctest::Approx(best).epsilon(1e-8));
    const auto uniform = limit_functional(DirichletLagrangian{f}, exact, zero, [](double) { return 1.0; }, rule);
    CHECK(uniform.value() >= best * (1 - 1e-12));
  }
}

TEST_CASE("property: minimality witness") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (const char* spec : {"poly:2", "gauss:0.5,0.1"}) {
    const auto f = make_field(spec);
    const auto rule = rule_for(f, 0, 1);
    const DirichletLagrangian L{f};
    const Mesh m(oracle::random_nodes(rng, 12));
    const auto gal = galerkin_solve(f, m, rule);
    const double best = action(L, gal, rule);
    for (int k = 0; k < 200; ++k) {
      Vector vals = gal.values();
      const double size = std::pow(10.0, -static_cast<double>(rng() % 8));
      for (int i = 1; i < vals.size() - 1; ++i) vals[i] += size * g(rng);
      CHECK(action(L, PiecewiseAffine(m, vals), rule) >= best - 1e-12);
    }
  }
}
