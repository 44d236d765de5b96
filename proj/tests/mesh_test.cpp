#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "radapt/error.hpp"
#include "radapt/mesh.hpp"

using namespace radapt;

TEST_CASE("uniform meshes") {
  const auto m4 = uniform_mesh(4, 0, 1);
  CHECK(m4.cells() == 4);
  for (int i = 0; i <= 4; ++i) CHECK(m4.node(i) == i * 0.25);
  const auto m1 = uniform_mesh(1, 0, 1);
  CHECK(m1.nodes().size() == 2);
  CHECK(m1.node(0) == 0.0);
  CHECK(m1.node(1) == 1.0);
  const auto m2 = uniform_mesh(2, -1, 1);
  CHECK(m2.node(0) == -1.0);
  CHECK(m2.node(1) == 0.0);
  CHECK(m2.node(2) == 1.0);
  CHECK_THROWS_AS(uniform_mesh(0, 0, 1), InvalidParameter);
  CHECK_THROWS_AS(uniform_mesh(3, 1, 1), InvalidParameter);
}

TEST_CASE("invalid node sets") {
  CHECK_THROWS_AS(Mesh(Vector::Constant(1, 0.0)), InvalidParameter);
  Vector back(3);
  back << 0, 0.7, 0.5;
  CHECK_THROWS_AS(Mesh{back}, InvalidParameter);
  Vector dup(3);
  dup << 0, 0.5, 0.5;
  CHECK_THROWS_AS(Mesh{dup}, InvalidParameter);
}

TEST_CASE("locate") {
  const auto m = uniform_mesh(4, 0, 1);
  CHECK(m.locate(0.0) == 0);
  CHECK(m.locate(0.25) == 1);
  CHECK(m.locate(0.3) == 1);
  CHECK(m.locate(1.0) == 3);
  CHECK_THROWS_AS(m.locate(1.5), OutOfDomain);
  CHECK_THROWS_AS(m.locate(-0.1), OutOfDomain);
}

TEST_CASE("interpolation") {
  const auto sq = interpolate(make_monomial(2), uniform_mesh(2, 0, 1));
  CHECK(sq.values()[0] == 0.0);
  CHECK(sq.values()[1] == 0.25);
  CHECK(sq.values()[2] == 1.0);

  std::mt19937_64 rng(11);
  const auto c = interpolate(make_constant(3.5), Mesh(oracle::random_nodes(rng, 7)));
  for (int i = 0; i < 8; ++i) CHECK(c.values()[i] == 3.5);
  for (int i = 0; i < 7; ++i) CHECK(c.slope(i) == 0.0);

  ScalarField bubble([](double x) { return x * (x - 1) / 2; }, "bubble");
  const auto b = interpolate(bubble, uniform_mesh(2, 0, 1));
  CHECK(b.values()[0] == 0.0);
  CHECK(b.values()[1] == -0.125);
  CHECK(b.values()[2] == 0.0);
}

TEST_CASE("piecewise affine evaluation") {
  Vector x(2), v(2);
  x << 0, 1;
  v << 0, 1;
  const PiecewiseAffine line(Mesh(x), v);
  CHECK(eval_pa(line, 0.3) == doctest::Approx(0.3));
  CHECK(eval_pa_deriv(line, 0.0) == 1.0);
  CHECK(eval_pa_deriv(line, 0.7) == 1.0);
  CHECK(eval_pa_deriv(line, 1.0) == 1.0);

  Vector x3(3), v3(3);
  x3 << 0, 0.5, 1;
  v3 << 0, 1, 0;
  const PiecewiseAffine hat(Mesh(x3), v3);
  CHECK(eval_pa_deriv(hat, 0.25) == 2.0);
  CHECK(eval_pa_deriv(hat, 0.75) == -2.0);
  CHECK(eval_pa(hat, 0.75) == doctest::Approx(0.5));
  CHECK_THROWS_AS(PiecewiseAffine(Mesh(x3), v), InvalidParameter);
}

TEST_CASE("property: interpolation reproduces nodal values; slopes telescope") {
  std::mt19937_64 rng(5);
  const auto f = make_gaussian(0.4, 0.2);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    const Mesh m(oracle::random_nodes(rng, n, -0.5, 2.0));
    const auto u = interpolate(f, m);
    double integral = 0.0;
    for (int i = 0; i <= n; ++i) CHECK(eval_pa(u, m.node(i)) == f(m.node(i)));
    for (int c = 0; c < n; ++c) integral += u.slope(c) * m.cell_length(c);
    CHECK(integral == doctest::Approx(u.values()[n] - u.values()[0]).epsilon(1e-12));
  }
}

TEST_CASE("csv round trip") {
  std::mt19937_64 rng(9);
  const Mesh m(oracle::random_nodes(rng, 9));
  const auto u = interpolate(make_root(3), m);
  std::stringstream ms, us;
  write_mesh_csv(ms, m);
  write_pa_csv(us, u);
  CHECK(ms.str().rfind("x\n", 0) == 0);
  CHECK(us.str().rfind("x,u\n", 0) == 0);
  const auto m2 = read_mesh_csv(ms);
  const auto u2 = read_pa_csv(us);
  CHECK(m2.nodes() == m.nodes());
  CHECK(u2.values() == u.values());

  std::istringstream bad("x\n0\nzero\n1\n");
  CHECK_THROWS_AS(read_mesh_csv(bad), InvalidParameter);
}

TEST_CASE("format_number is round-trip exact") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 30) - 15);
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(0.25) == "0.25");
}
