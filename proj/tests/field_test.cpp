#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "radapt/error.hpp"
#include "radapt/field.hpp"

using namespace radapt;

namespace {

std::vector<std::string> catalog() {
  return {"const:1", "const:-2.5", "poly:0", "poly:1", "poly:2", "poly:3", "poly:4", "poly:5",
          "root:2",  "root:3",     "root:4", "root:5", "root:6", "gauss:0.5,0.05", "gauss:0.5,0.1",
          "gauss:0.3,0.25", "gauss:0.5,0.5"};
}

bool close(double got, double want, double rel, double floor) {
  return std::fabs(got - want) <= rel * std::fabs(want) + floor;
}

}  // namespace

TEST_CASE("gaussian density values") {
  const auto g = make_gaussian(0.5, 0.05);
  CHECK(g(0.5) == doctest::Approx(1.0 / (0.05 * std::sqrt(2 * oracle::kPi))).epsilon(1e-14));
  CHECK(g(0.5) == doctest::Approx(7.97885).epsilon(1e-6));
  const double tail = g(0.0);
  CHECK(tail > 0.0);
  CHECK(tail == doctest::Approx(1.54e-22).epsilon(0.01));
  CHECK(std::fabs(g.deriv1(0.5)) < 1e-12);
}

TEST_CASE("monomial values and derivatives") {
  CHECK(make_monomial(2)(0.5) == 0.25);
  CHECK(make_monomial(0).deriv1(0.3) == 0.0);
  CHECK(make_monomial(5).deriv2(1.0) == 20.0);
  CHECK(make_monomial(3).deriv2(0.0) == 0.0);
  CHECK_THROWS_AS(make_monomial(-1), InvalidParameter);
}

TEST_CASE("spec strings") {
  CHECK(parse_field_spec("poly:3").degree == 3);
  CHECK(parse_field_spec("gauss:0.5,0.05").sigma == 0.05);
  CHECK(parse_field_spec("root:4").kind == CatalogSpec::Kind::Root);
  CHECK(parse_field_spec("const:-1.5").value == -1.5);
  for (const auto& s : catalog()) CHECK(parse_field_spec(parse_field_spec(s).to_string()).to_string() == parse_field_spec(s).to_string());
  for (const char* bad : {"", "poly", "poly:", "poly:x", "root:0", "gauss:0.5", "gauss:0.5,0", "gauss:0.5,-1",
                          "sin:1", "poly:2junk"}) {
    CAPTURE(std::string(bad));
    CHECK_THROWS_AS(parse_field_spec(bad), InvalidParameter);
  }
}

TEST_CASE("even roots reject negative arguments") {
  CHECK_THROWS_AS(make_root(2)(-0.5), OutOfDomain);
  CHECK(make_root(3)(-8.0) == doctest::Approx(-2.0));
  CHECK(make_root(1)(0.37) == 0.37);
}

TEST_CASE("catalog derivatives agree with finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.05, 0.95);
  for (const auto& spec : catalog()) {
    const auto f = make_field(spec);
    REQUIRE(f.has_deriv1());
    REQUIRE(f.has_deriv2());
    const double scale = spec.rfind("gauss", 0) == 0 ? parse_field_spec(spec).sigma : 0.05;
    const oracle::Fn fn = [&](double x) { return f(x); };
    const oracle::Fn d1 = [&](double x) { return f.deriv1(x); };
    for (int k = 0; k < 40; ++k) {
      const double x = pos(rng);
      CAPTURE(spec);
      CAPTURE(x);
      // The second derivative is checked through the analytic first
      // derivative, which keeps the difference quotient well conditioned.
      CHECK(close(f.deriv1(x), oracle::fd1(fn, x, 1e-3 * scale), 1e-4, 1e-8 * (1 + std::fabs(f(x)) / scale)));
      CHECK(close(f.deriv2(x), oracle::fd1(d1, x, 1e-3 * scale), 1e-4,
                  1e-8 * (1 + std::fabs(f(x)) / (scale * scale))));
    }
  }
}

TEST_CASE("missing derivatives fall back to differences and say so") {
  ScalarField f([](double x) { return std::sin(x); }, "sin");
  CHECK_FALSE(f.fallback_used());
  CHECK(f.deriv1(0.3) == doctest::Approx(std::cos(0.3)).epsilon(1e-8));
  CHECK(f.deriv2(0.3) == doctest::Approx(-std::sin(0.3)).epsilon(1e-3));
  CHECK(f.fallback_used());
  const auto copy = f.on_domain(0.0, 10.0);
  CHECK(copy.fallback_used());
  CHECK_FALSE(make_monomial(2).fallback_used());
}

TEST_CASE("Dirichlet Lagrangian") {
  const DirichletLagrangian L{make_monomial(1)};
  CHECK(L(0.5, 2.0, 3.0) == doctest::Approx(4.5 + 1.0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    const auto h = L.hessian(g(rng), g(rng), g(rng));
    CHECK(h.pp == 1.0);
    CHECK(h.zz == 0.0);
    CHECK(h.zp == 0.0);
  }
}
