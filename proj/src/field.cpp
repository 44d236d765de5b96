#include "radapt/field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "radapt/error.hpp"

namespace radapt {

namespace {

double parse_real(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw InvalidParameter("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw InvalidParameter("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  }
  return v;
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string CatalogSpec::to_string() const {
  switch (kind) {
    case Kind::Constant:
      return "const:" + format_real(value);
    case Kind::Monomial:
      return "poly:" + std::to_string(degree);
    case Kind::Root:
      return "root:" + std::to_string(degree);
    case Kind::Gaussian:
      return "gauss:" + format_real(mu) + "," + format_real(sigma);
  }
  return {};
}

CatalogSpec parse_field_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidParameter("field spec '" + std::string(text) + "' lacks ':' (expected const:c, poly:k, root:p or gauss:mu,sigma)");
  }
  const auto head = text.substr(0, colon);
  const auto body = text.substr(colon + 1);
  CatalogSpec spec;
  if (head == "const") {
    spec.kind = CatalogSpec::Kind::Constant;
    spec.value = parse_real(body, "constant");
  } else if (head == "poly") {
    spec.kind = CatalogSpec::Kind::Monomial;
    spec.degree = parse_int(body, "monomial degree");
    if (spec.degree < 0) throw InvalidParameter("monomial degree must be >= 0");
  } else if (head == "root") {
    spec.kind = CatalogSpec::Kind::Root;
    spec.degree = parse_int(body, "root order");
    if (spec.degree < 1) throw InvalidParameter("root order must be >= 1");
  } else if (head == "gauss") {
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) throw InvalidParameter("gauss spec needs 'mu,sigma'");
    spec.kind = CatalogSpec::Kind::Gaussian;
    spec.mu = parse_real(body.substr(0, comma), "gaussian mean");
    spec.sigma = parse_real(body.substr(comma + 1), "gaussian sigma");
    if (!(spec.sigma > 0.0)) throw InvalidParameter("gaussian sigma must be positive");
  } else {
    throw InvalidParameter("unknown field kind '" + std::string(head) + "'");
  }
  return spec;
}

ScalarField::ScalarField(Fn eval, std::string label)
    : eval_(std::move(eval)), label_(std::move(label)) {}

ScalarField::ScalarField(Fn eval, Fn deriv1, Fn deriv2, std::string label)
    : eval_(std::move(eval)), d1_(std::move(deriv1)), d2_(std::move(deriv2)), label_(std::move(label)) {}

double ScalarField::deriv1(double x) const {
  if (d1_) return d1_(x);
  fallback_->store(true);
  const double h = fd_step_;
  return (eval_(x + h) - eval_(x - h)) / (2.0 * h);
}

double ScalarField::deriv2(double x) const {
  if (d2_) return d2_(x);
  fallback_->store(true);
  if (d1_) {
    const double h = fd_step_;
    return (d1_(x + h) - d1_(x - h)) / (2.0 * h);
  }
  // Second differences need a wider step to stay above rounding.
  const double h = std::cbrt(fd_step_) * 1e-2;
  return (eval_(x + h) - 2.0 * eval_(x) + eval_(x - h)) / (h * h);
}

ScalarField ScalarField::on_domain(double a, double b) const {
  ScalarField out = *this;
  out.fd_step_ = 1e-6 * (b - a);
  return out;
}

ScalarField ScalarField::with_catalog(CatalogSpec spec) const {
  ScalarField out = *this;
  out.catalog_ = spec;
  return out;
}

ScalarField make_constant(double c) {
  CatalogSpec spec;
  spec.kind = CatalogSpec::Kind::Constant;
  spec.value = c;
  return ScalarField([c](double) { return c; }, [](double) { return 0.0; },
                     [](double) { return 0.0; }, spec.to_string())
      .with_catalog(spec);
}

ScalarField make_monomial(int k) {
  if (k < 0) throw InvalidParameter("monomial degree must be >= 0, got " + std::to_string(k));
  CatalogSpec spec;
  spec.kind = CatalogSpec::Kind::Monomial;
  spec.degree = k;
  const double kd = k;
  auto ipow = [](double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  };
  return ScalarField([=](double x) { return ipow(x, k); },
                     [=](double x) { return k >= 1 ? kd * ipow(x, k - 1) : 0.0; },
                     [=](double x) { return k >= 2 ? kd * (kd - 1.0) * ipow(x, k - 2) : 0.0; },
                     spec.to_string())
      .with_catalog(spec);
}

ScalarField make_root(int p) {
  if (p < 1) throw InvalidParameter("root order must be >= 1, got " + std::to_string(p));
  CatalogSpec spec;
  spec.kind = CatalogSpec::Kind::Root;
  spec.degree = p;
  const double e = 1.0 / p;
  const bool odd = (p % 2) == 1;
  auto value = [=](double x) {
    if (x >= 0.0) return std::pow(x, e);
    if (!odd) throw OutOfDomain("even root of negative argument " + std::to_string(x));
    return -std::pow(-x, e);
  };
  constexpr double kClamp = 1e-14;
  auto d1 = [=](double x) {
    const double ax = std::max(std::abs(x), kClamp);
    if (x < 0.0 && !odd) throw OutOfDomain("even root of negative argument " + std::to_string(x));
    return e * std::pow(ax, e - 1.0);
  };
  auto d2 = [=](double x) {
    const double ax = std::max(std::abs(x), kClamp);
    if (x < 0.0 && !odd) throw OutOfDomain("even root of negative argument " + std::to_string(x));
    const double mag = e * (e - 1.0) * std::pow(ax, e - 2.0);
    return x < 0.0 ? -mag : mag;
  };
  return ScalarField(value, d1, d2, spec.to_string()).with_catalog(spec);
}

ScalarField make_gaussian(double mu, double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("gaussian sigma must be positive");
  CatalogSpec spec;
  spec.kind = CatalogSpec::Kind::Gaussian;
  spec.mu = mu;
  spec.sigma = sigma;
  const double peak = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  const double s2 = sigma * sigma;
  auto phi = [=](double x) {
    const double d = x - mu;
    return peak * std::exp(-d * d / (2.0 * s2));
  };
  return ScalarField(phi, [=](double x) { return -(x - mu) / s2 * phi(x); },
                     [=](double x) {
                       const double d = x - mu;
                       return (d * d / s2 - 1.0) / s2 * phi(x);
                     },
                     spec.to_string())
      .with_catalog(spec);
}

ScalarField make_field(const CatalogSpec& spec) {
  switch (spec.kind) {
    case CatalogSpec::Kind::Constant:
      return make_constant(spec.value);
    case CatalogSpec::Kind::Monomial:
      return make_monomial(spec.degree);
    case CatalogSpec::Kind::Root:
      return make_root(spec.degree);
    case CatalogSpec::Kind::Gaussian:
      return make_gaussian(spec.mu, spec.sigma);
  }
  throw InvalidParameter("unknown catalog kind");
}

ScalarField make_field(std::string_view text) { return make_field(parse_field_spec(text)); }

}  // namespace radapt
