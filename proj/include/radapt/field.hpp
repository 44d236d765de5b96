#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace radapt {

/// Catalog identity of a built-in field; used for closed-form lookups and
/// the CLI string grammar "const:c", "poly:k", "root:p", "gauss:mu,sigma".
struct CatalogSpec {
  enum class Kind { Constant, Monomial, Root, Gaussian };
  Kind kind = Kind::Constant;
  double value = 0.0;  // constant c
  int degree = 0;      // monomial k or root order p
  double mu = 0.0;
  double sigma = 1.0;

  std::string to_string() const;
};

CatalogSpec parse_field_spec(std::string_view text);

/// A real function on an interval with optional analytic first and second
/// derivatives. Missing derivatives are replaced by central differences with
/// step 1e-6*(b-a); the fallback is recorded and queryable.
class ScalarField {
 public:
  using Fn = std::function<double(double)>;

  ScalarField() = default;
  ScalarField(Fn eval, std::string label);
  ScalarField(Fn eval, Fn deriv1, Fn deriv2, std::string label);

  double operator()(double x) const { return eval_(x); }
  double eval(double x) const { return eval_(x); }
  double deriv1(double x) const;
  double deriv2(double x) const;

  bool has_deriv1() const { return static_cast<bool>(d1_); }
  bool has_deriv2() const { return static_cast<bool>(d2_); }
  bool fallback_used() const { return fallback_->load(); }

  const std::string& label() const { return label_; }
  const std::optional<CatalogSpec>& catalog() const { return catalog_; }

  /// Copy with the finite-difference scale set from the domain length.
  ScalarField on_domain(double a, double b) const;
  ScalarField with_catalog(CatalogSpec spec) const;

 private:
  Fn eval_;
  Fn d1_;
  Fn d2_;
  std::string label_;
  std::optional<CatalogSpec> catalog_;
  double fd_step_ = 1e-6;
  std::shared_ptr<std::atomic<bool>> fallback_ = std::make_shared<std::atomic<bool>>(false);
};

ScalarField make_constant(double c);
ScalarField make_monomial(int k);
/// x^{1/p}. Derivatives clamp their argument to x >= 1e-14 since they blow
/// up at the origin.
ScalarField make_root(int p);
/// Normalized Gaussian density with mean mu and standard deviation sigma.
ScalarField make_gaussian(double mu, double sigma);
ScalarField make_field(const CatalogSpec& spec);
ScalarField make_field(std::string_view text);

/// L(x,z,p) = p^2/2 + f(x) z.
struct DirichletLagrangian {
  ScalarField forcing;

  struct Hessian {
    double zz = 0.0;
    double zp = 0.0;
    double pp = 1.0;
  };

  double operator()(double x, double z, double p) const { return 0.5 * p * p + forcing(x) * z; }
  Hessian hessian(double /*x*/, double /*z*/, double /*p*/) const { return {}; }
};

}  // namespace radapt
