#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's quadrature or solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Fn = std::function<double(double)>;

inline constexpr double kPi = 3.14159265358979323846;

// Composite Simpson in long double; m cells.
inline long double simpson(const Fn& f, double a, double b, int m = 2000) {
  const long double h = (static_cast<long double>(b) - a) / m;
  long double sum = 0.0L;
  for (int i = 0; i < m; ++i) {
    const long double x0 = a + i * h;
    sum += f(static_cast<double>(x0)) + 4.0L * f(static_cast<double>(x0 + h / 2)) + f(static_cast<double>(x0 + h));
  }
  return sum * h / 6.0L;
}

// Adaptive Simpson for integrands that are smooth but sharply peaked.
inline long double adaptive_simpson(const Fn& f, double a, double b, long double tol = 1e-15L, int depth = 0) {
  const double m = 0.5 * (a + b);
  const long double fa = f(a), fb = f(b), fm = f(m);
  const long double whole = (b - a) * (fa + 4 * fm + fb) / 6.0L;
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const long double left = (m - a) * (fa + 4.0L * f(lm) + fm) / 6.0L;
  const long double right = (b - m) * (fm + 4.0L * f(rm) + fb) / 6.0L;
  if (depth > 40 || std::fabs(static_cast<double>(left + right - whole)) <= 15 * tol) {
    return left + right + (left + right - whole) / 15.0L;
  }
  return adaptive_simpson(f, a, m, tol / 2, depth + 1) + adaptive_simpson(f, m, b, tol / 2, depth + 1);
}

// u'' = x^k on [0,1] with zero ends: (x^{k+2} - x) / ((k+1)(k+2)).
inline double monomial_solution(int k, double x) {
  return (std::pow(x, k + 2) - x) / ((k + 1.0) * (k + 2.0));
}
inline double monomial_solution_d1(int k, double x) {
  return ((k + 2.0) * std::pow(x, k + 1) - 1.0) / ((k + 1.0) * (k + 2.0));
}

// Solution of u'' = sum c_j x^j with u(a) = u(b) = 0.
inline double polynomial_solution(const std::vector<double>& c, double a, double b, double x) {
  auto particular = [&](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * std::pow(t, j + 2) / ((j + 1.0) * (j + 2.0));
    return s;
  };
  const double pa = particular(a), pb = particular(b);
  return particular(x) - pa - (pb - pa) * (x - a) / (b - a);
}

inline double polynomial_solution_d1(const std::vector<double>& c, double a, double b, double x) {
  auto particular = [&](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * std::pow(t, j + 2) / ((j + 1.0) * (j + 2.0));
    return s;
  };
  double d = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) d += c[j] * std::pow(x, j + 1) / (j + 1.0);
  return d - (particular(b) - particular(a)) / (b - a);
}

inline double polynomial(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) s = s * x + c[j];
  return s;
}

// Richardson-extrapolated central differences.
inline double fd1(const Fn& f, double x, double h) {
  auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
  return (4 * d(h / 2) - d(h)) / 3;
}
inline double fd2(const Fn& f, double x, double h) {
  auto d = [&](double s) { return (f(x + s) - 2 * f(x) + f(x - s)) / (s * s); };
  return (4 * d(h / 2) - d(h)) / 3;
}

// Sorted interior nodes in (a, b) with every cell at least min_frac * (b-a)/n.
inline Eigen::VectorXd random_nodes(std::mt19937_64& rng, int n, double a = 0.0, double b = 1.0,
                                    double min_frac = 0.2) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(n);
  for (auto& v : w) v = min_frac + unit(rng);
  double total = 0.0;
  for (double v : w) total += v;
  Eigen::VectorXd x(n + 1);
  x[0] = a;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += w[i];
    x[i + 1] = a + (b - a) * acc / total;
  }
  x[n] = b;
  return x;
}

// Exact integral of a piecewise quadratic error on one cell, where the error
// is e(x) = c (x - l)(x - r): c^2 h^5 / 30.
inline double quadratic_bubble_sq(double c, double h) { return c * c * std::pow(h, 5) / 30.0; }

}  // namespace oracle
