#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace elzaki {

/// True when x is 0, -1, -2, ... within `tol` of the nearest integer.
inline bool is_nonpositive_integer(double x, double tol = 1e-9) {
  const double r = std::round(x);
  return r <= 0.5 && std::abs(x - r) < tol;
}

/**
 * Gamma function for real argument.
 *
 * Lanczos approximation (g = 7, 9 coefficients) for x >= 0.5, relative
 * accuracy better than 1e-13 over the working range x <= 50; the
 * reflection formula extends it to x < 0.5.  Throws at the poles.
 */
inline double gamma(double x) {
  static constexpr double lanczos_g = 7.0;
  static constexpr double coeff[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,    12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};

  if (x <= 0.0 && x == std::floor(x))
    throw std::domain_error("gamma: pole at non-positive integer x = " +
                            std::to_string(x));

  if (x < 0.5) {
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    const double pi = 3.14159265358979323846;
    return pi / (std::sin(pi * x) * gamma(1.0 - x));
  }

  const double z = x - 1.0;
  double a = coeff[0];
  for (int k = 1; k < 9; ++k) a += coeff[k] / (z + k);
  const double t = z + lanczos_g + 0.5;
  const double sqrt_two_pi = 2.50662827463100050242;
  return sqrt_two_pi * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

/// Euler beta function B(sigma, rho) = Gamma(sigma) Gamma(rho) / Gamma(sigma + rho).
inline double beta(double sigma, double rho) {
  if (sigma <= 0.0 || rho <= 0.0)
    throw std::domain_error("beta: arguments must be positive, got (" +
                            std::to_string(sigma) + ", " + std::to_string(rho) + ")");
  return gamma(sigma) * gamma(rho) / gamma(sigma + rho);
}

/**
 * Confluent hypergeometric function 1F1(a, b, x) (Kummer's M).
 *
 * When a is a non-positive integer -n the series terminates and the
 * degree-n polynomial is summed exactly; this branch takes priority over
 * poles of b that lie beyond the termination index.  Otherwise the power
 * series is summed to relative tolerance 1e-12 with a 500-term cap.
 */
inline double kummer_1f1(double a, double b, double x) {
  const double ar = std::round(a);
  const bool terminating = is_nonpositive_integer(a);

  if (terminating) {
    const int n = static_cast<int>(-ar);
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < n; ++k) {
      const double bk = b + k;
      if (bk == 0.0 || std::abs(bk) < 1e-14)
        throw std::domain_error("kummer_1f1: pole of b reached before termination");
      term *= (ar + k) / bk * x / (k + 1);
      sum += term;
    }
    return sum;
  }

  if (is_nonpositive_integer(b))
    throw std::domain_error("kummer_1f1: b is a non-positive integer, b = " +
                            std::to_string(b));

  constexpr int max_terms = 500;
  constexpr double rel_tol = 1e-12;
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < max_terms; ++k) {
    term *= (a + k) / (b + k) * x / (k + 1);
    sum += term;
    if (!std::isfinite(sum))
      throw std::runtime_error("kummer_1f1: series overflowed");
    if (std::abs(term) <= rel_tol * std::abs(sum)) return sum;
  }
  throw std::runtime_error("kummer_1f1: series did not converge within 500 terms");
}

/// d/dx 1F1(a, b, x) = (a/b) 1F1(a+1, b+1, x).
inline double kummer_1f1_deriv(double a, double b, double x) {
  return a / b * kummer_1f1(a + 1.0, b + 1.0, x);
}

/// d^2/dx^2 1F1(a, b, x).
inline double kummer_1f1_deriv2(double a, double b, double x) {
  return a * (a + 1.0) / (b * (b + 1.0)) * kummer_1f1(a + 2.0, b + 2.0, x);
}

/// Bessel function of the first kind, order zero.  J0 is even, and the
/// library routine wants a non-negative argument.
inline double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

}  // namespace elzaki
