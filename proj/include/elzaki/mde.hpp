#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "elzaki/expr.hpp"
#include "elzaki/special_functions.hpp"

namespace elzaki {

/// Free parameters of the model differential equation
///   y chi'' + A chi' + (C - B^2 y) chi = 0,  B > 0.
struct MdeParams {
  double A = 0.0;
  double B = 1.0;
  double C = 0.0;
};

/**
 * Transform-space solution T(u) = K (1/u) g(u) h(u) with
 *
 *   g(u) = u^{p + C/B + 1} / (1 + B u)^{p + C/B},
 *   h(u) = u^{p + 1}       / (1 - B u)^{p},
 *   p    = -(A - 2 + C/B) / 2.
 */
struct TransformFactors {
  double p = 0.0;
  double B = 1.0;
  double g_num_power = 0.0;
  double g_den_power = 0.0;  // power of (1 + B u)
  double h_num_power = 0.0;
  double h_den_power = 0.0;  // power of (1 - B u)

  double g(double u) const {
    return std::pow(u, g_num_power) * std::pow(1.0 + B * u, -g_den_power);
  }
  double h(double u) const {
    if (1.0 - B * u <= 0.0)
      throw std::domain_error("TransformFactors: u outside convergence region");
    return std::pow(u, h_num_power) * std::pow(1.0 - B * u, -h_den_power);
  }
  /// K (1/u) g(u) h(u)
  double T(double u, double K = 1.0) const { return K / u * g(u) * h(u); }
};

inline TransformFactors transform_space_solution(const MdeParams& params) {
  if (!(params.B > 0.0))
    throw std::domain_error("transform_space_solution: B must be positive");
  TransformFactors f;
  const double cb = params.C / params.B;
  f.p = -(params.A - 2.0 + cb) / 2.0;
  f.B = params.B;
  f.g_num_power = f.p + cb + 1.0;
  f.g_den_power = f.p + cb;
  f.h_num_power = f.p + 1.0;
  f.h_den_power = f.p;
  return f;
}

/// Residual of the quantization condition p = -n; the caller solves
/// residual = 0 for the energy-bearing parameter hidden in B or C.
inline double quantization_condition(const MdeParams& params, int n) {
  if (n < 0) throw std::invalid_argument("quantization_condition: need n >= 0");
  return transform_space_solution(params).p + n;
}

/**
 * Closed-form solution of the quantized MDE,
 *
 *   chi(y) = K e^{-B y} y^{2p + C/B - 1} 1F1(p; 2p + C/B; 2 B y) / Gamma(2p + C/B)
 *
 * with p = -n, so the 1F1 factor is a degree-n polynomial.
 */
struct ClosedFormChi {
  double decay = 1.0;            // B
  double power_exponent = 0.0;   // 2p + C/B - 1
  double f11_a = 0.0;            // p = -n
  double f11_b = 1.0;            // 2p + C/B
  double f11_scale = 2.0;        // 2B
  int n = 0;
  double K = 1.0;
  bool normalization_pending = true;

  double operator()(double y) const {
    return prefactor() * std::pow(y, power_exponent) * std::exp(-decay * y) *
           kummer_1f1(f11_a, f11_b, f11_scale * y);
  }

  double derivative(double y) const {
    const double z = f11_scale * y;
    const double F = kummer_1f1(f11_a, f11_b, z);
    const double Fp = kummer_1f1_deriv(f11_a, f11_b, z) * f11_scale;
    const double e = std::exp(-decay * y);
    const double up = std::pow(y, power_exponent - 1.0) * e *
                      (power_exponent - decay * y);
    const double u = std::pow(y, power_exponent) * e;
    return prefactor() * (up * F + u * Fp);
  }

  double second_derivative(double y) const {
    const double z = f11_scale * y;
    const double F = kummer_1f1(f11_a, f11_b, z);
    const double Fp = kummer_1f1_deriv(f11_a, f11_b, z) * f11_scale;
    const double Fpp =
        kummer_1f1_deriv2(f11_a, f11_b, z) * f11_scale * f11_scale;
    const double a = power_exponent;
    const double e = std::exp(-decay * y);
    const double u = std::pow(y, a) * e;
    const double up = std::pow(y, a - 1.0) * e * (a - decay * y);
    const double upp = e * (a * (a - 1.0) * std::pow(y, a - 2.0) -
                            2.0 * decay * a * std::pow(y, a - 1.0) +
                            decay * decay * std::pow(y, a));
    return prefactor() * (upp * F + 2.0 * up * Fp + u * Fpp);
  }

  /// The quantized solution as a grammar expression (the terminating 1F1
  /// expands into polynomial terms).
  Expr as_expr() const {
    ExprTerm t;
    t.coeff = prefactor();
    t.power = power_exponent;
    t.exp_rate = -decay;
    t.kummer = KummerPart{f11_a, f11_b, f11_scale};
    return Expr{t};
  }

 private:
  double prefactor() const { return K / gamma(f11_b); }
};

inline ClosedFormChi closed_form_chi(const MdeParams& params, int n,
                                     double K = 1.0) {
  const TransformFactors f = transform_space_solution(params);
  if (n < 0) throw std::invalid_argument("closed_form_chi: need n >= 0");
  if (std::abs(f.p + n) > 1e-9 * std::max(1.0, std::abs(f.p)))
    throw std::invalid_argument(
        "closed_form_chi: quantization p = -n not satisfied (p = " +
        std::to_string(f.p) + ", n = " + std::to_string(n) + ")");
  const double b = params.C / params.B - 2.0 * n;  // = 2p + C/B
  if (b <= 1e-12)
    throw std::domain_error(
        "closed_form_chi: Gamma(2p + C/B) pole; C/B - 2n = " +
        std::to_string(b) + " must be positive at quantum number n = " +
        std::to_string(n));
  ClosedFormChi chi;
  chi.decay = params.B;
  chi.power_exponent = b - 1.0;
  chi.f11_a = -static_cast<double>(n);
  chi.f11_b = b;
  chi.f11_scale = 2.0 * params.B;
  chi.n = n;
  chi.K = K;
  return chi;
}

/**
 * Finite-difference residual |y chi'' + A chi' + (C - B^2 y) chi| with
 * 5-point central differences; h = 0 picks the default 1e-4 max(1, y).
 */
inline double mde_residual(const ClosedFormChi& chi, const MdeParams& params,
                           double y, double h = 0.0) {
  if (!(y > 0.0)) throw std::domain_error("mde_residual: need y > 0");
  if (h == 0.0) h = 1e-4 * std::max(1.0, y);
  if (y - 2.0 * h <= 0.0) h = y / 4.0;
  const double f_m2 = chi(y - 2.0 * h), f_m1 = chi(y - h);
  const double f_0 = chi(y);
  const double f_p1 = chi(y + h), f_p2 = chi(y + 2.0 * h);
  const double d1 = (-f_p2 + 8.0 * f_p1 - 8.0 * f_m1 + f_m2) / (12.0 * h);
  const double d2 = (-f_p2 + 16.0 * f_p1 - 30.0 * f_0 + 16.0 * f_m1 - f_m2) /
                    (12.0 * h * h);
  return std::abs(y * d2 + params.A * d1 +
                  (params.C - params.B * params.B * y) * f_0);
}

}  // namespace elzaki
