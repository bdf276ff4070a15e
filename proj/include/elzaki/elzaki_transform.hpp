#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "elzaki/expr.hpp"
#include "elzaki/quadrature.hpp"
#include "elzaki/special_functions.hpp"
#include "elzaki/transform_expr.hpp"

namespace elzaki {

/// E[t f(t)] = u^2 dT/du - u T for T = E[f].
inline TransformExpr t_multiply_once(const TransformExpr& T) {
  return T.derivative().shifted_power(2.0) - T.shifted_power(1.0);
}

/**
 * Images of t^n f^(m)(t) for n = 1, 2, 3 expressed through derivatives of
 * the image of f^(m):
 *
 *   n = 1:  u^2 T' - u T
 *   n = 2:  u^4 T''
 *   n = 3:  u^6 T''' + 3 u^5 T''
 */
inline TransformExpr t_multiplied_image(const TransformExpr& T, int power) {
  switch (power) {
    case 1:
      return t_multiply_once(T);
    case 2:
      return T.derivative().derivative().shifted_power(4.0);
    case 3: {
      const TransformExpr d2 = T.derivative().derivative();
      return d2.derivative().shifted_power(6.0) + d2.shifted_power(5.0) * 3.0;
    }
    default:
      throw std::invalid_argument("t_multiplied_image: power must be 1, 2 or 3");
  }
}

/// E[f^(n)] = T/u^n - sum_{k=0}^{n-1} u^{2-n+k} f^(k)(0).
inline TransformExpr derivative_image(const TransformExpr& T, int n,
                                      const std::vector<double>& initial_values) {
  if (n < 1) throw std::invalid_argument("derivative_image: need n >= 1");
  if (static_cast<int>(initial_values.size()) != n)
    throw std::invalid_argument(
        "derivative_image: expected " + std::to_string(n) +
        " initial values, got " + std::to_string(initial_values.size()));
  TransformExpr r = T.shifted_power(-static_cast<double>(n));
  for (int k = 0; k < n; ++k)
    r = r - TransformExpr::power(2.0 - n + k, initial_values[k]);
  return r;
}

namespace detail {

inline TransformExpr transform_base(double coeff, double power, double rate,
                                    Osc osc, double freq) {
  if (osc == Osc::none) {
    // E[t^nu e^{at}] = Gamma(nu+1) u^{nu+2} / (1 - a u)^{nu+1}
    TransformTerm t;
    t.coeff = coeff * gamma(power + 1.0);
    t.u_power = power + 2.0;
    if (rate != 0.0) t.den.push_back({-rate, 0.0, power + 1.0});
    return TransformExpr{t};
  }

  if (osc == Osc::bessel) {
    TransformTerm t;
    t.coeff = coeff;
    t.u_power = 2.0;
    t.den.push_back({0.0, freq * freq, 0.5});
    return TransformExpr{t};
  }

  // sin/cos with an exponential envelope share the denominator
  // D = (1 - a u)^2 + b^2 u^2.
  const double pr = std::round(power);
  if (std::abs(power - pr) > 1e-9 || pr < 0.0)
    throw unsupported_term_error(
        "elzaki_transform: oscillator terms need a non-negative integer power");
  const TransformFactor D{-2.0 * rate, rate * rate + freq * freq, 1.0};

  TransformExpr base;
  if (osc == Osc::sin) {
    TransformTerm t;
    t.coeff = coeff * freq;
    t.u_power = 3.0;
    t.den.push_back(D);
    base = TransformExpr{t};
  } else {  // cos
    TransformTerm t1;
    t1.coeff = coeff;
    t1.u_power = 2.0;
    t1.den.push_back(D);
    TransformTerm t2;
    t2.coeff = -coeff * rate;
    t2.u_power = 3.0;
    t2.den.push_back(D);
    base = TransformExpr{std::vector<TransformTerm>{t1, t2}};
  }
  for (int k = 0; k < static_cast<int>(pr); ++k) base = t_multiply_once(base);
  return base;
}

inline TransformExpr attach_exp_shift(TransformExpr T, double a) {
  if (a == 0.0) return T;
  std::vector<TransformTerm> ts = T.terms();
  for (auto& t : ts) t.exp_shift += a;
  return TransformExpr{std::move(ts)};
}

}  // namespace detail

/**
 * Forward Elzaki transform of a grammar expression, assembled from the
 * closed-form images of the base rows plus the t-multiplication rule.
 * Shifted terms pick up the e^{-a/u} factor of the second shifting
 * property.
 */
inline TransformExpr elzaki_transform(const Expr& f) {
  TransformExpr result;
  for (const auto& term : f.terms()) {
    if (term.kummer)
      throw unsupported_term_error(
          "elzaki_transform: non-terminating 1F1 factor has no closed-form image");
    if (term.shift == Shift::delta) {
      TransformTerm t;
      t.coeff = term.coeff;
      t.u_power = 1.0;
      t.exp_shift = term.shift_at;
      result = result + TransformExpr{t};
      continue;
    }
    TransformExpr image = detail::transform_base(
        term.coeff, term.power, term.exp_rate, term.osc, term.osc_freq);
    if (term.shift == Shift::heaviside)
      image = detail::attach_exp_shift(std::move(image), term.shift_at);
    result = result + image;
  }
  return result;
}

/**
 * Numerical Elzaki transform u^2 int_0^inf f(u s) e^{-s} ds by
 * Gauss-Laguerre quadrature.  This is the quadrature oracle the symbolic
 * table is checked against.
 */
template <typename F>
inline double elzaki_numeric(const F& f, double u, int nodes = 64) {
  if (!(u > 0.0)) throw std::domain_error("elzaki_numeric: need u > 0");
  const GaussLaguerreRule rule = gauss_laguerre(nodes);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) sum += rule.weights[i] * f(u * rule.nodes[i]);
  const double value = u * u * sum;
  if (!std::isfinite(value))
    throw std::runtime_error("elzaki_numeric: integrand overflowed");
  return value;
}

/// Duality with the Laplace transform: T(u) = u F(1/u).
template <typename F>
inline double laplace_dual(const F& laplace, double u) {
  if (!(u > 0.0)) throw std::domain_error("laplace_dual: need u > 0");
  return u * laplace(1.0 / u);
}

/// Image of e^{-at} f(t): (1 + a u) T(u / (1 + a u)).
inline TransformExpr shifted_transform(const TransformExpr& T, double a) {
  if (a == 0.0) return T;
  std::vector<TransformTerm> out;
  for (const auto& t : T.terms()) {
    TransformTerm n;
    n.coeff = t.coeff * std::exp(-a * t.exp_shift);
    n.u_power = t.u_power;
    n.exp_shift = t.exp_shift;
    double growth = 1.0 - t.u_power;  // accumulated power of (1 + a u)
    for (const auto& f : t.den) {
      // substituting u -> u/(1+au) maps the factor polynomial to
      // ((1+au)^2 + c1 u (1+au) + c2 u^2) / (1+au)^2
      n.den.push_back({2.0 * a + f.c1, a * a + a * f.c1 + f.c2, f.q});
      growth += 2.0 * f.q;
    }
    if (growth != 0.0) n.den.push_back({a, 0.0, -growth});
    out.push_back(std::move(n));
  }
  return TransformExpr{std::move(out)};
}

namespace detail {

struct LaplaceFactor {
  std::complex<double> location;  // root s_j
  double exponent;                // signed: negative = pole order
};

// Taylor coefficients around s0 of coeff * prod (s - s_j)^{e_j}, truncated
// at `count` terms.  Binomial series of each factor, multiplied out.
inline std::vector<std::complex<double>> local_series(
    double coeff, const std::vector<LaplaceFactor>& factors,
    std::complex<double> s0, int count) {
  std::vector<std::complex<double>> acc(count, 0.0);
  acc[0] = coeff;
  std::vector<std::complex<double>> fac(count);
  for (const auto& f : factors) {
    const std::complex<double> base = s0 - f.location;
    std::complex<double> lead = std::pow(base, f.exponent);
    double binom = 1.0;
    for (int i = 0; i < count; ++i) {
      fac[i] = lead * binom / std::pow(base, i);
      binom *= (f.exponent - i) / (i + 1.0);
    }
    std::vector<std::complex<double>> next(count, 0.0);
    for (int i = 0; i < count; ++i)
      for (int j = 0; j + i < count; ++j) next[i + j] += acc[i] * fac[j];
    acc = std::move(next);
  }
  return acc;
}

// Inversion of an all-integer rational term via partial fractions of the
// dual Laplace image F(s) = s T(1/s) over its complex poles.
inline void invert_rational(const TransformTerm& t, std::vector<ExprTerm>& out) {
  const int m = static_cast<int>(std::round(t.u_power));
  std::vector<LaplaceFactor> factors;
  double den_degree = 0.0;
  int P = 1 - m;
  for (const auto& f : t.den) {
    const int q = static_cast<int>(std::round(f.q));
    if (f.c2 == 0.0) {
      factors.push_back({std::complex<double>(-f.c1, 0.0), -static_cast<double>(q)});
      P += q;
      den_degree += q;
    } else {
      const double im = std::sqrt(4.0 * f.c2 - f.c1 * f.c1) / 2.0;
      const std::complex<double> z(-f.c1 / 2.0, im);
      factors.push_back({z, -static_cast<double>(q)});
      factors.push_back({std::conj(z), -static_cast<double>(q)});
      P += 2 * q;
      den_degree += 2 * q;
    }
  }
  if (P > den_degree + 0.5)
    throw not_invertible_error(
        "inverse_elzaki: image grows at infinity (derivative of delta)");
  if (P == static_cast<int>(den_degree)) {
    // constant part of the improper fraction: a pure impulse
    ExprTerm d;
    d.coeff = t.coeff;
    d.shift = Shift::delta;
    out.push_back(d);
  }
  if (P != 0) factors.push_back({std::complex<double>(0.0, 0.0),
                                 static_cast<double>(P)});

  for (size_t i = 0; i < factors.size(); ++i) {
    const auto& pole = factors[i];
    if (pole.exponent >= 0.0) continue;        // numerator power, not a pole
    if (pole.location.imag() < -1e-300) continue;  // conjugate handled with its twin
    const int k = static_cast<int>(std::round(-pole.exponent));
    std::vector<LaplaceFactor> others;
    for (size_t j = 0; j < factors.size(); ++j)
      if (j != i) others.push_back(factors[j]);
    const auto series = local_series(t.coeff, others, pole.location, k);
    const bool is_real = std::abs(pole.location.imag()) < 1e-300;
    for (int idx = 0; idx < k; ++idx) {
      const int order = k - idx;  // pole part (s - s0)^{-order}
      const std::complex<double> res = series[idx];
      const double fct = gamma(static_cast<double>(order));  // (order-1)!
      if (is_real) {
        ExprTerm e;
        e.coeff = res.real() / fct;
        e.power = order - 1;
        e.exp_rate = pole.location.real();
        out.push_back(e);
      } else {
        ExprTerm ec;
        ec.coeff = 2.0 * res.real() / fct;
        ec.power = order - 1;
        ec.exp_rate = pole.location.real();
        ec.osc = Osc::cos;
        ec.osc_freq = pole.location.imag();
        out.push_back(ec);
        ExprTerm es = ec;
        es.coeff = -2.0 * res.imag() / fct;
        es.osc = Osc::sin;
        out.push_back(es);
      }
    }
  }
}

inline bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

inline void invert_term(const TransformTerm& term, std::vector<ExprTerm>& out) {
  const double a_shift = term.exp_shift;
  std::vector<ExprTerm> piece;

  const double m = term.u_power;
  const auto& den = term.den;

  bool all_integer = near_integer(m);
  for (const auto& f : den) all_integer = all_integer && near_integer(f.q);

  if (den.empty()) {
    if (std::abs(m - 1.0) < 1e-9) {
      ExprTerm d;
      d.coeff = term.coeff;
      d.shift = Shift::delta;
      piece.push_back(d);
    } else if (m > 1.0 + 1e-9) {
      ExprTerm e;
      e.coeff = term.coeff / gamma(m - 1.0);
      e.power = m - 2.0;
      piece.push_back(e);
    } else {
      throw not_invertible_error(
          "inverse_elzaki: u^" + std::to_string(m) + " has no grammar preimage");
    }
  } else if (all_integer) {
    invert_rational(term, piece);
  } else if (den.size() == 1 && den[0].c2 == 0.0 &&
             std::abs(m - (den[0].q + 1.0)) < 1e-9) {
    // u^{q+1} (1 - a u)^{-q}  ->  t^{q-1} e^{a t} / Gamma(q)
    ExprTerm e;
    e.coeff = term.coeff / gamma(den[0].q);
    e.power = den[0].q - 1.0;
    e.exp_rate = -den[0].c1;
    piece.push_back(e);
  } else if (den.size() == 2 && den[0].c2 == 0.0 && den[1].c2 == 0.0 &&
             std::abs(m - (den[0].q + den[1].q + 1.0)) < 1e-9) {
    // u^{sigma+rho+1} (1-a1 u)^{-sigma} (1-a2 u)^{-rho}
    //   ->  e^{a1 t} t^{sigma+rho-1} 1F1(rho; sigma+rho; (a2-a1) t) / Gamma(sigma+rho)
    // (the convolution/beta-integral closed form)
    double sigma = den[0].q, rho = den[1].q;
    double a1 = -den[0].c1, a2 = -den[1].c1;
    if (a2 < a1) {  // keep the 1F1 argument non-negative
      std::swap(sigma, rho);
      std::swap(a1, a2);
    }
    ExprTerm e;
    e.coeff = term.coeff / gamma(sigma + rho);
    e.power = sigma + rho - 1.0;
    e.exp_rate = a1;
    e.kummer = KummerPart{rho, sigma + rho, a2 - a1};
    piece.push_back(e);
  } else if (den.size() == 1 && den[0].c2 > 0.0 && den[0].c1 == 0.0 &&
             std::abs(den[0].q - 0.5) < 1e-9 && std::abs(m - 2.0) < 1e-9) {
    // u^2 / sqrt(1 + a^2 u^2)  ->  J0(a t)
    ExprTerm e;
    e.coeff = term.coeff;
    e.osc = Osc::bessel;
    e.osc_freq = std::sqrt(den[0].c2);
    piece.push_back(e);
  } else {
    throw not_invertible_error(
        "inverse_elzaki: term does not match any table or convolution pattern");
  }

  if (a_shift > 1e-14) {
    for (auto& e : piece) {
      if (e.shift == Shift::delta) {
        e.shift_at = a_shift;
      } else {
        e.shift = Shift::heaviside;
        e.shift_at = a_shift;
      }
    }
  }
  out.insert(out.end(), piece.begin(), piece.end());
}

}  // namespace detail

/**
 * Inverse Elzaki transform.  Each canonical term is matched against the
 * table rows: pure powers, all-integer rational images (partial fractions
 * over the dual Laplace poles), the one- and two-linear-factor power
 * patterns coming from the convolution theorem, and the J0 row; an
 * e^{-a/u} factor turns into the corresponding Heaviside shift.
 */
inline Expr inverse_elzaki(const TransformExpr& T) {
  std::vector<ExprTerm> out;
  for (const auto& t : T.terms()) detail::invert_term(t, out);
  return Expr{std::move(out)};
}

/**
 * Closed-form convolution (G*H)(t) = int_0^t G(t-tau) H(tau) dtau.
 * Satisfies E[G*H] = (1/u) E[G] E[H].  Heaviside/delta terms are not
 * convolved.
 */
inline Expr convolve(const Expr& G, const Expr& H) {
  Expr result;
  for (const auto& a : G.terms())
    for (const auto& b : H.terms()) {
      if (a.shift != Shift::none || b.shift != Shift::none)
        throw unsupported_term_error(
            "convolve: Heaviside/delta terms are excluded from convolution");
      if (a.osc == Osc::none && b.osc == Osc::none && !a.kummer && !b.kummer) {
        // beta-integral form, valid for arbitrary real powers > -1
        double sigma = a.power + 1.0, rho = b.power + 1.0;
        double r1 = a.exp_rate, r2 = b.exp_rate;
        if (r2 < r1) {
          std::swap(sigma, rho);
          std::swap(r1, r2);
        }
        ExprTerm e;
        e.coeff = a.coeff * b.coeff * beta(sigma, rho);
        e.power = sigma + rho - 1.0;
        e.exp_rate = r1;
        e.kummer = KummerPart{rho, sigma + rho, r2 - r1};
        result = result + Expr{e};
      } else {
        // through the transform domain; the inverse raises if the pair
        // leaves the grammar
        const TransformExpr img =
            (elzaki_transform(Expr{a}) * elzaki_transform(Expr{b}))
                .shifted_power(-1.0);
        try {
          result = result + inverse_elzaki(img);
        } catch (const not_invertible_error& err) {
          throw unsupported_term_error(
              std::string("convolve: convolution leaves the grammar (") +
              err.what() + ")");
        }
      }
    }
  return result;
}

/**
 * Appendix problem: x y'' + y' + a^2 x y = 0, y(0) = 1.  In transform
 * space dT/T = (2/u + a^2 u)/(1 + a^2 u^2) du, whose solution is
 * T = C u^2 / sqrt(1 + a^2 u^2) with C = 1 fixed by y(0); the inverse
 * transform returns J0(a x).
 */
inline Expr solve_bessel_zeroth(double a) {
  if (a == 0.0) throw std::domain_error("solve_bessel_zeroth: need a != 0");
  TransformTerm t;
  t.u_power = 2.0;
  t.den.push_back({0.0, a * a, 0.5});
  return inverse_elzaki(TransformExpr{t});
}

/// Transform-space residual of the zeroth-order Bessel equation for
/// T = u^2/sqrt(1+a^2u^2): E[x y''] + E[y'] + a^2 E[x y] with y(0) = 1,
/// y'(0) = 0.  Vanishes identically; exercises the derivative rules.
inline TransformExpr bessel_zeroth_transform_residual(double a) {
  TransformTerm tt;
  tt.u_power = 2.0;
  tt.den.push_back({0.0, a * a, 0.5});
  const TransformExpr T{tt};
  const TransformExpr ypp = derivative_image(T, 2, {1.0, 0.0});
  const TransformExpr yp = derivative_image(T, 1, {1.0});
  const TransformExpr xypp = t_multiply_once(ypp);
  const TransformExpr xy = t_multiply_once(T);
  return xypp + yp + xy * (a * a);
}

/**
 * Appendix problem: y'' + omega^2 y = 0, y(0) = y0, y'(0) = yp0.  The
 * transformed equation gives T = (y0 u^2 + yp0 u^3)/(1 + omega^2 u^2);
 * table inversion returns y0 cos(omega x) + (yp0/omega) sin(omega x).
 */
inline Expr solve_shm(double omega, double y0, double yp0) {
  if (!(omega > 0.0)) throw std::domain_error("solve_shm: need omega > 0");
  const TransformFactor D{0.0, omega * omega, 1.0};
  TransformTerm t1;
  t1.coeff = y0;
  t1.u_power = 2.0;
  t1.den.push_back(D);
  TransformTerm t2;
  t2.coeff = yp0;
  t2.u_power = 3.0;
  t2.den.push_back(D);
  return inverse_elzaki(TransformExpr{std::vector<TransformTerm>{t1, t2}});
}

}  // namespace elzaki
