#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace elzaki {

struct GaussLaguerreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Laguerre polynomials scaled by exp(-x/2) so the recurrence stays finite
// for large n and x; returns (M_n, M_{n-1}) at x.
inline std::pair<double, double> scaled_laguerre_pair(int n, double x) {
  double m_prev = std::exp(-0.5 * x);  // M_0
  if (n == 0) return {m_prev, 0.0};
  double m = (1.0 - x) * m_prev;  // M_1
  for (int k = 1; k < n; ++k) {
    const double m_next = ((2.0 * k + 1.0 - x) * m - k * m_prev) / (k + 1.0);
    m_prev = m;
    m = m_next;
  }
  return {m, m_prev};
}

}  // namespace detail

/**
 * Nodes and weights of the n-point Gauss-Laguerre rule (weight e^{-x} on
 * [0, inf)).  Newton iteration on the classical initial guesses; the
 * scaled recurrence keeps the rule usable for n of a few hundred.
 */
inline GaussLaguerreRule gauss_laguerre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: need n >= 1");
  GaussLaguerreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  double x = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      x = 3.0 / (1.0 + 2.4 * n);
    } else if (i == 1) {
      x += 15.0 / (1.0 + 2.5 * n);
    } else {
      const double step = (1.0 + 2.55 * (i - 1)) / (1.9 * (i - 1));
      x += step * (x - rule.nodes[i - 2]);
    }
    for (int it = 0; it < 100; ++it) {
      const auto [mn, mnm1] = detail::scaled_laguerre_pair(n, x);
      // L'_n = n (L_n - L_{n-1}) / x; scaling cancels in the Newton ratio
      const double dx = x * mn / (n * (mn - mnm1));
      x -= dx;
      if (std::abs(dx) <= 1e-14 * std::max(1.0, x)) break;
    }
    rule.nodes[i] = x;
    // w_i = x_i / ((n+1) L_{n+1}(x_i))^2, evaluated in scaled form
    const auto [mnp1, unused] = detail::scaled_laguerre_pair(n + 1, x);
    (void)unused;
    const double s = (n + 1.0) * mnp1;
    rule.weights[i] = x * std::exp(-x) / (s * s);
  }
  return rule;
}

namespace detail {

// Gauss-Kronrod 15(7) pair on [-1, 1].
inline constexpr double kronrod_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kronrod_w[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double gauss_w[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
inline void gk15(const F& f, double a, double b, double& value, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double result_g = 0.0, result_k = 0.0;
  for (int j = 0; j < 7; ++j) {
    const double fv = f(c - h * kronrod_x[j]) + f(c + h * kronrod_x[j]);
    result_k += kronrod_w[j] * fv;
    if (j % 2 == 1) result_g += gauss_w[j / 2] * fv;
  }
  const double fc = f(c);
  result_k += kronrod_w[7] * fc;
  result_g += gauss_w[3] * fc;
  value = result_k * h;
  error = std::abs(result_k - result_g) * h;
}

template <typename F>
inline double adaptive_gk(const F& f, double a, double b, double rel_tol,
                          double abs_tol, int depth) {
  double value, error;
  gk15(f, a, b, value, error);
  if (!std::isfinite(value))
    throw std::runtime_error("adaptive quadrature: non-finite integrand");
  if (error <= abs_tol || error <= rel_tol * std::abs(value)) return value;
  if (depth >= 52)
    return value;  // refinement exhausted; roundoff floor reached
  const double c = 0.5 * (a + b);
  return adaptive_gk(f, a, c, rel_tol, 0.5 * abs_tol, depth + 1) +
         adaptive_gk(f, c, b, rel_tol, 0.5 * abs_tol, depth + 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b].
template <typename F>
inline double integrate(const F& f, double a, double b, double rel_tol = 1e-12,
                        double abs_tol = 1e-300) {
  if (!(b > a)) return 0.0;
  return detail::adaptive_gk(f, a, b, rel_tol, abs_tol, 0);
}

}  // namespace elzaki
