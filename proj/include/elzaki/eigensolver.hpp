#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "elzaki/potentials.hpp"
#include "elzaki/quadrature.hpp"

namespace elzaki {

struct insufficient_bound_states_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RadialGrid {
  double r_min = 1e-4;
  double r_max = 40.0;
  int points = 12000;

  double spacing() const { return (r_max - r_min) / (points - 1); }
  void validate() const {
    if (!(r_min > 0.0) || !(r_max > r_min))
      throw std::invalid_argument("RadialGrid: need 0 < r_min < r_max");
    if (points < 500)
      throw std::invalid_argument("RadialGrid: need at least 500 points");
  }
};

struct EigenResult {
  std::vector<double> eigenvalues;           // raw second-order values
  std::vector<double> eigenvalues_refined;   // Richardson-extrapolated
  std::vector<double> convergence_estimate;  // per-eigenvalue error estimate
  std::vector<std::vector<double>> eigenvectors;  // sampled u(r), unit L2(dr) norm
  std::vector<double> nodes;                 // r values the eigenvectors live on
  RadialGrid grid;
  bool grid_too_coarse = false;
};

namespace detail {

struct Tridiag {
  std::vector<double> d;  // diagonal
  std::vector<double> e;  // off-diagonal (size d.size()-1)
};

// Symmetric discretization of the radial operator.  The self-adjoint form
//   -(hbar^2/2M) (r^{N-1} R')' + r^{N-1} [V + (hbar^2/2M) lambda / r^2] R
//     = E r^{N-1} R
// is differenced with midpoint flux weights and symmetrized by the
// similarity B^{1/2} with B = diag(r^{N-1}); the working variable is then
// exactly u = r^{(N-1)/2} R.  The origin-side face carries zero flux, so
// the dimensional part of the effective potential enters through the
// weights and never needs V at r = 0.
inline Tridiag radial_matrix(const PotentialSpec& pot, int l, int N,
                             const UnitSystem& units, double r_min, double h,
                             int points) {
  const double kin = units.hbar * units.hbar / (2.0 * units.mass);
  const double lambda =
      static_cast<double>(l) * (l + N - 2) +
      2.0 * units.mass * inverse_square_strength(pot) /
          (units.hbar * units.hbar);
  if (lambda < 0.0)
    throw std::domain_error(
        "eigensolve_radial: attractive inverse-square channel (lambda = " +
        std::to_string(lambda) + " < 0) is not supported");

  const int n = points - 1;  // unknowns; Dirichlet at the last node
  Tridiag T;
  T.d.resize(n);
  T.e.resize(n - 1);
  auto weight = [&](double r) { return std::pow(r, N - 1); };
  double w_left = 0.0;  // zero flux through the origin-side face
  for (int i = 0; i < n; ++i) {
    const double r = r_min + i * h;
    const double w_right = weight(r + 0.5 * h);
    const double w_center = weight(r);
    T.d[i] = kin * (w_left + w_right) / (h * h * w_center) +
             potential_regular(pot, r, units) + kin * lambda / (r * r);
    if (i + 1 < n)
      T.e[i] = -kin * w_right / (h * h * std::sqrt(w_center * weight(r + h)));
    w_left = w_right;
  }
  return T;
}

// number of eigenvalues strictly below x (Sturm sequence)
inline int count_below(const Tridiag& T, double x) {
  int count = 0;
  double q = 1.0;
  const size_t n = T.d.size();
  for (size_t i = 0; i < n; ++i) {
    double den = q;
    if (std::abs(den) < 1e-300) den = den < 0.0 ? -1e-300 : 1e-300;
    q = T.d[i] - x - (i ? T.e[i - 1] * T.e[i - 1] / den : 0.0);
    if (q < 0.0) ++count;
  }
  return count;
}

inline std::vector<double> sturm_eigenvalues(const Tridiag& T, int count) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const size_t n = T.d.size();
  for (size_t i = 0; i < n; ++i) {
    const double radius = (i ? std::abs(T.e[i - 1]) : 0.0) +
                          (i + 1 < n ? std::abs(T.e[i]) : 0.0);
    lo = std::min(lo, T.d[i] - radius);
    hi = std::max(hi, T.d[i] + radius);
  }
  std::vector<double> vals(count);
  for (int k = 0; k < count; ++k) {
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (count_below(T, mid) > k)
        b = mid;
      else
        a = mid;
      if (b - a <= 1e-14 * std::max({1.0, std::abs(a), std::abs(b)})) break;
    }
    vals[k] = 0.5 * (a + b);
  }
  return vals;
}

// inverse iteration with a tridiagonal partial-pivot LU solve
inline std::vector<double> inverse_iteration(const Tridiag& T, double lambda,
                                             double h) {
  const int n = static_cast<int>(T.d.size());
  const double shift = lambda + std::max(std::abs(lambda), 1.0) * 1e-11;

  std::vector<double> dl(n), dd(n), du(n), du2(n);
  std::vector<int> piv(n);
  for (int i = 0; i < n; ++i) {
    dd[i] = T.d[i] - shift;
    dl[i] = i + 1 < n ? T.e[i] : 0.0;
    du[i] = i + 1 < n ? T.e[i] : 0.0;
    du2[i] = 0.0;
  }
  // factorization (dgttrf style)
  for (int i = 0; i < n - 1; ++i) {
    if (std::abs(dd[i]) >= std::abs(dl[i])) {
      piv[i] = 0;
      if (dd[i] == 0.0) dd[i] = 1e-300;
      const double m = dl[i] / dd[i];
      dl[i] = m;
      dd[i + 1] -= m * du[i];
      if (i + 2 < n) du2[i] = 0.0;
    } else {
      piv[i] = 1;
      const double m = dd[i] / dl[i];
      dd[i] = dl[i];
      dl[i] = m;
      const double tmp = dd[i + 1];
      dd[i + 1] = du[i] - m * tmp;
      du2[i] = i + 2 < n ? du[i + 1] : 0.0;
      du[i] = tmp;
      if (i + 2 < n) du[i + 1] = -m * du2[i];
    }
  }
  if (dd[n - 1] == 0.0) dd[n - 1] = 1e-300;

  auto solve = [&](std::vector<double>& x) {
    for (int i = 0; i < n - 1; ++i) {
      if (piv[i] == 0) {
        x[i + 1] -= dl[i] * x[i];
      } else {
        std::swap(x[i], x[i + 1]);
        x[i + 1] -= dl[i] * x[i];
      }
    }
    x[n - 1] /= dd[n - 1];
    if (n >= 2) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2];
    for (int i = n - 3; i >= 0; --i)
      x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i];
  };

  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.3 * std::sin(1.7 * i);
  for (int pass = 0; pass < 3; ++pass) {
    solve(x);
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm * h);
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw std::runtime_error("inverse_iteration: breakdown");
    for (double& v : x) v /= norm;
  }
  // sign convention: positive at the peak
  double peak = 0.0;
  for (double v : x)
    if (std::abs(v) > std::abs(peak)) peak = v;
  if (peak < 0.0)
    for (double& v : x) v = -v;
  return x;
}

inline double continuum_threshold(const PotentialSpec& pot) {
  if (std::get_if<CoulombPotential>(&pot)) return 0.0;
  if (const auto* m = std::get_if<MiePotential>(&pot)) return m->c;
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

/**
 * Lowest `count` bound-state energies of the (l, N) channel on the given
 * grid: 3-point symmetric discretization plus Sturm-sequence bisection.
 * A companion solve at half resolution supplies the Richardson error
 * estimate and the refined eigenvalues; `eigenvalues` itself stays the raw
 * second-order result.
 */
inline EigenResult eigensolve_radial(const PotentialSpec& pot, int l, int N,
                                     const UnitSystem& units,
                                     const RadialGrid& grid, int count,
                                     double tolerance = 1e-6) {
  grid.validate();
  units.validate();
  if (count < 1) throw std::invalid_argument("eigensolve_radial: count >= 1");
  if (l < 0 || N < 2)
    throw std::invalid_argument("eigensolve_radial: need l >= 0, N >= 2");

  const double h = grid.spacing();
  const auto T = detail::radial_matrix(pot, l, N, units, grid.r_min, h,
                                       grid.points);
  EigenResult res;
  res.grid = grid;
  res.eigenvalues = detail::sturm_eigenvalues(T, count);

  const double threshold = detail::continuum_threshold(pot);
  for (double E : res.eigenvalues)
    if (E >= threshold)
      throw insufficient_bound_states_error(
          "eigensolve_radial: only " +
          std::to_string(static_cast<int>(
              std::count_if(res.eigenvalues.begin(), res.eigenvalues.end(),
                            [&](double v) { return v < threshold; }))) +
          " bound states below the continuum threshold");

  // coarse companion for the Richardson estimate
  const int coarse_points = grid.points / 2;
  const double hc = (grid.r_max - grid.r_min) / (coarse_points - 1);
  const auto Tc = detail::radial_matrix(pot, l, N, units, grid.r_min, hc,
                                        coarse_points);
  const auto coarse = detail::sturm_eigenvalues(Tc, count);
  const double rho2 = (hc / h) * (hc / h);
  res.eigenvalues_refined.resize(count);
  res.convergence_estimate.resize(count);
  for (int k = 0; k < count; ++k) {
    const double delta = (res.eigenvalues[k] - coarse[k]) / (rho2 - 1.0);
    res.eigenvalues_refined[k] = res.eigenvalues[k] + delta;
    res.convergence_estimate[k] = std::abs(delta);
    if (std::abs(delta) > tolerance) res.grid_too_coarse = true;
  }

  res.nodes.resize(grid.points - 1);
  for (int i = 0; i < grid.points - 1; ++i) res.nodes[i] = grid.r_min + i * h;
  res.eigenvectors.reserve(count);
  for (int k = 0; k < count; ++k)
    res.eigenvectors.push_back(
        detail::inverse_iteration(T, res.eigenvalues[k], h));
  return res;
}

/**
 * Residual of the radial equation
 *   R'' + (N-1)/r R' - [l(l+N-2)/r^2 + 2M(V - E)/hbar^2] R
 * at a point, with the closed form differentiated analytically.
 */
inline double ode_residual_radial(const ClosedFormRadial& R,
                                  const PotentialSpec& pot,
                                  const QuantumNumbers& qn,
                                  const UnitSystem& units, double r) {
  if (!(r > 0.0)) throw std::domain_error("ode_residual_radial: need r > 0");
  const double V = potential_value(pot, r, units);
  const double lterm = static_cast<double>(qn.l) * (qn.l + qn.N - 2) / (r * r);
  const double k = 2.0 * units.mass * (V - R.energy) /
                   (units.hbar * units.hbar);
  return std::abs(R.second_derivative(r) +
                  (qn.N - 1.0) / r * R.derivative(r) - (lterm + k) * R(r));
}

/// Weighted overlap int_0^inf Ra Rb r^{N-1} dr by adaptive quadrature.
inline double overlap(const ClosedFormRadial& Ra, const ClosedFormRadial& Rb,
                      int N) {
  const double cut =
      std::max(detail::radial_tail_cut(Ra, N), detail::radial_tail_cut(Rb, N));
  const double value = integrate(
      [&](double r) { return Ra(r) * Rb(r) * std::pow(r, N - 1); }, 0.0, cut,
      1e-12, 1e-13);
  if (!std::isfinite(value))
    throw std::runtime_error("overlap: integral diverged");
  return value;
}

/**
 * Default boxes per potential family: exponential tails (Coulomb, Mie) need
 * r_max ~ 30 / (slowest decay rate); Gaussian tails need ~ 12 / sqrt(rate)
 * plus the classical turning point of the highest requested state.
 */
inline RadialGrid default_grid(const PotentialSpec& pot, int l, int N,
                               const UnitSystem& units, int n_max) {
  const double hbar2 = units.hbar * units.hbar;
  const double M = units.mass;
  RadialGrid g;
  g.r_min = 1e-4;
  if (const auto* c = std::get_if<CoulombPotential>(&pot)) {
    const double beta_min =
        M * c->Z * c->e2 / (hbar2 * (n_max + l + 0.5 * (N - 1)));
    g.r_max = std::max(40.0, 30.0 / beta_min);
    g.points = 20000;
    return g;
  }
  if (const auto* m = std::get_if<MiePotential>(&pot)) {
    const double k = singularity_exponent(pot, l, N, units);
    const double gamma_p = -2.0 * M * m->b / hbar2;
    const double eps_min = gamma_p / (2.0 * (n_max + k + 0.5 * (3 - N)));
    g.r_max = std::max(40.0, 30.0 / eps_min);
    g.points = 20000;
    return g;
  }
  double rate;  // Gaussian decay e^{-rate r^2 / 2}
  if (const auto* h = std::get_if<HarmonicPotential>(&pot))
    rate = M * h->omega / units.hbar;
  else
    rate = std::sqrt(2.0 * M * std::get<PseudoharmonicPotential>(pot).a1) /
           units.hbar;
  const double turning = std::sqrt((4.0 * n_max + 2.0 * l + N) / rate);
  g.r_max = turning + 12.0 / std::sqrt(rate);
  g.points = 16000;
  return g;
}

}  // namespace elzaki
