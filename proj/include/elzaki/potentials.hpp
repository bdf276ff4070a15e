#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "elzaki/mde.hpp"
#include "elzaki/quadrature.hpp"
#include "elzaki/special_functions.hpp"

namespace elzaki {

/// Requested state is outside the discrete spectrum of the model.
struct no_bound_state_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct UnitSystem {
  double hbar = 1.0;
  double mass = 1.0;
  void validate() const {
    if (!(hbar > 0.0) || !(mass > 0.0))
      throw std::invalid_argument("UnitSystem: hbar and mass must be positive");
  }
};

/// V(r) = -Z e2 / r
struct CoulombPotential {
  double Z = 1.0;
  double e2 = 1.0;
};

/// V(r) = a/r^2 + b/r + c
struct MiePotential {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  static MiePotential modified_kratzer(double D0, double r0) {
    return {-D0 * r0 * r0, 2.0 * D0 * r0, -D0};
  }
  static MiePotential kratzer_fues(double D0, double r0) {
    return {D0 * r0 * r0, -2.0 * D0 * r0, 0.0};
  }
};

/// V(r) = (1/2) M omega^2 r^2
struct HarmonicPotential {
  double omega = 1.0;
};

/// V(r) = a1 r^2 + a2/r^2 + a3
struct PseudoharmonicPotential {
  double a1 = 1.0;
  double a2 = 0.0;
  double a3 = 0.0;
  /// Molecular form De (r/re - re/r)^2.
  static PseudoharmonicPotential from_molecular(double De, double re) {
    return {De / (re * re), De * re * re, -2.0 * De};
  }
};

using PotentialSpec = std::variant<CoulombPotential, MiePotential,
                                   HarmonicPotential, PseudoharmonicPotential>;

struct QuantumNumbers {
  int n = 0;
  int l = 0;
  int N = 3;
  void validate() const {
    if (n < 0) throw std::invalid_argument("QuantumNumbers: need n >= 0");
    if (l < 0) throw std::invalid_argument("QuantumNumbers: need l >= 0");
    if (N < 2)
      throw std::invalid_argument(
          "QuantumNumbers: the construction is restricted to N > 1");
  }
};

/// Coefficient of the 1/r^2 part of V (zero for Coulomb and harmonic).
inline double inverse_square_strength(const PotentialSpec& pot) {
  if (const auto* m = std::get_if<MiePotential>(&pot)) return m->a;
  if (const auto* p = std::get_if<PseudoharmonicPotential>(&pot)) return p->a2;
  return 0.0;
}

/// V(r) with M-dependent factors resolved and the 1/r^2 part removed.
inline double potential_regular(const PotentialSpec& pot, double r,
                                const UnitSystem& units) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CoulombPotential>)
          return -p.Z * p.e2 / r;
        else if constexpr (std::is_same_v<T, MiePotential>)
          return p.b / r + p.c;
        else if constexpr (std::is_same_v<T, HarmonicPotential>)
          return 0.5 * units.mass * p.omega * p.omega * r * r;
        else
          return p.a1 * r * r + p.a3;
      },
      pot);
}

/// Full V(r) in the active unit system.
inline double potential_value(const PotentialSpec& pot, double r,
                              const UnitSystem& units) {
  return potential_regular(pot, r, units) +
         inverse_square_strength(pot) / (r * r);
}

/**
 * Positive root k of k(k+1) - k(N-1) - lambda = 0 with
 * lambda = l(l+N-2) + (2M/hbar^2) * (coefficient of 1/r^2 in V); the
 * substitution R = r^{-k} f removes the singular term.  For Coulomb and
 * harmonic this reduces to k = l + N - 2.
 */
inline double singularity_exponent(const PotentialSpec& pot, int l, int N,
                                   const UnitSystem& units) {
  units.validate();
  if (l < 0 || N < 2)
    throw std::invalid_argument("singularity_exponent: need l >= 0, N >= 2");
  const double lambda =
      static_cast<double>(l) * (l + N - 2) +
      2.0 * units.mass * inverse_square_strength(pot) / (units.hbar * units.hbar);
  const double disc = static_cast<double>(N - 2) * (N - 2) + 4.0 * lambda;
  if (disc < 0.0)
    throw std::domain_error(
        "singularity_exponent: complex root; the inverse-square term is too "
        "attractive (discriminant " + std::to_string(disc) + ")");
  return 0.5 * ((N - 2) + std::sqrt(disc));
}

enum class VariableMap { identity, square };  // y = r or y = r^2

struct MdeMapping {
  MdeParams params;
  VariableMap map = VariableMap::identity;
  double k = 0.0;  // singularity-removal exponent
};

/**
 * Maps a potential model at energy E onto the MDE.  Coulomb and Mie keep
 * y = r; the oscillator models substitute y = r^2.
 */
inline MdeMapping mde_map(const PotentialSpec& pot, int l, int N,
                          const UnitSystem& units, double E) {
  units.validate();
  const double hbar2 = units.hbar * units.hbar;
  const double M = units.mass;
  MdeMapping out;
  out.k = singularity_exponent(pot, l, N, units);

  if (const auto* c = std::get_if<CoulombPotential>(&pot)) {
    if (!(E < 0.0))
      throw std::domain_error("mde_map: Coulomb bound states require E < 0");
    out.map = VariableMap::identity;
    out.params.A = -(2.0 * l + N - 3.0);
    out.params.B = std::sqrt(-2.0 * M * E) / units.hbar;
    out.params.C = 2.0 * M * c->Z * c->e2 / hbar2;
    return out;
  }
  if (const auto* m = std::get_if<MiePotential>(&pot)) {
    if (!(E < m->c))
      throw std::domain_error("mde_map: Mie bound states require E < c");
    out.map = VariableMap::identity;
    out.params.A = -(2.0 * out.k - N + 1.0);
    out.params.B = std::sqrt(-2.0 * M * (E - m->c)) / units.hbar;
    out.params.C = -2.0 * M * m->b / hbar2;
    return out;
  }
  if (const auto* h = std::get_if<HarmonicPotential>(&pot)) {
    if (!(h->omega > 0.0))
      throw std::invalid_argument("mde_map: harmonic omega must be positive");
    if (!(E > 0.0))
      throw std::domain_error("mde_map: harmonic spectrum is positive");
    out.map = VariableMap::square;
    const double alpha0 = M * h->omega / units.hbar;
    const double beta0_sq = 2.0 * M * E / hbar2;
    out.params.A = 0.5 * N - out.k;
    out.params.B = 0.5 * alpha0;
    out.params.C = 0.25 * beta0_sq;
    return out;
  }
  const auto& p = std::get<PseudoharmonicPotential>(pot);
  if (!(p.a1 > 0.0))
    throw std::invalid_argument("mde_map: pseudoharmonic a1 must be positive");
  if (!(E > p.a3))
    throw std::domain_error("mde_map: pseudoharmonic bound states require E > a3");
  out.map = VariableMap::square;
  const double mu = std::sqrt(2.0 * M * p.a1) / units.hbar;
  const double eps0_sq = 2.0 * M * (E - p.a3) / hbar2;
  out.params.A = 0.5 * N - out.k;
  out.params.B = 0.5 * mu;
  out.params.C = 0.25 * eps0_sq;
  return out;
}

/**
 * Closed-form bound-state energies:
 *
 *   Coulomb          E = -M Z^2 e2^2 / (2 hbar^2 [n + l + (N-1)/2]^2)
 *   Mie              E = c - (M / 2 hbar^2) (b / [n + k + (3-N)/2])^2
 *   harmonic         E = hbar omega (2n + l + N/2)
 *   pseudoharmonic   E = a3 + sqrt(8 hbar^2 a1 / M)
 *                          [n + 1/2 + (1/4) sqrt((N+2l-2)^2 + 8 M a2 / hbar^2)]
 */
inline double energy(const PotentialSpec& pot, const QuantumNumbers& qn,
                     const UnitSystem& units) {
  qn.validate();
  units.validate();
  const double hbar2 = units.hbar * units.hbar;
  const double M = units.mass;

  if (const auto* c = std::get_if<CoulombPotential>(&pot)) {
    if (!(c->Z > 0.0) || !(c->e2 > 0.0))
      throw no_bound_state_error("Coulomb potential needs Z > 0 and e2 > 0");
    const double d = qn.n + qn.l + 0.5 * (qn.N - 1);
    const double ze2 = c->Z * c->e2;
    return -M * ze2 * ze2 / (2.0 * hbar2 * d * d);
  }
  if (const auto* m = std::get_if<MiePotential>(&pot)) {
    const double k = singularity_exponent(pot, qn.l, qn.N, units);
    if (!(m->b < 0.0))
      throw no_bound_state_error(
          "Mie potential admits bound states only for b < 0 (attractive 1/r "
          "tail); got b = " + std::to_string(m->b));
    const double d = qn.n + k + 0.5 * (3 - qn.N);
    return m->c - M / (2.0 * hbar2) * (m->b / d) * (m->b / d);
  }
  if (const auto* h = std::get_if<HarmonicPotential>(&pot)) {
    if (!(h->omega > 0.0))
      throw no_bound_state_error("harmonic potential needs omega > 0");
    return units.hbar * h->omega * (2.0 * qn.n + qn.l + 0.5 * qn.N);
  }
  const auto& p = std::get<PseudoharmonicPotential>(pot);
  if (!(p.a1 > 0.0))
    throw no_bound_state_error("pseudoharmonic potential needs a1 > 0");
  if (p.a2 < 0.0)
    throw no_bound_state_error("pseudoharmonic potential needs a2 >= 0");
  const double root =
      std::sqrt(static_cast<double>(qn.N + 2 * qn.l - 2) * (qn.N + 2 * qn.l - 2) +
                8.0 * M * p.a2 / hbar2);
  return p.a3 + std::sqrt(8.0 * hbar2 * p.a1 / M) * (qn.n + 0.5 + 0.25 * root);
}

enum class DecayKind { exponential, gaussian };

/**
 * Unnormalized radial eigenfunction
 *
 *   R(r) = norm * r^power_exponent * D(r) * 1F1(-n; f11_b; f11_scale * x)
 *
 * with D = e^{-decay r}, x = r (Coulomb, Mie) or D = e^{-decay r^2 / 2},
 * x = r^2 (harmonic, pseudoharmonic).
 */
struct ClosedFormRadial {
  double power_exponent = 0.0;
  DecayKind decay_kind = DecayKind::exponential;
  double decay = 1.0;
  double f11_a = 0.0;
  double f11_b = 1.0;
  double f11_scale = 0.0;
  double normalization = 1.0;
  bool normalized = false;
  QuantumNumbers qn;
  double energy = 0.0;

  double argument(double r) const {
    return decay_kind == DecayKind::exponential ? r : r * r;
  }

  double operator()(double r) const {
    const double damp = decay_kind == DecayKind::exponential
                            ? std::exp(-decay * r)
                            : std::exp(-0.5 * decay * r * r);
    return normalization * std::pow(r, power_exponent) * damp *
           kummer_1f1(f11_a, f11_b, f11_scale * argument(r));
  }

  double derivative(double r) const {
    const auto [u, up, unused] = envelope(r);
    (void)unused;
    const auto [F, Fp, Fpp] = series(r);
    (void)Fpp;
    return normalization * (up * F + u * Fp);
  }

  double second_derivative(double r) const {
    const auto [u, up, upp] = envelope(r);
    const auto [F, Fp, Fpp] = series(r);
    return normalization * (upp * F + 2.0 * up * Fp + u * Fpp);
  }

 private:
  // r^sigma * damp and its first two r-derivatives
  std::array<double, 3> envelope(double r) const {
    const double s = power_exponent;
    if (decay_kind == DecayKind::exponential) {
      const double e = std::exp(-decay * r);
      const double u = std::pow(r, s) * e;
      const double up = std::pow(r, s - 1.0) * e * (s - decay * r);
      const double upp = e * (s * (s - 1.0) * std::pow(r, s - 2.0) -
                              2.0 * decay * s * std::pow(r, s - 1.0) +
                              decay * decay * std::pow(r, s));
      return {u, up, upp};
    }
    const double e = std::exp(-0.5 * decay * r * r);
    const double u = std::pow(r, s) * e;
    const double up = std::pow(r, s - 1.0) * e * (s - decay * r * r);
    const double upp =
        e * (s * (s - 1.0) * std::pow(r, s - 2.0) -
             decay * (2.0 * s + 1.0) * std::pow(r, s) +
             decay * decay * std::pow(r, s + 2.0));
    return {u, up, upp};
  }

  // 1F1 factor and its first two r-derivatives
  std::array<double, 3> series(double r) const {
    const double z = f11_scale * argument(r);
    const double F = kummer_1f1(f11_a, f11_b, z);
    const double Fz = kummer_1f1_deriv(f11_a, f11_b, z);
    const double Fzz = kummer_1f1_deriv2(f11_a, f11_b, z);
    if (decay_kind == DecayKind::exponential) {
      return {F, Fz * f11_scale, Fzz * f11_scale * f11_scale};
    }
    const double dz = 2.0 * f11_scale * r;
    return {F, Fz * dz, Fzz * dz * dz + Fz * 2.0 * f11_scale};
  }
};

/**
 * Closed-form radial eigenfunction with the decay parameter fixed by the
 * quantized energy; normalization left pending.
 */
inline ClosedFormRadial radial_wavefunction(const PotentialSpec& pot,
                                            const QuantumNumbers& qn,
                                            const UnitSystem& units) {
  const double E = energy(pot, qn, units);  // validates the bound state
  const double hbar2 = units.hbar * units.hbar;
  const double M = units.mass;
  ClosedFormRadial R;
  R.qn = qn;
  R.energy = E;
  R.f11_a = -static_cast<double>(qn.n);

  if (const auto* c = std::get_if<CoulombPotential>(&pot)) {
    const double beta =
        M * c->Z * c->e2 / (hbar2 * (qn.n + qn.l + 0.5 * (qn.N - 1)));
    R.power_exponent = qn.l;
    R.decay_kind = DecayKind::exponential;
    R.decay = beta;
    R.f11_b = 2.0 * qn.l + qn.N - 1.0;
    R.f11_scale = 2.0 * beta;
    return R;
  }
  if (const auto* m = std::get_if<MiePotential>(&pot)) {
    const double k = singularity_exponent(pot, qn.l, qn.N, units);
    const double gamma_p = -2.0 * M * m->b / hbar2;
    const double eps = gamma_p / (2.0 * (qn.n + k + 0.5 * (3 - qn.N)));
    R.power_exponent = k - qn.N + 2.0;
    R.decay_kind = DecayKind::exponential;
    R.decay = eps;
    R.f11_b = 2.0 * k - qn.N + 3.0;
    R.f11_scale = 2.0 * eps;
    return R;
  }
  if (const auto* h = std::get_if<HarmonicPotential>(&pot)) {
    const double alpha0 = M * h->omega / units.hbar;
    R.power_exponent = qn.l;
    R.decay_kind = DecayKind::gaussian;
    R.decay = alpha0;
    R.f11_b = qn.l + 0.5 * qn.N;
    R.f11_scale = alpha0;
    return R;
  }
  const auto& p = std::get<PseudoharmonicPotential>(pot);
  const double k = singularity_exponent(pot, qn.l, qn.N, units);
  const double mu = std::sqrt(2.0 * M * p.a1) / units.hbar;
  R.power_exponent = k - qn.N + 2.0;
  R.decay_kind = DecayKind::gaussian;
  R.decay = mu;
  R.f11_b = k - 0.5 * qn.N + 2.0;
  R.f11_scale = mu;
  return R;
}

namespace detail {

inline double radial_tail_cut(const ClosedFormRadial& R, int N) {
  const double L = R.decay_kind == DecayKind::exponential
                       ? 1.0 / R.decay
                       : 1.0 / std::sqrt(R.decay);
  auto integrand = [&](double r) {
    const double v = R(r);
    return v * v * std::pow(r, N - 1);
  };
  double peak = 0.0;
  const double scan_max = L * (20.0 + 10.0 * R.qn.n);
  for (int i = 1; i <= 2000; ++i)
    peak = std::max(peak, integrand(scan_max * i / 2000.0));
  if (!(peak > 0.0) || !std::isfinite(peak))
    throw std::runtime_error("normalize: integrand has no finite peak");
  double cut = scan_max;
  int guard = 0;
  while (integrand(cut) > 1e-14 * peak) {
    cut *= 1.5;
    if (++guard > 200)
      throw std::runtime_error("normalize: weighted norm does not decay");
  }
  return cut;
}

}  // namespace detail

/**
 * Normalization factor C with int_0^inf |C R|^2 r^{N-1} dr = 1, by adaptive
 * quadrature on [0, r_cut] with the cut placed where the integrand has
 * dropped below 1e-14 of its peak.  Applies the factor to R and returns it.
 */
inline double normalize(ClosedFormRadial& R, int N) {
  const double cut = detail::radial_tail_cut(R, N);
  const double I = integrate(
      [&](double r) {
        const double v = R(r);
        return v * v * std::pow(r, N - 1);
      },
      0.0, cut, 1e-12);
  if (!(I > 0.0) || !std::isfinite(I))
    throw std::runtime_error("normalize: divergent or vanishing weighted norm");
  const double C = 1.0 / std::sqrt(I);
  R.normalization *= C;
  R.normalized = true;
  return C;
}

/// Number of strictly positive zeros of R, counted by sign changes on a
/// fine grid; equals the radial quantum number n for bound states.
inline int count_radial_nodes(const ClosedFormRadial& R, int samples = 20000) {
  const double cut = detail::radial_tail_cut(R, R.qn.N);
  double maxabs = 0.0;
  std::vector<double> vals(samples);
  for (int i = 0; i < samples; ++i) {
    vals[i] = R(cut * (i + 1) / samples);
    maxabs = std::max(maxabs, std::abs(vals[i]));
  }
  int nodes = 0;
  double prev = 0.0;
  for (int i = 0; i < samples; ++i) {
    if (std::abs(vals[i]) < 1e-9 * maxabs) continue;
    if (prev != 0.0 && vals[i] * prev < 0.0) ++nodes;
    prev = vals[i];
  }
  return nodes;
}

}  // namespace elzaki
