#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "elzaki/special_functions.hpp"

namespace elzaki {

/// Raised when an expression (or an operation result) falls outside the
/// closed term grammar.
struct unsupported_term_error : std::domain_error {
  using std::domain_error::domain_error;
};

enum class Osc { none, sin, cos, sinh, cosh, bessel };
enum class Shift { none, heaviside, delta };

/// Optional confluent-hypergeometric factor 1F1(a, b, scale * t).
/// Terminating instances (a a non-positive integer) are expanded into
/// plain polynomial terms during canonicalization.
struct KummerPart {
  double a = 0.0;
  double b = 1.0;
  double scale = 0.0;
};

/**
 * One term of the time-domain grammar:
 *
 *   coeff * tau^power * exp(exp_rate * tau) * osc(osc_freq * tau)
 *         * [1F1(a, b, scale * tau)] * [H(t - shift_at) | delta(t - shift_at)]
 *
 * where tau = t - shift_at for shifted terms and tau = t otherwise.
 * power > -1 keeps every term transformable.
 */
struct ExprTerm {
  double coeff = 1.0;
  double power = 0.0;
  double exp_rate = 0.0;
  Osc osc = Osc::none;
  double osc_freq = 0.0;
  Shift shift = Shift::none;
  double shift_at = 0.0;
  std::optional<KummerPart> kummer;
};

namespace detail {

inline bool near(double x, double y) {
  return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline std::array<double, 9> term_key(const ExprTerm& t) {
  const bool k = t.kummer.has_value();
  return {static_cast<double>(t.shift), t.shift_at,
          t.power,  t.exp_rate,
          static_cast<double>(t.osc), t.osc_freq,
          k ? t.kummer->a : 0.0, k ? t.kummer->b : 0.0,
          k ? t.kummer->scale : 0.0};
}

inline double binomial_real(double alpha, int j) {
  // (alpha choose j) for real alpha
  double v = 1.0;
  for (int i = 0; i < j; ++i) v *= (alpha - i) / (i + 1);
  return v;
}

}  // namespace detail

/**
 * Immutable sum of grammar terms in canonical form: hyperbolic oscillators
 * are rewritten as exponential pairs, terminating 1F1 factors are expanded,
 * delta terms are sifted to pure impulses, terms are sorted by structural
 * key and like terms merged.
 */
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::vector<ExprTerm> terms) : terms_(std::move(terms)) {
    canonicalize();
  }
  explicit Expr(const ExprTerm& term) : terms_{term} { canonicalize(); }

  static Expr zero() { return Expr{}; }
  static Expr constant(double c) {
    ExprTerm t;
    t.coeff = c;
    return Expr{t};
  }
  static Expr monomial(double power, double coeff = 1.0) {
    ExprTerm t;
    t.coeff = coeff;
    t.power = power;
    return Expr{t};
  }
  /// Table row t^{a-1} / Gamma(a), a > 0.
  static Expr power_over_gamma(double a) {
    if (a <= 0.0) throw std::domain_error("power_over_gamma: need a > 0");
    return monomial(a - 1.0, 1.0 / gamma(a));
  }
  static Expr exponential(double rate, double coeff = 1.0) {
    ExprTerm t;
    t.coeff = coeff;
    t.exp_rate = rate;
    return Expr{t};
  }
  static Expr sine(double freq, double coeff = 1.0) {
    ExprTerm t;
    t.coeff = coeff;
    t.osc = Osc::sin;
    t.osc_freq = freq;
    return Expr{t};
  }
  static Expr cosine(double freq, double coeff = 1.0) {
    ExprTerm t;
    t.coeff = coeff;
    t.osc = Osc::cos;
    t.osc_freq = freq;
    return Expr{t};
  }
  static Expr sinh(double freq, double coeff = 1.0) {
    ExprTerm t;
    t.coeff = coeff;
    t.osc = Osc::sinh;
    t.osc_freq = freq;
    return Expr{t};
  }
  static Expr cosh(double freq, double coeff = 1.0) {
    ExprTerm t;
    t.coeff = coeff;
    t.osc = Osc::cosh;
    t.osc_freq = freq;
    return Expr{t};
  }
  static Expr heaviside(double at) {
    ExprTerm t;
    t.shift = Shift::heaviside;
    t.shift_at = at;
    return Expr{t};
  }
  static Expr dirac(double at) {
    ExprTerm t;
    t.shift = Shift::delta;
    t.shift_at = at;
    return Expr{t};
  }
  /// J0(freq * t).  A standalone table atom: it does not combine with
  /// powers, exponentials or shifts.
  static Expr bessel_j0_atom(double freq, double coeff = 1.0) {
    ExprTerm t;
    t.coeff = coeff;
    t.osc = Osc::bessel;
    t.osc_freq = freq;
    return Expr{t};
  }

  const std::vector<ExprTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool has_delta() const {
    for (const auto& t : terms_)
      if (t.shift == Shift::delta) return true;
    return false;
  }

  /// Exponential growth rate of the dominant term; the forward transform
  /// converges for u < 1 / rate when rate > 0.
  double growth_rate() const {
    double rate = 0.0;
    for (const auto& t : terms_) rate = std::max(rate, t.exp_rate);
    return rate;
  }

  double operator()(double t) const {
    double sum = 0.0;
    for (const auto& term : terms_) sum += eval_term(term, t);
    return sum;
  }

  Expr operator+(const Expr& other) const {
    std::vector<ExprTerm> all = terms_;
    all.insert(all.end(), other.terms_.begin(), other.terms_.end());
    return Expr{std::move(all)};
  }
  Expr operator-(const Expr& other) const { return *this + other * (-1.0); }
  Expr operator*(double c) const {
    std::vector<ExprTerm> all = terms_;
    for (auto& t : all) t.coeff *= c;
    return Expr{std::move(all)};
  }
  Expr operator*(const Expr& other) const {
    std::vector<ExprTerm> out;
    for (const auto& a : terms_)
      for (const auto& b : other.terms_) multiply_terms(a, b, out);
    return Expr{std::move(out)};
  }

  bool same_as(const Expr& other, double tol = 1e-9) const {
    if (terms_.size() != other.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i) {
      const auto ka = detail::term_key(terms_[i]);
      const auto kb = detail::term_key(other.terms_[i]);
      for (size_t j = 0; j < ka.size(); ++j)
        if (std::abs(ka[j] - kb[j]) > tol * std::max({1.0, std::abs(ka[j])}))
          return false;
      if (std::abs(terms_[i].coeff - other.terms_[i].coeff) >
          tol * std::max({1.0, std::abs(terms_[i].coeff)}))
        return false;
    }
    return true;
  }

  std::string to_prefix() const {
    std::string s = "(sum";
    for (const auto& t : terms_) {
      s += " (term " + detail::fmt_num(t.coeff);
      if (t.power != 0.0) s += " (pow " + detail::fmt_num(t.power) + ")";
      if (t.exp_rate != 0.0) s += " (exp " + detail::fmt_num(t.exp_rate) + ")";
      if (t.osc == Osc::sin) s += " (sin " + detail::fmt_num(t.osc_freq) + ")";
      if (t.osc == Osc::cos) s += " (cos " + detail::fmt_num(t.osc_freq) + ")";
      if (t.osc == Osc::bessel) s += " (j0 " + detail::fmt_num(t.osc_freq) + ")";
      if (t.kummer)
        s += " (1f1 " + detail::fmt_num(t.kummer->a) + " " +
             detail::fmt_num(t.kummer->b) + " " + detail::fmt_num(t.kummer->scale) +
             ")";
      if (t.shift == Shift::heaviside)
        s += " (H " + detail::fmt_num(t.shift_at) + ")";
      if (t.shift == Shift::delta)
        s += " (delta " + detail::fmt_num(t.shift_at) + ")";
      s += ")";
    }
    s += ")";
    return s;
  }

  std::string pretty() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      const double c = t.coeff;
      if (i == 0) {
        if (c < 0) s += "-";
      } else {
        s += c < 0 ? " - " : " + ";
      }
      s += pretty_term(t, std::abs(c));
    }
    return s;
  }

 private:
  std::vector<ExprTerm> terms_;

  static std::string var_of(const ExprTerm& t) {
    if (t.shift == Shift::none || t.shift_at == 0.0) return "t";
    return "(t-" + detail::fmt_num(t.shift_at) + ")";
  }

  static std::string pretty_term(const ExprTerm& t, double abs_coeff) {
    std::vector<std::string> parts;
    const std::string v = var_of(t);
    if (!detail::near(abs_coeff, 1.0)) parts.push_back(detail::fmt_num(abs_coeff));
    if (t.power != 0.0)
      parts.push_back(t.power == 1.0 ? v : v + "^" + detail::fmt_num(t.power));
    if (t.exp_rate != 0.0)
      parts.push_back("exp(" + detail::fmt_num(t.exp_rate) + "*" + v + ")");
    if (t.osc == Osc::sin || t.osc == Osc::cos)
      parts.push_back(std::string(t.osc == Osc::sin ? "sin(" : "cos(") +
                      detail::fmt_num(t.osc_freq) + "*" + v + ")");
    if (t.osc == Osc::bessel)
      parts.push_back("J0(" + detail::fmt_num(t.osc_freq) + "*" + v + ")");
    if (t.kummer)
      parts.push_back("1F1(" + detail::fmt_num(t.kummer->a) + "; " +
                      detail::fmt_num(t.kummer->b) + "; " +
                      detail::fmt_num(t.kummer->scale) + "*" + v + ")");
    if (t.shift == Shift::heaviside)
      parts.push_back("H(t-" + detail::fmt_num(t.shift_at) + ")");
    if (t.shift == Shift::delta)
      parts.push_back(t.shift_at == 0.0
                          ? std::string("delta(t)")
                          : "delta(t-" + detail::fmt_num(t.shift_at) + ")");
    if (parts.empty()) return detail::fmt_num(abs_coeff);
    std::string s = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) s += "*" + parts[i];
    return s;
  }

  static double eval_term(const ExprTerm& term, double t) {
    if (term.shift == Shift::delta)
      throw std::domain_error("Expr: delta distribution has no pointwise value");
    double tau = t;
    if (term.shift == Shift::heaviside) {
      if (t < term.shift_at) return 0.0;
      tau = t - term.shift_at;
    }
    double v = term.coeff;
    if (term.power != 0.0) v *= std::pow(tau, term.power);
    if (term.exp_rate != 0.0) v *= std::exp(term.exp_rate * tau);
    switch (term.osc) {
      case Osc::sin: v *= std::sin(term.osc_freq * tau); break;
      case Osc::cos: v *= std::cos(term.osc_freq * tau); break;
      case Osc::sinh: v *= std::sinh(term.osc_freq * tau); break;
      case Osc::cosh: v *= std::cosh(term.osc_freq * tau); break;
      case Osc::bessel: v *= bessel_j0(term.osc_freq * tau); break;
      default: break;
    }
    if (term.kummer)
      v *= kummer_1f1(term.kummer->a, term.kummer->b, term.kummer->scale * tau);
    return v;
  }

  // Rewrites `term` onto the shifted basis tau' = t - to (to >= current
  // shift point), appending the expansion to `out`.  Non-integer powers
  // cannot be rebased.
  static void rebase_term(const ExprTerm& term, double to,
                          std::vector<ExprTerm>& out) {
    const double from = term.shift == Shift::none ? 0.0 : term.shift_at;
    const double d = to - from;  // tau = tau' + d
    if (d == 0.0) {
      out.push_back(term);
      return;
    }
    const double pr = std::round(term.power);
    if (std::abs(term.power - pr) > 1e-9 || pr < 0)
      throw unsupported_term_error(
          "Expr: cannot rebase a fractional power onto a shifted basis");
    const int p = static_cast<int>(pr);
    if (term.kummer)
      throw unsupported_term_error("Expr: cannot rebase a 1F1 factor");

    // tau^p = sum_j C(p,j) d^{p-j} tau'^j ; exp picks up exp(rate*d);
    // sin/cos split by the angle-addition identities.
    const double efac = std::exp(term.exp_rate * d);
    for (int j = 0; j <= p; ++j) {
      const double base =
          detail::binomial_real(p, j) * std::pow(d, p - j) * efac * term.coeff;
      ExprTerm n;
      n.power = j;
      n.exp_rate = term.exp_rate;
      n.shift = term.shift;
      n.shift_at = to;
      if (term.osc == Osc::none) {
        n.coeff = base;
        out.push_back(n);
      } else {
        const double phi = term.osc_freq * d;
        ExprTerm m = n;
        if (term.osc == Osc::sin) {
          n.osc = Osc::sin; n.osc_freq = term.osc_freq; n.coeff = base * std::cos(phi);
          m.osc = Osc::cos; m.osc_freq = term.osc_freq; m.coeff = base * std::sin(phi);
        } else {
          n.osc = Osc::cos; n.osc_freq = term.osc_freq; n.coeff = base * std::cos(phi);
          m.osc = Osc::sin; m.osc_freq = term.osc_freq; m.coeff = -base * std::sin(phi);
        }
        out.push_back(n);
        out.push_back(m);
      }
    }
  }

  static void multiply_terms(const ExprTerm& a, const ExprTerm& b,
                             std::vector<ExprTerm>& out) {
    if (a.shift == Shift::delta && b.shift == Shift::delta)
      throw unsupported_term_error("Expr: product of two delta distributions");
    if (a.shift == Shift::delta || b.shift == Shift::delta) {
      const ExprTerm& d = a.shift == Shift::delta ? a : b;
      const ExprTerm& f = a.shift == Shift::delta ? b : a;
      // sifting: f(t) delta(t - s) = f(s) delta(t - s)
      ExprTerm r = d;
      r.coeff *= eval_term(f, d.shift_at);
      out.push_back(r);
      return;
    }

    const double sa = a.shift == Shift::heaviside ? a.shift_at : 0.0;
    const double sb = b.shift == Shift::heaviside ? b.shift_at : 0.0;
    const double s = std::max(sa, sb);
    std::vector<ExprTerm> ra, rb;
    rebase_term(a, s, ra);
    rebase_term(b, s, rb);
    const bool shifted = a.shift == Shift::heaviside || b.shift == Shift::heaviside;

    for (const auto& ta : ra)
      for (const auto& tb : rb) {
        if (ta.kummer && tb.kummer)
          throw unsupported_term_error("Expr: product of two 1F1 factors");
        ExprTerm r;
        r.coeff = ta.coeff * tb.coeff;
        r.power = ta.power + tb.power;
        r.exp_rate = ta.exp_rate + tb.exp_rate;
        r.kummer = ta.kummer ? ta.kummer : tb.kummer;
        r.shift = shifted ? Shift::heaviside : Shift::none;
        r.shift_at = shifted ? s : 0.0;
        if (ta.osc == Osc::none || tb.osc == Osc::none) {
          const ExprTerm& o = ta.osc == Osc::none ? tb : ta;
          r.osc = o.osc;
          r.osc_freq = o.osc_freq;
          if (r.kummer && r.osc != Osc::none)
            throw unsupported_term_error("Expr: 1F1 factor with oscillator");
          out.push_back(r);
        } else {
          if (r.kummer)
            throw unsupported_term_error("Expr: 1F1 factor with oscillator");
          if (ta.osc == Osc::bessel || tb.osc == Osc::bessel)
            throw unsupported_term_error("Expr: J0 only appears as a bare atom");
          // product-to-sum for sin/cos pairs
          const double p = ta.osc_freq, q = tb.osc_freq;
          auto push = [&](Osc osc, double freq, double factor) {
            ExprTerm m = r;
            m.coeff *= factor;
            m.osc = osc;
            m.osc_freq = freq;
            out.push_back(m);
          };
          if (ta.osc == Osc::sin && tb.osc == Osc::sin) {
            push(Osc::cos, p - q, 0.5);
            push(Osc::cos, p + q, -0.5);
          } else if (ta.osc == Osc::cos && tb.osc == Osc::cos) {
            push(Osc::cos, p - q, 0.5);
            push(Osc::cos, p + q, 0.5);
          } else {
            const double sf = ta.osc == Osc::sin ? p : q;  // sin frequency
            const double cf = ta.osc == Osc::sin ? q : p;
            push(Osc::sin, sf + cf, 0.5);
            push(Osc::sin, sf - cf, 0.5);
          }
        }
      }
  }

  void canonicalize() {
    std::vector<ExprTerm> work;
    work.reserve(terms_.size());
    for (auto& t : terms_) normalize_term(t, work);

    std::sort(work.begin(), work.end(), [](const ExprTerm& x, const ExprTerm& y) {
      return detail::term_key(x) < detail::term_key(y);
    });

    std::vector<ExprTerm> merged;
    for (const auto& t : work) {
      if (!merged.empty()) {
        const auto ka = detail::term_key(merged.back());
        const auto kb = detail::term_key(t);
        bool same = true;
        for (size_t j = 0; j < ka.size() && same; ++j)
          same = detail::near(ka[j], kb[j]);
        if (same) {
          merged.back().coeff += t.coeff;
          continue;
        }
      }
      merged.push_back(t);
    }

    double scale = 0.0;
    for (const auto& t : merged) scale = std::max(scale, std::abs(t.coeff));
    terms_.clear();
    for (const auto& t : merged)
      if (std::abs(t.coeff) > 1e-12 * scale && t.coeff != 0.0) terms_.push_back(t);
  }

  static void normalize_term(ExprTerm t, std::vector<ExprTerm>& out) {
    if (t.coeff == 0.0) return;
    if (t.power <= -1.0 + 1e-14)
      throw std::domain_error("Expr: power must be > -1 for transformability");

    if (t.kummer) {
      if (t.kummer->scale == 0.0 || t.kummer->a == 0.0) {
        t.kummer.reset();
      } else if (is_nonpositive_integer(t.kummer->a)) {
        // terminating polynomial: expand into plain terms
        const int n = static_cast<int>(-std::round(t.kummer->a));
        const KummerPart k = *t.kummer;
        t.kummer.reset();
        double c = 1.0;
        for (int j = 0; j <= n; ++j) {
          ExprTerm e = t;
          e.coeff *= c;
          e.power += j;
          normalize_term(e, out);
          if (std::abs(k.b + j) < 1e-14)
            throw std::domain_error("Expr: 1F1 pole of b before termination");
          c *= (std::round(k.a) + j) / (k.b + j) * k.scale / (j + 1);
        }
        return;
      } else if (t.osc != Osc::none) {
        throw unsupported_term_error("Expr: 1F1 factor with oscillator");
      }
    }

    if (t.osc == Osc::bessel) {
      if (t.power != 0.0 || t.exp_rate != 0.0 || t.kummer ||
          t.shift != Shift::none)
        throw unsupported_term_error("Expr: J0 only appears as a bare atom");
      if (t.osc_freq < 0.0) t.osc_freq = -t.osc_freq;  // J0 is even
      if (t.osc_freq == 0.0) t.osc = Osc::none;
      out.push_back(t);
      return;
    }

    if (t.osc != Osc::none && t.osc_freq == 0.0) {
      if (t.osc == Osc::sin || t.osc == Osc::sinh) return;  // identically zero
      t.osc = Osc::none;
    }
    if (t.osc != Osc::none && t.osc_freq < 0.0) {
      if (t.osc == Osc::sin || t.osc == Osc::sinh) t.coeff = -t.coeff;
      t.osc_freq = -t.osc_freq;
    }
    // hyperbolic oscillators canonicalize to exponential pairs
    if (t.osc == Osc::sinh || t.osc == Osc::cosh) {
      const double sgn = t.osc == Osc::sinh ? -1.0 : 1.0;
      ExprTerm up = t, dn = t;
      up.osc = dn.osc = Osc::none;
      up.osc_freq = dn.osc_freq = 0.0;
      up.coeff *= 0.5;
      up.exp_rate += t.osc_freq;
      dn.coeff *= 0.5 * sgn;
      dn.exp_rate -= t.osc_freq;
      normalize_term(up, out);
      normalize_term(dn, out);
      return;
    }

    if (t.shift == Shift::delta) {
      if (t.shift_at < 0.0) return;  // impulse outside the domain
      // sift the structural factors at tau = 0
      if (t.power > 0.0) return;
      if (t.osc == Osc::sin) return;
      t.power = 0.0;
      t.exp_rate = 0.0;
      t.osc = Osc::none;
      t.osc_freq = 0.0;
      t.kummer.reset();
      out.push_back(t);
      return;
    }

    if (t.shift == Shift::heaviside) {
      if (t.shift_at == 0.0) {
        t.shift = Shift::none;
      } else if (t.shift_at < 0.0) {
        // H(t-a) with a < 0 is identically 1 on t >= 0: rebase to t
        ExprTerm plain = t;
        plain.shift = Shift::none;
        plain.shift_at = 0.0;
        // rebase from basis (t - a) to basis t: tau = t + |a|
        ExprTerm basis = plain;
        basis.shift = Shift::heaviside;
        basis.shift_at = t.shift_at;
        std::vector<ExprTerm> tmp;
        rebase_term(basis, 0.0, tmp);
        for (auto& e : tmp) {
          e.shift = Shift::none;
          e.shift_at = 0.0;
          normalize_term(e, out);
        }
        return;
      }
    }

    out.push_back(t);
  }
};

inline Expr operator*(double c, const Expr& e) { return e * c; }

}  // namespace elzaki
