#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "elzaki/expr.hpp"

namespace elzaki {

/// Raised when a u-domain expression cannot be brought back into the
/// time-domain grammar.
struct not_invertible_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Denominator factor (1 + c1 u + c2 u^2)^q.  Canonical terms carry q > 0;
/// negative integer q (numerator polynomials) are expanded away during
/// canonicalization.
struct TransformFactor {
  double c1 = 0.0;
  double c2 = 0.0;
  double q = 1.0;
};

/**
 * One term of the u-domain grammar:
 *
 *   coeff * u^u_power * prod_i (1 + c1_i u + c2_i u^2)^{-q_i} * exp(-exp_shift / u)
 *
 * Irreducible quadratic factors have negative discriminant; factors with
 * real roots are split into linear ones by canonicalization.
 */
struct TransformTerm {
  double coeff = 1.0;
  double u_power = 0.0;
  std::vector<TransformFactor> den;
  double exp_shift = 0.0;
};

namespace detail {

inline bool factor_same(const TransformFactor& a, const TransformFactor& b) {
  return near(a.c1, b.c1) && near(a.c2, b.c2);
}

inline void sort_factors(std::vector<TransformFactor>& fs) {
  std::sort(fs.begin(), fs.end(), [](const auto& a, const auto& b) {
    const bool qa = a.c2 != 0.0, qb = b.c2 != 0.0;
    if (qa != qb) return !qa;  // linear factors first
    if (a.c1 != b.c1) return a.c1 < b.c1;
    return a.c2 < b.c2;
  });
}

}  // namespace detail

/// Immutable sum of u-domain terms in canonical form.
class TransformExpr {
 public:
  TransformExpr() = default;
  explicit TransformExpr(std::vector<TransformTerm> terms)
      : terms_(std::move(terms)) {
    canonicalize();
  }
  explicit TransformExpr(const TransformTerm& t) : terms_{t} { canonicalize(); }

  static TransformExpr zero() { return TransformExpr{}; }
  static TransformExpr power(double m, double coeff = 1.0) {
    TransformTerm t;
    t.coeff = coeff;
    t.u_power = m;
    return TransformExpr{t};
  }

  const std::vector<TransformTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Largest u0 such that every term is finite on (0, u0); +inf when no
  /// linear factor vanishes at positive u.
  double convergence_radius() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& t : terms_)
      for (const auto& f : t.den)
        if (f.c2 == 0.0 && f.c1 < 0.0) r = std::min(r, -1.0 / f.c1);
    return r;
  }

  double operator()(double u) const {
    if (!(u > 0.0))
      throw std::domain_error("TransformExpr: evaluation requires u > 0");
    double sum = 0.0;
    for (const auto& t : terms_) {
      double v = t.coeff * std::pow(u, t.u_power);
      for (const auto& f : t.den) {
        const double base = 1.0 + f.c1 * u + f.c2 * u * u;
        if (base <= 1e-14)
          throw std::domain_error(
              "TransformExpr: u = " + std::to_string(u) +
              " lies outside the convergence region (radius " +
              std::to_string(convergence_radius()) + ")");
        v *= std::pow(base, -f.q);
      }
      if (t.exp_shift != 0.0) v *= std::exp(-t.exp_shift / u);
      sum += v;
    }
    return sum;
  }

  /// Symbolic d/du; the grammar is closed under differentiation.
  TransformExpr derivative() const {
    std::vector<TransformTerm> out;
    for (const auto& t : terms_) {
      if (t.u_power != 0.0) {
        TransformTerm n = t;
        n.coeff *= t.u_power;
        n.u_power -= 1.0;
        out.push_back(n);
      }
      for (size_t i = 0; i < t.den.size(); ++i) {
        const auto& f = t.den[i];
        // d/du (1+c1 u+c2 u^2)^{-q} = -q (c1 + 2 c2 u) (...)^{-q-1}
        if (f.c1 != 0.0) {
          TransformTerm n = t;
          n.coeff *= -f.q * f.c1;
          n.den[i].q += 1.0;
          out.push_back(n);
        }
        if (f.c2 != 0.0) {
          TransformTerm n = t;
          n.coeff *= -f.q * 2.0 * f.c2;
          n.u_power += 1.0;
          n.den[i].q += 1.0;
          out.push_back(n);
        }
      }
      if (t.exp_shift != 0.0) {
        TransformTerm n = t;
        n.coeff *= t.exp_shift;
        n.u_power -= 2.0;
        out.push_back(n);
      }
    }
    return TransformExpr{std::move(out)};
  }

  TransformExpr operator+(const TransformExpr& o) const {
    std::vector<TransformTerm> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return TransformExpr{std::move(all)};
  }
  TransformExpr operator-(const TransformExpr& o) const {
    return *this + o * (-1.0);
  }
  TransformExpr operator*(double c) const {
    std::vector<TransformTerm> all = terms_;
    for (auto& t : all) t.coeff *= c;
    return TransformExpr{std::move(all)};
  }
  TransformExpr operator*(const TransformExpr& o) const {
    std::vector<TransformTerm> out;
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) {
        TransformTerm r = a;
        r.coeff *= b.coeff;
        r.u_power += b.u_power;
        r.den.insert(r.den.end(), b.den.begin(), b.den.end());
        r.exp_shift += b.exp_shift;
        out.push_back(r);
      }
    return TransformExpr{std::move(out)};
  }

  /// Multiplies by u^k.
  TransformExpr shifted_power(double k) const {
    std::vector<TransformTerm> all = terms_;
    for (auto& t : all) t.u_power += k;
    return TransformExpr{std::move(all)};
  }

  bool same_as(const TransformExpr& o, double tol = 1e-9) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i) {
      const auto& a = terms_[i];
      const auto& b = o.terms_[i];
      auto ok = [&](double x, double y) {
        return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
      };
      if (!ok(a.coeff, b.coeff) || !ok(a.u_power, b.u_power) ||
          !ok(a.exp_shift, b.exp_shift) || a.den.size() != b.den.size())
        return false;
      for (size_t j = 0; j < a.den.size(); ++j)
        if (!ok(a.den[j].c1, b.den[j].c1) || !ok(a.den[j].c2, b.den[j].c2) ||
            !ok(a.den[j].q, b.den[j].q))
          return false;
    }
    return true;
  }

  std::string to_prefix() const {
    std::string s = "(sum";
    for (const auto& t : terms_) {
      s += " (term " + detail::fmt_num(t.coeff);
      if (t.u_power != 0.0) s += " (upow " + detail::fmt_num(t.u_power) + ")";
      for (const auto& f : t.den)
        s += " (den " + detail::fmt_num(f.c1) + " " + detail::fmt_num(f.c2) +
             " " + detail::fmt_num(f.q) + ")";
      if (t.exp_shift != 0.0)
        s += " (expshift " + detail::fmt_num(t.exp_shift) + ")";
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
      if (i == 0) {
        if (t.coeff < 0) s += "-";
      } else {
        s += t.coeff < 0 ? " - " : " + ";
      }
      s += pretty_term(t);
    }
    return s;
  }

 private:
  std::vector<TransformTerm> terms_;

  static std::string poly_str(const TransformFactor& f) {
    std::string s = "1";
    if (f.c1 != 0.0) {
      s += f.c1 < 0 ? "-" : "+";
      if (!detail::near(std::abs(f.c1), 1.0))
        s += detail::fmt_num(std::abs(f.c1)) + "*";
      s += "u";
    }
    if (f.c2 != 0.0) {
      s += f.c2 < 0 ? "-" : "+";
      if (!detail::near(std::abs(f.c2), 1.0))
        s += detail::fmt_num(std::abs(f.c2)) + "*";
      s += "u^2";
    }
    return s;
  }

  static std::string pretty_term(const TransformTerm& t) {
    const double c = std::abs(t.coeff);
    std::string num;
    if (!detail::near(c, 1.0) || (t.u_power == 0.0 && t.den.empty() && t.exp_shift == 0.0))
      num = detail::fmt_num(c);
    if (t.u_power != 0.0) {
      if (!num.empty()) num += "*";
      num += t.u_power == 1.0 ? "u" : "u^" + detail::fmt_num(t.u_power);
    }
    if (t.exp_shift != 0.0) {
      if (!num.empty()) num += "*";
      num += "exp(-" + detail::fmt_num(t.exp_shift) + "/u)";
    }
    if (num.empty()) num = "1";
    if (t.den.empty()) return num;
    std::string den;
    for (size_t i = 0; i < t.den.size(); ++i) {
      if (i) den += "*";
      const auto& f = t.den[i];
      if (detail::near(f.q, 0.5)) {
        den += "sqrt(" + poly_str(f) + ")";
      } else if (detail::near(f.q, 1.0)) {
        den += "(" + poly_str(f) + ")";
      } else {
        den += "(" + poly_str(f) + ")^" + detail::fmt_num(f.q);
      }
    }
    if (t.den.size() > 1) den = "(" + den + ")";
    return num + "/" + den;
  }

  // Expands (1 + c1 u + c2 u^2)^n, n >= 1, into monomial coefficients.
  static std::vector<double> expand_poly_power(double c1, double c2, int n) {
    std::vector<double> poly{1.0};
    for (int k = 0; k < n; ++k) {
      std::vector<double> next(poly.size() + 2, 0.0);
      for (size_t j = 0; j < poly.size(); ++j) {
        next[j] += poly[j];
        next[j + 1] += poly[j] * c1;
        next[j + 2] += poly[j] * c2;
      }
      while (!next.empty() && next.back() == 0.0) next.pop_back();
      poly = std::move(next);
    }
    return poly;
  }

  void canonicalize() {
    std::vector<TransformTerm> queue = std::move(terms_);
    std::vector<TransformTerm> done;

    while (!queue.empty()) {
      TransformTerm t = std::move(queue.back());
      queue.pop_back();
      if (t.coeff == 0.0) continue;
      if (t.exp_shift < -1e-14)
        throw std::domain_error("TransformExpr: negative exp(-a/u) shift");

      // split factors with real roots into linear ones
      std::vector<TransformFactor> split;
      for (const auto& f : t.den) {
        if (std::abs(f.q) < 1e-12) continue;
        if (f.c1 == 0.0 && f.c2 == 0.0) continue;
        if (f.c2 == 0.0) {
          split.push_back(f);
          continue;
        }
        const double disc = f.c1 * f.c1 - 4.0 * f.c2;
        const double scale = std::max(f.c1 * f.c1, std::abs(4.0 * f.c2));
        if (disc < -1e-12 * scale) {
          split.push_back(f);  // irreducible
        } else if (disc <= 1e-12 * scale) {
          split.push_back({f.c1 / 2.0, 0.0, 2.0 * f.q});  // double root
        } else {
          const double s = std::sqrt(disc);
          // roots of r^2 + c1 r + c2 = 0, combined stably
          const double r1 = f.c1 >= 0.0 ? (-f.c1 - s) / 2.0 : (-f.c1 + s) / 2.0;
          const double r2 = f.c2 / r1;
          split.push_back({-r1, 0.0, f.q});
          split.push_back({-r2, 0.0, f.q});
        }
      }

      // merge identical factors (numerator/denominator powers cancel here)
      detail::sort_factors(split);
      std::vector<TransformFactor> merged;
      for (const auto& f : split) {
        if (!merged.empty() && detail::factor_same(merged.back(), f))
          merged.back().q += f.q;
        else
          merged.push_back(f);
      }
      std::erase_if(merged, [](const TransformFactor& f) {
        return std::abs(f.q) < 1e-12;
      });

      // expand any numerator (negative-power) factor back into monomials
      auto neg = std::find_if(merged.begin(), merged.end(),
                              [](const TransformFactor& f) { return f.q < 0.0; });
      if (neg != merged.end()) {
        const double qr = std::round(neg->q);
        if (std::abs(neg->q - qr) > 1e-9)
          throw not_invertible_error(
              "TransformExpr: non-integer numerator factor power");
        const auto poly = expand_poly_power(neg->c1, neg->c2, static_cast<int>(-qr));
        TransformFactor removed = *neg;
        merged.erase(neg);
        for (size_t j = 0; j < poly.size(); ++j) {
          if (poly[j] == 0.0) continue;
          TransformTerm n = t;
          n.coeff *= poly[j];
          n.u_power += static_cast<double>(j);
          n.den = merged;
          queue.push_back(std::move(n));
        }
        continue;
      }

      t.den = std::move(merged);
      done.push_back(std::move(t));
    }

    std::sort(done.begin(), done.end(), [](const TransformTerm& a,
                                           const TransformTerm& b) {
      if (a.u_power != b.u_power) return a.u_power < b.u_power;
      if (a.exp_shift != b.exp_shift) return a.exp_shift < b.exp_shift;
      if (a.den.size() != b.den.size()) return a.den.size() < b.den.size();
      for (size_t i = 0; i < a.den.size(); ++i) {
        if (a.den[i].c1 != b.den[i].c1) return a.den[i].c1 < b.den[i].c1;
        if (a.den[i].c2 != b.den[i].c2) return a.den[i].c2 < b.den[i].c2;
        if (a.den[i].q != b.den[i].q) return a.den[i].q < b.den[i].q;
      }
      return false;
    });

    std::vector<TransformTerm> out;
    for (const auto& t : done) {
      if (!out.empty() && mergeable(out.back(), t)) {
        out.back().coeff += t.coeff;
        continue;
      }
      out.push_back(t);
    }
    double scale = 0.0;
    for (const auto& t : out) scale = std::max(scale, std::abs(t.coeff));
    terms_.clear();
    for (const auto& t : out)
      if (std::abs(t.coeff) > 1e-12 * scale && t.coeff != 0.0)
        terms_.push_back(t);
  }

  static bool mergeable(const TransformTerm& a, const TransformTerm& b) {
    if (!detail::near(a.u_power, b.u_power) ||
        !detail::near(a.exp_shift, b.exp_shift) || a.den.size() != b.den.size())
      return false;
    for (size_t i = 0; i < a.den.size(); ++i)
      if (!detail::factor_same(a.den[i], b.den[i]) ||
          !detail::near(a.den[i].q, b.den[i].q))
        return false;
    return true;
  }
};

inline TransformExpr operator*(double c, const TransformExpr& e) { return e * c; }

}  // namespace elzaki
