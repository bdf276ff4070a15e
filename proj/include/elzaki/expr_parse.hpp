#pragma once

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

#include "elzaki/expr.hpp"

namespace elzaki {

struct parse_error : std::runtime_error {
  size_t position;
  parse_error(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        position(pos) {}
};

namespace detail {

/**
 * Recursive-descent parser for the CLI expression mini-syntax:
 *
 *   expr    := term (('+' | '-') term)*
 *   term    := ['-'] factor ('*' factor)*
 *   factor  := number | 't' ['^' number] | fn '(' arg ')'
 *   fn      := exp | sin | cos | sinh | cosh | H | delta
 *   arg     := [number ['*']] 't'          (exp, sin, cos, sinh, cosh)
 *            | 't' ['-' number]            (H, delta)
 */
class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view src_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg, pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t'))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  double parse_number() {
    skip_ws();
    double value = 0.0;
    const char* begin = src_.data() + pos_;
    const char* end = src_.data() + src_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin) fail("expected a number");
    pos_ += static_cast<size_t>(ptr - begin);
    return value;
  }

  bool number_ahead() {
    const char c = peek();
    return (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+';
  }

  std::string parse_name() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected a function name or 't'");
    return std::string(src_.substr(start, pos_ - start));
  }

  Expr parse_sum() {
    Expr e = parse_term();
    while (true) {
      if (eat('+'))
        e = e + parse_term();
      else if (eat('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    double sign = 1.0;
    while (true) {
      if (eat('-'))
        sign = -sign;
      else if (!eat('+'))
        break;
    }
    Expr e = parse_factor() * sign;
    while (eat('*')) e = e * parse_factor();
    return e;
  }

  Expr parse_factor() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if ((c >= '0' && c <= '9') || c == '.') return Expr::constant(parse_number());
    if (c == '(') fail("parentheses are only used for function arguments");

    const size_t name_pos = pos_;
    const std::string name = parse_name();
    if (name == "t") {
      if (eat('^')) {
        const double p = parse_number();
        if (p <= -1.0) {
          pos_ = name_pos;
          fail("power of t must be > -1");
        }
        return Expr::monomial(p);
      }
      return Expr::monomial(1.0);
    }

    if (!eat('(')) fail("expected '(' after '" + name + "'");
    Expr result;
    if (name == "H" || name == "delta") {
      if (parse_name() != "t") fail("expected 't' in shift argument");
      double a = 0.0;
      if (eat('-')) a = parse_number();
      result = name == "H" ? Expr::heaviside(a) : Expr::dirac(a);
    } else {
      double coeff = 1.0;
      if (number_ahead()) {
        coeff = parse_number();
        eat('*');
      }
      if (parse_name() != "t") fail("expected 't' in argument of " + name);
      if (name == "exp")
        result = Expr::exponential(coeff);
      else if (name == "sin")
        result = Expr::sine(coeff);
      else if (name == "cos")
        result = Expr::cosine(coeff);
      else if (name == "sinh")
        result = Expr::sinh(coeff);
      else if (name == "cosh")
        result = Expr::cosh(coeff);
      else
        fail("unknown function '" + name + "'");
    }
    if (!eat(')')) fail("expected ')'");
    return result;
  }
};

}  // namespace detail

/// Parses the transform-command mini-syntax into a canonical expression.
inline Expr parse_expr(std::string_view text) {
  return detail::ExprParser(text).parse();
}

}  // namespace elzaki
