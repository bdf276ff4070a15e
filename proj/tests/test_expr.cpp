#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "elzaki/expr.hpp"
#include "elzaki/expr_parse.hpp"

using namespace elzaki;

TEST_CASE("hyperbolic oscillators canonicalize to exponential pairs") {
  const Expr s = Expr::sinh(2.0);
  REQUIRE(s.terms().size() == 2);
  for (double t : {0.0, 0.3, 1.7})
    CHECK(s(t) == Catch::Approx(std::sinh(2.0 * t)).margin(1e-14));
  const Expr c = Expr::cosh(1.5, 3.0);
  for (double t : {0.1, 2.2})
    CHECK(c(t) == Catch::Approx(3.0 * std::cosh(1.5 * t)).epsilon(1e-14));
}

TEST_CASE("like terms merge") {
  const Expr e = Expr::monomial(1.0) + Expr::monomial(1.0);
  REQUIRE(e.terms().size() == 1);
  CHECK(e.terms()[0].coeff == Catch::Approx(2.0));
  const Expr z = Expr::sine(2.0) - Expr::sine(2.0);
  CHECK(z.is_zero());
}

TEST_CASE("negative frequencies normalize") {
  const Expr s = Expr::sine(-2.0);
  CHECK(s(0.7) == Catch::Approx(std::sin(-2.0 * 0.7)).epsilon(1e-14));
  CHECK(s.terms()[0].osc_freq == 2.0);
  CHECK(s.terms()[0].coeff == -1.0);
  const Expr c = Expr::cosine(-3.0);
  CHECK(c.terms()[0].osc_freq == 3.0);
  CHECK(c.terms()[0].coeff == 1.0);
}

TEST_CASE("delta terms sift structural factors") {
  const Expr e = Expr::monomial(2.0) * Expr::dirac(2.0);
  REQUIRE(e.terms().size() == 1);
  CHECK(e.terms()[0].shift == Shift::delta);
  CHECK(e.terms()[0].coeff == Catch::Approx(4.0));
  CHECK(e.terms()[0].power == 0.0);
  CHECK(e.has_delta());
  CHECK_THROWS_AS(e(1.0), std::domain_error);

  const Expr g = Expr::exponential(0.5) * Expr::dirac(1.0);
  CHECK(g.terms()[0].coeff == Catch::Approx(std::exp(0.5)));
}

TEST_CASE("products rebase onto the Heaviside basis") {
  const Expr e = Expr::monomial(1.0) * Expr::heaviside(1.0);
  CHECK(e(0.5) == 0.0);
  CHECK(e(3.0) == Catch::Approx(3.0).epsilon(1e-14));
  // basis is (t-1): t = (t-1) + 1
  for (const auto& term : e.terms()) {
    CHECK(term.shift == Shift::heaviside);
    CHECK(term.shift_at == 1.0);
  }

  const Expr trig = Expr::sine(2.0) * Expr::heaviside(0.5);
  CHECK(trig(2.0) == Catch::Approx(std::sin(4.0)).epsilon(1e-12));
  CHECK(trig(0.2) == 0.0);
}

TEST_CASE("oscillator products expand by product-to-sum") {
  const Expr e = Expr::sine(2.0) * Expr::cosine(3.0);
  for (double t : {0.1, 0.9, 2.3})
    CHECK(e(t) ==
          Catch::Approx(std::sin(2.0 * t) * std::cos(3.0 * t)).margin(1e-13));
  const Expr f = Expr::sine(1.0) * Expr::sine(1.0);
  for (double t : {0.4, 1.1})
    CHECK(f(t) == Catch::Approx(std::sin(t) * std::sin(t)).margin(1e-13));
  // mixed trig-hyperbolic goes through the exponential expansion
  const Expr g = Expr::sinh(1.0) * Expr::cosine(2.0);
  for (double t : {0.3, 1.2})
    CHECK(g(t) ==
          Catch::Approx(std::sinh(t) * std::cos(2.0 * t)).margin(1e-12));
}

TEST_CASE("terminating 1F1 factors expand to polynomials") {
  ExprTerm t;
  t.kummer = KummerPart{-2.0, 3.0, 1.0};
  const Expr e{t};
  REQUIRE(e.terms().size() == 3);
  for (double x : {0.2, 1.0, 4.0})
    CHECK(e(x) == Catch::Approx(kummer_1f1(-2.0, 3.0, x)).epsilon(1e-13));
}

TEST_CASE("non-terminating 1F1 factors evaluate but do not combine") {
  ExprTerm t;
  t.power = 0.5;
  t.kummer = KummerPart{0.7, 2.1, 1.3};
  const Expr e{t};
  CHECK(e(2.0) == Catch::Approx(std::sqrt(2.0) *
                                kummer_1f1(0.7, 2.1, 2.6)).epsilon(1e-12));
  CHECK_THROWS_AS(e * Expr::sine(1.0), unsupported_term_error);
}

TEST_CASE("powers must stay above -1") {
  CHECK_THROWS_AS(Expr::monomial(-1.2), std::domain_error);
  CHECK_NOTHROW(Expr::monomial(-0.5));
}

TEST_CASE("J0 atom evaluates and refuses products") {
  const Expr j = Expr::bessel_j0_atom(2.0);
  CHECK(j(0.35) == Catch::Approx(bessel_j0(0.7)).epsilon(1e-13));
  CHECK_THROWS_AS(j * Expr::monomial(1.0), std::domain_error);
  CHECK_NOTHROW(j * Expr::constant(3.0));
}

TEST_CASE("growth rate tracks dominant exponential") {
  CHECK(Expr::cosh(2.0).growth_rate() == Catch::Approx(2.0));
  CHECK(Expr::exponential(-3.0).growth_rate() == Catch::Approx(0.0).margin(0));
  CHECK((Expr::exponential(0.5) * Expr::sine(1.0)).growth_rate() ==
        Catch::Approx(0.5));
}

TEST_CASE("parser handles the mini-syntax") {
  CHECK(parse_expr("t^2")(1.5) == Catch::Approx(2.25));
  CHECK(parse_expr("exp(2t)*t")(0.7) ==
        Catch::Approx(std::exp(1.4) * 0.7).epsilon(1e-14));
  CHECK(parse_expr("cos(3t)")(0.4) == Catch::Approx(std::cos(1.2)).epsilon(1e-14));
  CHECK(parse_expr("2*t + 3*sin(0.5*t) - 1")(2.0) ==
        Catch::Approx(4.0 + 3.0 * std::sin(1.0) - 1.0).epsilon(1e-14));
  CHECK(parse_expr("sinh(1.5t)")(0.8) ==
        Catch::Approx(std::sinh(1.2)).epsilon(1e-13));
  CHECK(parse_expr(" t^0.5 ")(4.0) == Catch::Approx(2.0));
  CHECK(parse_expr("-t")(2.0) == Catch::Approx(-2.0));
  CHECK(parse_expr("H(t-1)")(2.0) == 1.0);
  CHECK(parse_expr("H(t-1)")(0.5) == 0.0);
  CHECK(parse_expr("delta(t-1)").has_delta());
  CHECK(parse_expr("t*H(t-1)")(3.0) == Catch::Approx(3.0));
}

TEST_CASE("parser reports positions") {
  CHECK_THROWS_AS(parse_expr("t^"), parse_error);
  CHECK_THROWS_AS(parse_expr("foo(t)"), parse_error);
  CHECK_THROWS_AS(parse_expr("sin(3)"), parse_error);
  CHECK_THROWS_AS(parse_expr("t + "), parse_error);
  CHECK_THROWS_AS(parse_expr("t t"), parse_error);
  try {
    parse_expr("2*t + cos(q)");
  } catch (const parse_error& e) {
    CHECK(e.position >= 10);
  }
}

TEST_CASE("prefix serialization is deterministic") {
  const Expr a = parse_expr("2*t + 3*sin(0.5*t)");
  const Expr b = parse_expr("3*sin(0.5*t) + 2*t");
  CHECK(a.to_prefix() == b.to_prefix());
  CHECK(a.to_prefix().rfind("(sum", 0) == 0);
}

TEST_CASE("pretty printing") {
  CHECK(parse_expr("t^2").pretty() == "t^2");
  CHECK(Expr::constant(1.0).pretty() == "1");
  CHECK(Expr::zero().pretty() == "0");
  const std::string p = (Expr::monomial(1.0) * Expr::heaviside(1.0)).pretty();
  CHECK(p.find("H(t-1)") != std::string::npos);
}

TEST_CASE("structural comparison") {
  CHECK(parse_expr("t + sin(2t)").same_as(parse_expr("sin(2t) + t")));
  CHECK_FALSE(parse_expr("t").same_as(parse_expr("2*t")));
}
