#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "elzaki/special_functions.hpp"

using namespace elzaki;

TEST_CASE("gamma reproduces factorials") {
  CHECK(elzaki::gamma(1.0) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(elzaki::gamma(5.0) == Catch::Approx(24.0).epsilon(1e-14));
  double factorial = 1.0;
  for (int n = 1; n <= 20; ++n) {
    CHECK(elzaki::gamma(static_cast<double>(n)) ==
          Catch::Approx(factorial).epsilon(1e-13));
    factorial *= n;
  }
}

TEST_CASE("gamma at half-integers") {
  const double sqrt_pi = 1.7724538509055160273;
  CHECK(elzaki::gamma(0.5) == Catch::Approx(sqrt_pi).epsilon(1e-13));
  CHECK(elzaki::gamma(1.5) == Catch::Approx(0.5 * sqrt_pi).epsilon(1e-13));
  CHECK(elzaki::gamma(2.5) == Catch::Approx(0.75 * sqrt_pi).epsilon(1e-13));
  // reflection branch
  CHECK(elzaki::gamma(-0.5) == Catch::Approx(-2.0 * sqrt_pi).epsilon(1e-12));
}

TEST_CASE("gamma recurrence property") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(0.5, 30.0);
  for (int i = 0; i < 200; ++i) {
    const double x = dist(rng);
    CHECK(elzaki::gamma(x + 1.0) == Catch::Approx(x * elzaki::gamma(x)).epsilon(1e-11));
  }
}

TEST_CASE("gamma poles") {
  CHECK_THROWS_AS(elzaki::gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(elzaki::gamma(-1.0), std::domain_error);
  CHECK_THROWS_AS(elzaki::gamma(-7.0), std::domain_error);
}

TEST_CASE("beta examples and symmetry") {
  CHECK(elzaki::beta(1.0, 1.0) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(elzaki::beta(2.0, 3.0) == Catch::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(elzaki::beta(0.5, 0.5) ==
        Catch::Approx(3.14159265358979323846).epsilon(1e-13));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.1, 12.0);
  for (int i = 0; i < 50; ++i) {
    const double s = dist(rng), r = dist(rng);
    CHECK(elzaki::beta(s, r) == Catch::Approx(elzaki::beta(r, s)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(elzaki::beta(-1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(elzaki::beta(1.0, 0.0), std::domain_error);
}

TEST_CASE("kummer_1f1 examples") {
  CHECK(kummer_1f1(0.0, 3.0, 7.2) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(kummer_1f1(1.0, 1.0, 1.0) ==
        Catch::Approx(2.718281828459045).epsilon(1e-12));
  CHECK(kummer_1f1(-1.0, 2.0, 4.0) == Catch::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("kummer_1f1 terminating polynomial against direct summation") {
  // independent oracle: raw term-by-term sum with the exact integer a
  auto brute = [](double a, double b, double x, int terms) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < terms; ++k) {
      term *= (a + k) / (b + k) * x / (k + 1);
      sum += term;
    }
    return sum;
  };
  CHECK(kummer_1f1(-2.0, 3.0, 1.5) ==
        Catch::Approx(brute(-2.0, 3.0, 1.5, 40)).epsilon(1e-14));
  CHECK(kummer_1f1(-2.0, 3.0, 1.5) == Catch::Approx(0.1875).epsilon(1e-14));
  CHECK(kummer_1f1(-3.0, 1.5, 2.0) ==
        Catch::Approx(brute(-3.0, 1.5, 2.0, 40)).epsilon(1e-12));
}

TEST_CASE("kummer_1f1 at x = 0") {
  for (int n = 0; n <= 10; ++n)
    for (double b : {0.5, 1.0, 2.0, 7.3})
      CHECK(kummer_1f1(-static_cast<double>(n), b, 0.0) == 1.0);
}

TEST_CASE("Kummer transformation property") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> pa(0.2, 3.0);
  std::uniform_real_distribution<double> pb(0.5, 6.0);
  std::uniform_real_distribution<double> px(-4.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    const double a = pa(rng), b = pb(rng) + a, x = px(rng);
    const double lhs = kummer_1f1(a, b, x);
    const double rhs = std::exp(x) * kummer_1f1(b - a, b, -x);
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("kummer_1f1 error paths") {
  CHECK_THROWS_AS(kummer_1f1(1.5, -2.0, 1.0), std::domain_error);
  // polynomial branch takes priority over a pole beyond termination
  CHECK_NOTHROW(kummer_1f1(-2.0, -5.0, 1.0));
  CHECK_THROWS_AS(kummer_1f1(-5.0, -2.0, 1.0), std::domain_error);
  CHECK_THROWS(kummer_1f1(2.3, 0.5, 400.0));
}

TEST_CASE("bessel_j0 basics") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-12);
  CHECK(bessel_j0(-3.7) == bessel_j0(3.7));
  CHECK(bessel_j0(1.0) == Catch::Approx(0.7651976865579666).epsilon(1e-12));
}
