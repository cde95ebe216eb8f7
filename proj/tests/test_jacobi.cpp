#include <doctest.h>

#include <cmath>
#include <vector>

#include "grasph/jacobi.hpp"
#include "test_util.hpp"

using namespace grasph;
using grasph::testutil::fd_derivative;
using grasph::testutil::fd_second_derivative;
using grasph::testutil::loglog_slope;
using grasph::testutil::rel_error;

TEST_CASE("degree zero is the constant 1") {
  CHECK(jacobi_eval<double>({1, 0, 0}, 0.3) == 1.0);
  CHECK(jacobi_eval<Rational>({4, 2, 0}, make_rational(-3, 7)) == 1);
}

TEST_CASE("endpoint values match the binomial formulas") {
  CHECK(jacobi_eval<Rational>({1, 0, 2}, Rational(1)) == 3);
  CHECK(jacobi_eval<Rational>({0, 2, 3}, Rational(-1)) == -10);

  for (long a : {0L, 1L, 2L, 3L, 5L}) {
    for (long b : {0L, 1L, 2L, 4L}) {
      for (long n = 0; n <= 50; ++n) {
        Rational at_one = jacobi_eval<Rational>({a, b, n}, Rational(1));
        CHECK(at_one == Rational(binomial(n + a, n)));
        Rational at_minus = jacobi_eval<Rational>({a, b, n}, Rational(-1));
        Rational want(binomial(n + b, n));
        if (n % 2 == 1) want = -want;
        CHECK(at_minus == want);
      }
    }
  }
}

TEST_CASE("floating recurrence tracks the exact one") {
  const std::vector<Rational> xs = {Rational(-1),          make_rational(-7, 9),
                                    make_rational(-1, 2),  make_rational(-1, 5),
                                    Rational(0),           make_rational(1, 3),
                                    make_rational(4, 7),   make_rational(9, 10),
                                    Rational(1)};
  for (long a : {0L, 1L, 3L}) {
    for (const auto& x : xs) {
      for (long n = 0; n <= 50; n += 7) {
        const double exact = to_double(jacobi_eval<Rational>({a, 1, n}, x));
        const double approx = jacobi_eval<double>({a, 1, n}, to_double(x));
        CHECK(rel_error(approx, exact) <= 1e-10);
      }
    }
  }
}

TEST_CASE("derivatives: identity cases") {
  // P_1^{(0,0)}(x) = x
  CHECK(jacobi_derivative<double>({0, 0, 1}, 1, 0.7) == doctest::Approx(1.0));
  // derivative of a constant
  CHECK(jacobi_derivative<double>({2, 0, 0}, 1, 0.5) == 0.0);
  // degree exhausted
  CHECK(jacobi_derivative<double>({1, 1, 2}, 5, 0.1) == 0.0);
}

TEST_CASE("derivatives agree with finite differences") {
  auto f = [](double x) { return jacobi_eval<double>({1, 0, 4}, x); };
  const double second = jacobi_derivative<double>({1, 0, 4}, 2, 0.25);
  CHECK(rel_error(fd_second_derivative(f, 0.25, 1e-4), second) <= 1e-6);

  for (int i = 1; i <= 20; ++i) {
    const double x = -0.95 + 1.9 * i / 21.0;
    for (long a : {0L, 2L}) {
      auto g = [&](double t) { return jacobi_eval<double>({a, 1, 9}, t); };
      const double want = jacobi_derivative<double>({a, 1, 9}, 1, x);
      CHECK(rel_error(fd_derivative(g, x, 1e-4), want) <= 1e-6);
    }
  }
}

TEST_CASE("normalized polynomials") {
  // gap 0 is Legendre: P~_2(0) = -1/2 exactly
  CHECK(normalized_jacobi<Rational>(0, 2, Rational(0)) == make_rational(-1, 2));
  CHECK(normalized_jacobi<double>(3, 7, 1.0) == 1.0);
  CHECK(normalized_jacobi<Rational>(1, 5, Rational(-1)) == make_rational(-1, 6));
}

TEST_CASE("normalized derivative: exhausted degree and gap-0 line") {
  // P~_1 = x when the gap is 0
  CHECK(normalized_jacobi_derivative<double>(0, 1, 1, 0.42) == doctest::Approx(1.0));
  CHECK(normalized_jacobi_derivative<double>(0, 0, 1, 0.2) == 0.0);
  CHECK(normalized_jacobi_derivative<Rational>(2, 2, 3, make_rational(1, 3)) == 0);
}

TEST_CASE("normalized derivative matches the step-by-step reduction") {
  // Unroll d/dx P_n^{(a,b)} = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)} three times by
  // hand and compare against the one-shot order-3 path.
  const double x = 0.1;
  const double chain = (6 + 2 + 0 + 1) / 2.0 * (5 + 3 + 1 + 1) / 2.0 *
                       (4 + 4 + 2 + 1) / 2.0 * jacobi_eval<double>({5, 3, 3}, x);
  const double denom = to_double(Rational(binomial(8, 6)));
  const double got = normalized_jacobi_derivative<double>(2, 6, 3, x);
  CHECK(rel_error(got, chain / denom) <= 1e-10);
}

TEST_CASE("normalized sequence decays at least like (n+1)^{-gap-1/2}") {
  // |P~_n(x)| (n+1)^{gap+1/2} stays bounded for fixed x in (-1,1): the
  // log-max over the tail half of the dyadic shells has slope <= 0.05.
  for (long gap : {0L, 1L, 2L}) {
    const double x = std::cos(2.0 * M_PI / 5.0);
    std::vector<double> centers, maxima;
    for (long lo = 1; lo < 200; lo *= 2) {
      const long hi = std::min(2 * lo, 201L);
      double mx = 0;
      for (long n = lo; n < hi; ++n) {
        const double v = std::abs(normalized_jacobi<double>(gap, n, x)) *
                         std::pow(n + 1.0, gap + 0.5);
        mx = std::max(mx, v);
      }
      centers.push_back(std::sqrt(static_cast<double>(lo) * hi));
      maxima.push_back(mx);
    }
    const std::size_t half = centers.size() / 2;
    CHECK(loglog_slope({centers.begin() + half, centers.end()},
                       {maxima.begin() + half, maxima.end()}) <= 0.05);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_WITH_AS(jacobi_eval<double>({1, 0, kMaxJacobiDegree + 1}, 0.5),
                       "degree limit", std::invalid_argument);
  CHECK_THROWS_AS(jacobi_eval<double>({-1, 0, 2}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(jacobi_derivative<double>({1, 0, 2}, -1, 0.5),
                  std::invalid_argument);
}
