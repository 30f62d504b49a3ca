#include <cmath>

#include "core/series.hpp"
#include "doctest.h"

using holowave::Series;

TEST_CASE("series arithmetic round trips") {
  Series f = Series::poly({1.0, 2.0, 3.0, -1.0});
  Series g = Series::poly({2.0, -1.0, 0.5});

  Series h = f * g;
  CHECK(h.coeff(0) == doctest::Approx(2.0));
  CHECK(h.coeff(1) == doctest::Approx(3.0));   // 1*(-1) + 2*2
  CHECK(h.coeff(2) == doctest::Approx(4.5));   // 0.5 - 2 + 6

  Series r = f * f.reciprocal();
  CHECK(r.coeff(0) == doctest::Approx(1.0));
  for (int k = 1; k < 10; ++k) CHECK(r.coeff(k) == doctest::Approx(0.0));
}

TEST_CASE("monomial exponent bookkeeping") {
  Series m = Series::monomial(-1.5, 2.0);
  CHECK(m.eval(0.25) == doctest::Approx(2.0 * std::pow(0.25, -1.5)));
  Series d = m.derivative();
  CHECK(d.lead() == doctest::Approx(-2.5));
  CHECK(d.coeff(0) == doctest::Approx(-3.0));

  // (x^-1.5 (1 + x)) * (x^0.5) = x^-1 (1 + x)
  Series prod = Series(-1.5, {1.0, 1.0}) * Series::monomial(0.5);
  CHECK(prod.lead() == doctest::Approx(-1.0));
  CHECK(prod.eval(0.3) == doctest::Approx((1.0 + 0.3) / 0.3));
}

TEST_CASE("pow and sqrt agree with closed forms") {
  Series f = Series::poly({1.0, 1.0});  // 1 + x
  Series s = f.pow(0.5);
  double x = 0.2;
  CHECK(s.eval(x) == doctest::Approx(std::sqrt(1.0 + x)).epsilon(1e-12));
  Series p = f.pow(-2.0);
  CHECK(p.eval(x) == doctest::Approx(std::pow(1.0 + x, -2.0)).epsilon(1e-12));
}

TEST_CASE("exp matches the bump profile derivatives") {
  // Taylor coefficients of exp(-1/(1 - s^2)) about s0, via series ops only.
  double s0 = 0.3;
  int len = 12;
  Series s = Series(0.0, [&] {
    std::vector<double> c(len, 0.0);
    c[0] = s0;
    c[1] = 1.0;
    return c;
  }());
  Series arg = -(Series::constant(1.0, len) - s * s).reciprocal();
  Series f = arg.exp();
  double f0 = std::exp(-1.0 / (1.0 - s0 * s0));
  CHECK(f.coeff(0) == doctest::Approx(f0).epsilon(1e-13));
  // First derivative: f * (-2 s / (1 - s^2)^2).
  double d1 = f0 * (-2.0 * s0) / std::pow(1.0 - s0 * s0, 2.0);
  CHECK(f.coeff(1) == doctest::Approx(d1).epsilon(1e-12));
}

TEST_CASE("addition aligns integer-offset exponents") {
  Series a = Series(-1.5, {1.0, 0.0, 2.0});
  Series b = Series(0.5, {3.0});
  Series c = a + b;
  CHECK(c.lead() == doctest::Approx(-1.5));
  CHECK(c.coeff(2) == doctest::Approx(5.0));
  CHECK_THROWS_AS(a + Series(0.25, {1.0}), holowave::Error);
}
