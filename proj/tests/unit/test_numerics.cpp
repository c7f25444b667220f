#include "kramers/errors.hpp"
#include "kramers/numerics.hpp"

#include <doctest.h>

#include <cmath>

using namespace kramers;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n - 1 exactly") {
  for (int n : {1, 2, 5, 12, 40}) {
    const auto rule = gauss_legendre(n, -1.0, 1.0);
    CHECK(rule.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      double q = 0.0;
      for (int k = 0; k < n; ++k) q += rule.weights(k) * std::pow(rule.nodes(k), p);
      CHECK(std::abs(q - exact) < 1e-13);
    }
  }
}

TEST_CASE("gauss-legendre on a shifted interval") {
  const auto rule = gauss_legendre(30, 0.0, 3.0);
  double q = 0.0;
  for (int k = 0; k < 30; ++k) q += rule.weights(k) * std::exp(-rule.nodes(k));
  CHECK(q == doctest::Approx(1 - std::exp(-3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(gauss_legendre(0), InvalidConfig);
}

TEST_CASE("type 7 quantiles") {
  const std::vector<double> xs{4, 1, 3, 2};
  CHECK(quantile(xs, 0.0) == 1.0);
  CHECK(quantile(xs, 1.0) == 4.0);
  CHECK(median(xs) == 2.5);
  CHECK(quantile(xs, 0.25) == doctest::Approx(1.75));
  CHECK(interquartile_range(xs) == doctest::Approx(1.5));
  CHECK(median({5.0}) == 5.0);
}

TEST_CASE("trapezoid is exact for linear data") {
  std::vector<double> t, y;
  for (int k = 0; k <= 10; ++k) {
    t.push_back(0.1 * k);
    y.push_back(3.0 * t.back() + 1.0);
  }
  CHECK(trapezoid(t, y) == doctest::Approx(2.5));
}

TEST_CASE("compensated sum recovers cancelled terms") {
  CompensatedSum s;
  s.add(1.0);
  for (int k = 0; k < 1000; ++k) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
}
