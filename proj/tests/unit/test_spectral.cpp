#include "support.hpp"

#include "kramers/errors.hpp"

#include <doctest.h>

using namespace kramers;

TEST_CASE("eigenvalues on (0, pi) are squares") {
  const auto s = SpectralSpace::build(M_PI, 4, 1);
  for (int i = 0; i < 4; ++i) CHECK(s->eigenvalue(i) == doctest::Approx((i + 1.0) * (i + 1.0)).epsilon(1e-15));
}

TEST_CASE("eigenvalues on the unit interval") {
  const auto s = SpectralSpace::build(1.0, 2, 3);
  CHECK(s->eigenvalue(0) == doctest::Approx(M_PI * M_PI).epsilon(1e-15));
  CHECK(s->eigenvalue(1) == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-15));
  CHECK(s->dim() == 6);
}

TEST_CASE("eigenvalues strictly increase") {
  const auto s = SpectralSpace::build(2.5, 32, 1);
  for (int i = 1; i < 32; ++i) CHECK(s->eigenvalue(i) > s->eigenvalue(i - 1));
}

TEST_CASE("eigenfunctions are orthonormal under dense quadrature") {
  for (double length : {M_PI, 1.0, 3.7}) {
    const auto s = SpectralSpace::build(length, 16, 1);
    const auto g = kt::dense_grid(length, 200);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        double acc = 0.0;
        for (int k = 0; k < g.x.size(); ++k) acc += g.w(k) * s->eigenfunction(i, g.x(k)) * s->eigenfunction(j, g.x(k));
        CHECK(std::abs(acc - (i == j)) < 1e-10);
      }
  }
}

TEST_CASE("first eigenfunction on (0, pi)") {
  const auto s = SpectralSpace::build(M_PI, 1, 1);
  for (double x : {0.1, 1.0, 2.5}) CHECK(s->eigenfunction(0, x) == doctest::Approx(std::sqrt(2 / M_PI) * std::sin(x)));
}

TEST_CASE("sobolev norms of basis fields") {
  const auto s = SpectralSpace::build(M_PI, 4, 1);
  const Field e1 = Field::basis(s, 0, 0), e2 = Field::basis(s, 0, 1);
  CHECK(sobolev_norm(e1, 2.0) == doctest::Approx(1.0));
  CHECK(sobolev_norm(e2, 1.0) == doctest::Approx(2.0));
  CHECK(sobolev_norm(e1 + e2, 0.0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("sobolev norm at delta 0 is the Euclidean coefficient norm") {
  const auto s = kt::space(12, 3);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Field h = kt::field(s, seed, 2.0, 0.5);
    CHECK(sobolev_norm(h, 0.0) == doctest::Approx(h.coeffs().norm()).epsilon(1e-14));
  }
}

TEST_CASE("sobolev inner product is symmetric and matches the norm") {
  const auto s = kt::space(10, 2);
  const Field a = kt::field(s, 3), b = kt::field(s, 4);
  for (double d : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    CHECK(sobolev_inner(a, b, d) == doctest::Approx(sobolev_inner(b, a, d)));
    CHECK(sobolev_inner(a, a, d) == doctest::Approx(sobolev_norm_squared(a, d)));
  }
}

TEST_CASE("sobolev norm of the laplacian shifts the exponent") {
  const auto s = kt::space(10, 2);
  const Field a = kt::field(s, 5);
  CHECK(sobolev_norm_squared(a.laplacian(), 0.0) == doctest::Approx(sobolev_norm_squared(a, 2.0)));
}

TEST_CASE("collocation samples of e1") {
  const auto s = SpectralSpace::build(M_PI, 4, 1);
  const Eigen::MatrixXd vals = to_collocation(Field::basis(s, 0, 0));
  REQUIRE(vals.cols() == s->collocation_size());
  for (int j = 0; j < vals.cols(); ++j)
    CHECK(vals(0, j) == doctest::Approx(std::sqrt(2 / M_PI) * std::sin(s->nodes()(j))).epsilon(1e-14));
}

TEST_CASE("collocation round trip is exact on band-limited fields") {
  for (int n : {1, 4, 17, 32}) {
    const auto s = kt::space(n, 2, 2.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Field h = kt::field(s, seed, 1.0, 0.0);
      const Field back = from_collocation(to_collocation(h), s);
      CHECK((back.coeffs() - h.coeffs()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("modes above the band project to zero") {
  const auto s = SpectralSpace::build(M_PI, 2, 1);
  Eigen::MatrixXd vals(1, s->collocation_size());
  for (int j = 0; j < vals.cols(); ++j) vals(0, j) = std::sin(3 * s->nodes()(j));
  CHECK(from_collocation(vals, s).coeffs().cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("analysis inverts synthesis") {
  const auto s = kt::space(9, 1, 1.3);
  CHECK((s->analysis() * s->synthesis() - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("flat layout puts components fastest") {
  const auto s = kt::space(3, 2);
  Field h(s);
  h(1, 2) = 7.0;
  CHECK(h.flat()(2 * 2 + 1) == 7.0);
  CHECK(Field::from_flat(s, h.flat()).coeffs() == h.coeffs());
}

TEST_CASE("invalid spaces and mismatched fields are rejected") {
  CHECK_THROWS_AS(SpectralSpace::build(-1.0, 4, 1), InvalidConfig);
  CHECK_THROWS_AS(SpectralSpace::build(1.0, 0, 1), InvalidConfig);
  CHECK_THROWS_AS(SpectralSpace::build(1.0, 4, 0), InvalidConfig);
  const Field a(kt::space(4, 1)), b(kt::space(5, 1));
  CHECK_THROWS_AS(a + b, InvalidConfig);
  CHECK_THROWS_AS(from_collocation(Eigen::MatrixXd::Zero(1, 3), kt::space(4, 1)), InvalidConfig);
}
