#include "support.hpp"

#include "kramers/corrector.hpp"
#include "kramers/errors.hpp"
#include "kramers/noise.hpp"
#include "kramers/numerics.hpp"

#include <doctest.h>

using namespace kramers;

namespace {

struct Case {
  SpacePtr s;
  Coefficients co;
  Field u, v, h;
};

Case make_case(std::uint64_t seed, int n = 8) {
  const auto s = kt::space(n, 2);
  return {s, default_coefficients(s), random_field(s, seed, 101, 0.5), random_field(s, seed, 202, 1.0, 1.0),
          random_field(s, seed, 303, 1.0, 1.0)};
}

}  // namespace

TEST_CASE("phi1 basics") {
  const auto s = kt::space(6, 2);
  const Coefficients co = kt::inert(s, 2.0 * Eigen::MatrixXd::Identity(2, 2));
  Field h = kt::field(s, 1);
  h *= 1.0 / sobolev_norm(h, 0.0);
  const CorrectorContext ctx(co, kt::field(s, 2), h);
  CHECK(phi1(ctx, Field(s)) == 0.0);
  CHECK(phi1(ctx, h) == doctest::Approx(0.5).epsilon(1e-15));

  const auto c = make_case(3);
  const CorrectorContext d(c.co, c.u, c.h);
  const Field v2 = kt::field(c.s, 4);
  const double lhs = phi1(d, 2.5 * c.v - 0.75 * v2);
  const double rhs = 2.5 * phi1(d, c.v) - 0.75 * phi1(d, v2);
  CHECK(std::abs(lhs - rhs) < 1e-14 * (1 + std::abs(rhs)));
}

TEST_CASE("psi basics") {
  const auto s = kt::space(6, 2);
  const CorrectorContext flat(model_catalog("constant_friction", s), kt::field(s, 1), kt::field(s, 2));
  CHECK(psi(flat, kt::field(s, 3)) == 0.0);

  const auto c = make_case(5);
  const CorrectorContext ctx(c.co, c.u, c.h);
  CHECK(psi(ctx, Field(c.s)) == 0.0);
  CHECK(psi(ctx, -3.0 * c.v) == doctest::Approx(9.0 * psi(ctx, c.v)).epsilon(1e-13));
  // Direct definition <[D g^{-1}(u) v] v, h>.
  const Eigen::MatrixXd m = c.co.inverse_friction_derivative_form_R(c.u).apply(c.v);
  const double direct = (m * c.v.coeffs()).cwiseProduct(c.h.coeffs()).sum();
  CHECK(psi(ctx, c.v) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("phi1 solves the generator identity") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto c = make_case(seed);
    const CorrectorContext ctx(c.co, c.u, c.h);
    CHECK(std::abs(generator_identity_phi1(ctx, c.v)) < 1e-11);
    CHECK(std::abs(generator_identity_phi1(ctx, Field(c.s))) == 0.0);
    CHECK(std::abs(generator_identity_phi1(ctx, 1e3 * c.v)) < 1e-8);
  }
}

TEST_CASE("phi2 vanishes under constant friction") {
  const auto s = kt::space(6, 2);
  const CorrectorContext ctx(model_catalog("constant_friction", s), kt::field(s, 1), kt::field(s, 2));
  const Field v = kt::field(s, 3);
  CHECK(phi2(ctx, v, 1e-2).value == 0.0);
  CHECK(resolvent_identity_phi2(ctx, v, 1e-2) == 0.0);
  const auto m = stationary_mean_psi(ctx);
  CHECK(m.trace_route == 0.0);
  CHECK(m.drift_route == 0.0);
}

TEST_CASE("centred semigroup starts at psi minus the drift pairing") {
  const auto c = make_case(7);
  const CorrectorContext ctx(c.co, c.u, c.h);
  CHECK(centered_semigroup_psi(ctx, c.v, 0.0) == doctest::Approx(psi(ctx, c.v) - ctx.drift_pairing()).epsilon(1e-13));
  CHECK(std::abs(centered_semigroup_psi(ctx, c.v, 100.0)) < 1e-14);
}

TEST_CASE("phi2 matches a composite quadrature of the centred semigroup") {
  const auto c = make_case(8);
  const CorrectorContext ctx(c.co, c.u, c.h);
  for (double mu : {1e-1, 1e-3}) {
    const double lambda = resolvent_scaling(mu);
    const double horizon = 40.0 / c.co.friction.gamma0();
    CompensatedSum acc;
    const int panels = 400;
    for (int p = 0; p < panels; ++p) {
      const auto rule = gauss_legendre(10, horizon * p / panels, horizon * (p + 1) / panels);
      for (int k = 0; k < 10; ++k)
        acc.add(rule.weights(k) * std::exp(-lambda * rule.nodes(k)) * centered_semigroup_psi(ctx, c.v, rule.nodes(k)));
    }
    const auto val = phi2(ctx, c.v, mu);
    CHECK(val.value == doctest::Approx(acc.value()).epsilon(1e-10));
    CHECK(val.tail_bound < 1e-12);
  }
}

TEST_CASE("phi2 solves the resolvent identity") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = make_case(seed);
    const CorrectorContext ctx(c.co, c.u, c.h);
    for (double mu : {1e-1, 1e-2, 1e-3}) {
      CHECK(std::abs(resolvent_identity_phi2(ctx, c.v, mu)) < 1e-6);
      const double coarse = std::abs(resolvent_identity_phi2(ctx, c.v, mu, 4));
      const double fine = std::abs(resolvent_identity_phi2(ctx, c.v, mu, 8));
      CHECK(fine <= std::max(coarse / 4, 1e-13));
    }
  }
}

TEST_CASE("phi2 and psi are centred under the invariant measure") {
  const auto c = make_case(9);
  const CorrectorContext ctx(c.co, c.u, c.h);
  const int n = 10000, d = c.s->dim();
  Eigen::MatrixXd z(d, n);
  KeyedNormalStream(12, 0).fill(z);
  const Eigen::MatrixXd y = ctx.kernel().factor() * z;
  const Phi2Form f = phi2_form(ctx, 1e-2);
  Eigen::VectorXd a(n), b(n);
  for (int j = 0; j < n; ++j) {
    a(j) = psi(ctx, Field::from_flat(c.s, y.col(j))) - ctx.drift_pairing();
    b(j) = f.form(y.col(j));
  }
  for (const Eigen::VectorXd& x : {a, b}) {
    const double m = x.mean();
    const double se = std::sqrt((x.array() - m).square().sum() / (n - 1) / n);
    CHECK(std::abs(m) < 3 * se);
  }
}

TEST_CASE("stationary mean agrees across routes and is linear in h") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = make_case(seed, 12);
    const CorrectorContext ctx(c.co, c.u, c.h);
    const auto m = stationary_mean_psi(ctx);
    CHECK(std::abs(m.difference()) < 1e-10);
    const auto m2 = stationary_mean_psi(CorrectorContext(c.co, c.u, 2.0 * c.h));
    CHECK(m2.trace_route == doctest::Approx(2 * m.trace_route).epsilon(1e-12));
    CHECK(m2.drift_route == doctest::Approx(2 * m.drift_route).epsilon(1e-12));
  }
}

TEST_CASE("resolvent scaling and context validation") {
  CHECK(resolvent_scaling(1e-2, 0.25) == doctest::Approx(std::pow(1e-2, 0.125)));
  CHECK_THROWS_AS(resolvent_scaling(0.0), InvalidConfig);
  CHECK_THROWS_AS(resolvent_scaling(0.1, 0.5), InvalidConfig);
  const auto c = make_case(1);
  CHECK_THROWS_AS(CorrectorContext(c.co, c.u, Field(kt::space(4, 2))), InvalidConfig);
  CHECK_THROWS_AS(CorrectorContext(c.co, c.u, c.h, 0.25, {.nodes = 0}), InvalidConfig);
  CHECK_THROWS_AS(CorrectorContext(c.co, c.u, c.h, 0.25, {.horizon_factor = 10}), InvalidConfig);
}
