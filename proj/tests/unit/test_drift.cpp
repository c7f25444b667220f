#include "support.hpp"

#include "kramers/drift.hpp"
#include "kramers/errors.hpp"

#include <doctest.h>

using namespace kramers;

namespace {

Coefficients constant_friction(const SpacePtr& s) { return model_catalog("constant_friction", s); }

Coefficients scalar_model(const SpacePtr& s, const Field& w, double a) {
  const FrictionModel fr(Eigen::MatrixXd::Constant(1, 1, 2.0), {Eigen::MatrixXd::Constant(1, 1, a)}, {w});
  return {fr, NemytskiiMap::zero(1), DiffusionModel::tanh_diagonal(1, kt::theta(s), 0.3), std::nullopt};
}

}  // namespace

TEST_CASE("constant friction produces no drift on any route") {
  const auto s = kt::space(8, 2);
  const auto co = constant_friction(s);
  const Field u = kt::field(s, 1, 2.0);
  const auto k = OuKernel::build(co, u);
  CHECK(drift_spectral(co, u, k).value.coeffs().isZero());
  CHECK(drift_trace(co, u, k).value.coeffs().isZero());
  CHECK(drift_monte_carlo(co, u, k, {}).value.coeffs().isZero());
  CHECK(stationary_process_oracle(co, u, k, {.n_steps = 1000, .n_batches = 10}).value.coeffs().isZero());
  CHECK(drift_lipschitz_probe(co, u, kt::field(s, 2)) == 0.0);
}

TEST_CASE("no noise, no drift") {
  const auto s = kt::space(8, 2);
  auto co = default_coefficients(s);
  co.diffusion = DiffusionModel::zero(2, kt::theta(s));
  const Field u = kt::field(s, 3);
  CHECK(noise_drift(co, u, DriftMethod::spectral).coeffs().isZero());
  CHECK(noise_drift(co, u, DriftMethod::trace).coeffs().isZero());
}

TEST_CASE("trace and spectral routes coincide") {
  const auto s = kt::space(16, 2);
  const auto co = default_coefficients(s);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Field u = kt::field(s, seed, 1.0);
    const Field a = noise_drift(co, u, DriftMethod::spectral), b = noise_drift(co, u, DriftMethod::trace);
    CHECK((a.coeffs() - b.coeffs()).norm() <= 1e-13 * std::max(1e-3, b.coeffs().norm()));
    CHECK(b.coeffs().norm() > 0.0);
  }
}

TEST_CASE("scalar model has a closed-form drift") {
  const auto s = kt::space(12, 1);
  const Field w = kt::field(s, 4, 0.3);
  const double a = 0.8;
  const auto co = scalar_model(s, w, a);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Field u = kt::field(s, 10 + seed, 0.7);
    const double p = sobolev_inner(u, w, 1.0);
    const double g = 2.0 + a * std::tanh(p);
    const double sech2 = 1.0 / (std::cosh(p) * std::cosh(p));
    const Eigen::MatrixXd b = noise_gram(u, co.diffusion);
    Eigen::VectorXd aw = w.flat().cwiseProduct(s->eigenvalues());
    const Eigen::VectorXd expected = -a * sech2 / (2 * g * g * g) * (b * aw);
    const Eigen::VectorXd got = noise_drift(co, u).flat();
    CHECK((got - expected).norm() < 1e-13 * expected.norm());
  }
}

TEST_CASE("monte-carlo agrees with the spectral drift") {
  const auto s = kt::space(8, 2);
  const auto co = default_coefficients(s);
  const Field u = kt::field(s, 21, 1.0), dir = kt::field(s, 22, 1.0, 0.0);
  const auto k = OuKernel::build(co, u);
  const auto mc = drift_monte_carlo(co, u, k, {.n_samples = 1000000, .seed = 5, .projection = dir});
  const auto exact = drift_spectral(co, u, k);
  const auto st = agreement(mc, exact, dir);
  CHECK(st.norm_ratio < 3.0);
  CHECK(st.projection_z < 3.0);
  CHECK(mc.sample_count == 1000000);
}

TEST_CASE("monte-carlo standard error shrinks like one over root n") {
  const auto s = kt::space(6, 2);
  const auto co = default_coefficients(s);
  const Field u = kt::field(s, 23);
  const auto k = OuKernel::build(co, u);
  const auto a = drift_monte_carlo(co, u, k, {.n_samples = 20000, .seed = 1});
  const auto b = drift_monte_carlo(co, u, k, {.n_samples = 80000, .seed = 2});
  CHECK(b.error_estimate / a.error_estimate == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("ergodic average agrees with the spectral drift") {
  const auto s = kt::space(8, 2);
  const auto co = default_coefficients(s);
  const Field u = kt::field(s, 24, 1.0), dir = kt::field(s, 25, 1.0, 0.0);
  const auto k = OuKernel::build(co, u);
  const auto erg = stationary_process_oracle(co, u, k, {.n_steps = 200000, .seed = 3, .projection = dir});
  const auto st = agreement(erg, drift_spectral(co, u, k), dir);
  CHECK(st.norm_ratio < 3.0);
  CHECK(st.projection_z < 3.0);
}

TEST_CASE("drift is locally Lipschitz and bounded") {
  const auto s = kt::space(12, 2);
  const auto co = default_coefficients(s);
  const Field u = kt::field(s, 26, 1.0), k = kt::field(s, 27, 1.0);
  const double r1 = drift_lipschitz_probe(co, u, u + 1e-4 * k);
  const double r2 = drift_lipschitz_probe(co, u, u + 5e-5 * k);
  CHECK(std::isfinite(r1));
  CHECK(r2 == doctest::Approx(r1).epsilon(0.01));

  const double base = noise_drift(co, u).coeffs().norm();
  double ratio_small = 0.0;
  for (double scale : {0.0, 0.5, 1.0, 4.0, 16.0, 64.0, 256.0}) {
    const Field v = scale * u;
    const double ratio = sobolev_norm(noise_drift(co, v), 1.0) / (1 + sobolev_norm_squared(v, 1.0));
    CHECK(std::isfinite(ratio));
    if (scale <= 1.0) ratio_small = std::max(ratio_small, ratio);
    else CHECK(ratio <= ratio_small);
  }
  CHECK(base > 0.0);
}

TEST_CASE("drift scales with the square of the noise amplitude") {
  const auto s = kt::space(8, 2);
  const Field u = kt::field(s, 28);
  const Field a = noise_drift(model_catalog("default", s, {.noise_amplitude = 1.0}), u);
  const Field b = noise_drift(model_catalog("default", s, {.noise_amplitude = 2.0}), u);
  CHECK((b.coeffs() - 4.0 * a.coeffs()).norm() < 1e-13 * b.coeffs().norm());
}

TEST_CASE("method names round trip") {
  for (auto m : {DriftMethod::spectral, DriftMethod::trace, DriftMethod::monte_carlo, DriftMethod::ergodic})
    CHECK(parse_drift_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_drift_method("exact"), InvalidConfig);
  const auto s = kt::space(4, 2);
  CHECK_THROWS_AS(noise_drift(default_coefficients(s), Field(s), DriftMethod::monte_carlo), InvalidConfig);
  const auto co = default_coefficients(s);
  const auto k = OuKernel::build(co, Field(s));
  CHECK_THROWS_AS(stationary_process_oracle(co, Field(s), k, {.burn_in = 0.1}), InvalidConfig);
  CHECK_THROWS_AS(drift_monte_carlo(co, Field(s), k, {.n_samples = 10}), InvalidConfig);
}
