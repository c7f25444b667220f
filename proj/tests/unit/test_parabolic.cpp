#include "support.hpp"

#include "kramers/errors.hpp"
#include "kramers/parabolic.hpp"

#include <doctest.h>

using namespace kramers;

namespace {

LimitRunConfig limit(const Coefficients& co, const Field& u0, double dt, double horizon, int multiple = 1) {
  LimitRunConfig cfg;
  cfg.dt = dt;
  cfg.horizon = horizon;
  cfg.initial = u0;
  cfg.coefficients = co;
  cfg.noise_multiple = multiple;
  cfg.snapshot_stride = 1 << 30;
  return cfg;
}

}  // namespace

TEST_CASE("heat modes decay at first order") {
  const auto s = kt::space(4, 1);
  const Coefficients co = kt::inert(s, Eigen::MatrixXd::Identity(1, 1));
  const Field u0 = Field(s, Eigen::MatrixXd::Ones(1, 4));
  const double horizon = 0.5;
  std::vector<double> err;
  for (double dt : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    const auto traj = simulate_limit(limit(co, u0, dt, horizon), NoisePath(1, dt, horizon, 1, 4));
    double e = 0.0;
    for (int i = 0; i < 4; ++i) {
      // single step factor (1 + alpha dt)^{-1} against e^{-alpha dt}
      const double exact = std::exp(-s->eigenvalue(i) * horizon);
      e = std::max(e, std::abs(traj.final_state(0, i) - exact));
      CHECK(traj.final_state(0, i) == doctest::Approx(std::pow(1 + s->eigenvalue(i) * dt, -horizon / dt)).epsilon(1e-12));
    }
    err.push_back(e);
  }
  for (std::size_t k = 1; k < err.size(); ++k) CHECK(err[k - 1] / err[k] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("constant friction makes the drift switch irrelevant") {
  const auto s = kt::space(8, 2);
  const auto co = model_catalog("constant_friction", s);
  const Field u0 = kt::field(s, 1);
  LimitRunConfig a = limit(co, u0, 1e-3, 0.1), b = a;
  b.include_drift = false;
  const NoisePath p(3, 1e-3, 0.1, 2, 8);
  CHECK(simulate_limit(a, p).final_state.coeffs() == simulate_limit(b, p).final_state.coeffs());
}

TEST_CASE("noise-free quasilinear run is first order") {
  const auto s = kt::space(8, 2);
  auto co = default_coefficients(s);
  co.diffusion = DiffusionModel::zero(2, kt::theta(s));
  const Field u0 = kt::field(s, 2, 1.0, 1.0);
  const double horizon = 0.2, dt = 4e-3;
  auto run = [&](double h) { return simulate_limit(limit(co, u0, h, horizon), NoisePath(1, h, horizon, 2, 8)).final_state; };
  const Field ref = run(dt / 10);
  const double e1 = sobolev_norm(run(dt) - ref, 0.0);
  const double e2 = sobolev_norm(run(dt / 2) - ref, 0.0);
  CHECK(e2 < e1 / 1.6);
  CHECK(e1 < 0.05 * sobolev_norm(ref, 0.0));
}

TEST_CASE("zero horizon and determinism") {
  const auto s = kt::space(8, 2);
  const auto co = default_coefficients(s);
  const Field u0 = kt::field(s, 3);
  CHECK(simulate_limit(limit(co, u0, 1e-3, 0.0), NoisePath(1, 1e-3, 0.0, 2, 8)).final_state.coeffs() == u0.coeffs());
  const auto a = simulate_limit(limit(co, u0, 1e-3, 0.1), NoisePath(4, 1e-3, 0.1, 2, 8));
  const auto b = simulate_limit(limit(co, u0, 1e-3, 0.1), NoisePath(4, 1e-3, 0.1, 2, 8));
  CHECK(a.final_state.coeffs() == b.final_state.coeffs());
  CHECK(a.ledger.max_solve_residual < 1e-12);
}

TEST_CASE("energy ledger is finite and stable under refinement") {
  const auto s = kt::space(16, 2);
  const auto co = default_coefficients(s);
  const Field u0 = kt::field(s, 5, 1.0);
  const double horizon = 0.5, dt = 1e-3;
  const NoisePath p(6, dt / 2, horizon, 2, 16);
  const auto coarse = simulate_limit(limit(co, u0, dt, horizon, 2), p);
  const auto fine = simulate_limit(limit(co, u0, dt / 2, horizon, 1), p);
  REQUIRE(coarse.ledger.all_finite());
  const double a = coarse.ledger.sup_u_h1_sq + coarse.ledger.int_u_h2_sq;
  const double b = fine.ledger.sup_u_h1_sq + fine.ledger.int_u_h2_sq;
  CHECK(std::abs(a - b) <= 0.05 * b);
}

TEST_CASE("lagged drift stays close to the per-step drift") {
  const auto s = kt::space(8, 2);
  const auto co = default_coefficients(s);
  const Field u0 = kt::field(s, 7);
  LimitRunConfig a = limit(co, u0, 1e-3, 0.2), b = a;
  b.drift_lag = 4;
  const NoisePath p(8, 1e-3, 0.2, 2, 8);
  const Field ua = simulate_limit(a, p).final_state, ub = simulate_limit(b, p).final_state;
  CHECK(sobolev_norm(ua - ub, 0.0) < 1e-3 * sobolev_norm(ua, 0.0));
}

TEST_CASE("invalid limit runs are rejected") {
  const auto s = kt::space(4, 2);
  const auto co = default_coefficients(s);
  LimitRunConfig c = limit(co, Field(s), 1e-3, 0.1);
  c.drift_method = DriftMethod::monte_carlo;
  CHECK_THROWS_AS(simulate_limit(c, NoisePath(1, 1e-3, 0.1, 2, 4)), InvalidConfig);
  CHECK_THROWS_AS(simulate_limit(limit(co, Field(s), 1e-3, 0.1), NoisePath(1, 1e-3, 0.05, 2, 4)), InvalidConfig);
  CHECK_THROWS_AS(simulate_limit(limit(co, Field(s), 1e-3, 0.1, 2), NoisePath(1, 1e-3, 0.2, 2, 4)), InvalidConfig);
}
