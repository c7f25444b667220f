#include "kramers/parabolic.hpp"

#include "kramers/errors.hpp"

#include <cmath>

namespace kramers {

Field limit_step(const Field& u, const LimitRunConfig& config, const NoisePath& path,
                 std::int64_t n, const Field* drift, double* residual) {
  const Coefficients& co = config.coefficients;
  const double dt = config.dt;
  const SpacePtr& space = u.space();
  const int r = space->n_components();
  const auto& alpha = space->eigenvalues();

  const Eigen::MatrixXd g = co.friction_R(u);
  Eigen::PartialPivLU<Eigen::MatrixXd> g_lu(g);
  const Eigen::MatrixXd m = g_lu.inverse();

  Field forcing = co.forcing_R(u);
  forcing += co.sigma_R(u, path.increment(n, config.noise_multiple)) * (1.0 / dt);
  Eigen::MatrixXd rhs = u.coeffs() + dt * (m * forcing.coeffs());
  if (config.include_drift && drift) rhs += dt * drift->coeffs();

  Field next(space);
  double worst = 0.0;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(r, r);
  for (int i = 0; i < space->n_modes(); ++i) {
    const Eigen::MatrixXd a = id + (dt * alpha(i)) * m;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    if (!(std::abs(lu.determinant()) > 0.0)) throw NumericError("limit step: singular per-mode matrix");
    next.coeffs().col(i) = lu.solve(rhs.col(i));
    if (residual) {
      const double scale = std::max(1.0, rhs.col(i).cwiseAbs().maxCoeff());
      worst = std::max(worst, (a * next.coeffs().col(i) - rhs.col(i)).cwiseAbs().maxCoeff() / scale);
    }
  }
  if (residual) *residual = worst;
  return next;
}

LimitTrajectory simulate_limit(const LimitRunConfig& config, const NoisePath& path) {
  if (!(config.dt > 0.0)) throw InvalidConfig("limit run: dt must be positive");
  if (config.noise_multiple < 1) throw InvalidConfig("limit run: noise_multiple must be >= 1");
  if (config.drift_lag < 1) throw InvalidConfig("limit run: drift_lag must be >= 1");
  if (std::abs(config.noise_multiple * path.base_dt() - config.dt) > 1e-12 * config.dt)
    throw InvalidConfig("limit run: dt must equal noise_multiple * base_dt");
  if (config.drift_method != DriftMethod::spectral && config.drift_method != DriftMethod::trace)
    throw InvalidConfig("limit run: drift method must be spectral or trace");
  const auto n_steps = static_cast<std::int64_t>(std::llround(config.horizon / config.dt));
  if (std::abs(n_steps * config.dt - config.horizon) > 1e-9 * std::max(1.0, config.horizon))
    throw InvalidConfig("limit run: horizon must be an integer number of steps");
  if (n_steps * config.noise_multiple > path.n_steps())
    throw InvalidConfig("limit run: noise path shorter than the horizon");
  const int stride = std::max(1, config.snapshot_stride);

  LimitTrajectory traj;
  Field u = config.initial;
  traj.snapshots.push_back({0.0, u});
  auto observe = [&](const Field& x, double dt) {
    traj.ledger.sup_u_h1_sq = std::max(traj.ledger.sup_u_h1_sq, sobolev_norm_squared(x, 1.0));
    traj.ledger.int_u_h2_sq += dt * sobolev_norm_squared(x, 2.0);
  };
  if (config.record_ledger) observe(u, 0.0);

  Field drift(u.space());
  for (std::int64_t k = 0; k < n_steps; ++k) {
    if (config.include_drift && k % config.drift_lag == 0) drift = noise_drift(config.coefficients, u, config.drift_method);
    double res = 0.0;
    u = limit_step(u, config, path, k * config.noise_multiple, &drift, &res);
    traj.ledger.max_solve_residual = std::max(traj.ledger.max_solve_residual, res);
    const double t = (k + 1) * config.dt;
    if (!u.all_finite()) throw BlowUp(static_cast<std::size_t>(k + 1), t, "limit integrator: non-finite state");
    if (config.record_ledger) observe(u, config.dt);
    if ((k + 1) % stride == 0) traj.snapshots.push_back({t, u});
  }
  traj.final_state = u;
  return traj;
}

}  // namespace kramers
