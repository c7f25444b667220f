#include "kramers/wave.hpp"

#include "kramers/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace kramers {

PhaseState::PhaseState(Field u_, Field v_, double mass_)
    : u(std::move(u_)), v(std::move(v_)), mass(mass_) {
  if (!(mass > 0.0)) throw InvalidConfig("phase state: mass must be positive");
  if (u.space()->n_modes() != v.space()->n_modes() ||
      u.space()->n_components() != v.space()->n_components())
    throw InvalidConfig("phase state: u and v must share a spectral space");
}

double phase_norm_squared(const Field& u, const Field& v, double delta) {
  return sobolev_norm_squared(u, delta) + sobolev_norm_squared(v, delta - 1.0);
}

PhaseState group_step(const PhaseState& state, double t) {
  PhaseState out = state;
  if (t == 0.0) return out;
  const auto& alpha = state.u.space()->eigenvalues();
  for (int i = 0; i < alpha.size(); ++i) {
    const double omega = std::sqrt(alpha(i) / state.mass);
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    const auto u = state.u.coeffs().col(i);
    const auto v = state.v.coeffs().col(i);
    out.u.coeffs().col(i) = c * u + (s / omega) * v;
    out.v.coeffs().col(i) = -omega * s * u + c * v;
  }
  return out;
}

void EnergyLedger::observe(double t, const PhaseState& s, double dt, bool keep_sample) {
  const auto& alpha = s.u.space()->eigenvalues();
  const Eigen::RowVectorXd u2 = s.u.coeffs().colwise().squaredNorm();
  const Eigen::RowVectorXd v2 = s.v.coeffs().colwise().squaredNorm();
  EnergySample e;
  e.t = t;
  e.u_sq[0] = u2.sum();
  e.u_sq[1] = u2.dot(alpha.transpose());
  e.u_sq[2] = u2.dot(alpha.array().square().matrix().transpose());
  e.kinetic[0] = s.mass * v2.dot(alpha.array().inverse().matrix().transpose());
  e.kinetic[1] = s.mass * v2.sum();
  e.kinetic[2] = s.mass * v2.dot(alpha.transpose());
  for (int k = 0; k < 3; ++k) {
    sup_u_sq[k] = std::max(sup_u_sq[k], e.u_sq[k]);
    sup_kinetic[k] = std::max(sup_kinetic[k], e.kinetic[k]);
    int_u_sq[k] += dt * e.u_sq[k];
    int_kinetic[k] += dt * e.kinetic[k];
  }
  sup_velocity_h1_sq = std::max(sup_velocity_h1_sq, e.kinetic[2] / s.mass);
  int_u_fourth += dt * e.u_sq[0] * e.u_sq[0];
  if (keep_sample) samples.push_back(e);
}

bool EnergyLedger::all_finite() const {
  for (int k = 0; k < 3; ++k)
    if (!std::isfinite(sup_u_sq[k]) || !std::isfinite(int_u_sq[k]) ||
        !std::isfinite(sup_kinetic[k]) || !std::isfinite(int_kinetic[k]) ||
        !std::isfinite(initial[k]))
      return false;
  return std::isfinite(sup_velocity_h1_sq) && std::isfinite(int_u_fourth);
}

double wave_dt_rule(double mu, const SpectralSpace& space, const FrictionModel& friction,
                    double dt_max, double wave_cfl, double damping_resolution) {
  const double alpha_n = space.eigenvalues()(space.n_modes() - 1);
  return std::min({dt_max, wave_cfl * std::sqrt(mu / alpha_n),
                   damping_resolution * mu / friction.sup_norm()});
}

PhaseState wave_step(const PhaseState& state, const WaveRunConfig& config, const NoisePath& path,
                     std::int64_t n) {
  const double mu = state.mass;
  const double dt = config.dt;
  const Coefficients& co = config.coefficients;
  PhaseState s = state;

  const Eigen::MatrixXd g = co.friction_R(s.u);
  const Eigen::MatrixXd half = (-(0.5 * dt / mu) * g).exp();

  s.v.coeffs() = half * s.v.coeffs();

  Field kick = co.forcing_R(s.u) * (dt / mu);
  const Eigen::MatrixXd dw = path.increment(n, config.noise_multiple);
  kick += co.sigma_R(s.u, dw) * (1.0 / mu);
  s.v += kick;

  s.v.coeffs() = half * s.v.coeffs();
  return group_step(s, dt);
}

WaveTrajectory simulate_wave(const WaveRunConfig& config, const NoisePath& path) {
  if (!(config.dt > 0.0)) throw InvalidConfig("wave run: dt must be positive");
  if (config.noise_multiple < 1) throw InvalidConfig("wave run: noise_multiple must be >= 1");
  if (std::abs(config.noise_multiple * path.base_dt() - config.dt) > 1e-12 * config.dt)
    throw InvalidConfig("wave run: dt must equal noise_multiple * base_dt");
  const auto n_steps = static_cast<std::int64_t>(std::llround(config.horizon / config.dt));
  if (std::abs(n_steps * config.dt - config.horizon) > 1e-9 * std::max(1.0, config.horizon))
    throw InvalidConfig("wave run: horizon must be an integer number of steps");
  if (n_steps * config.noise_multiple > path.n_steps())
    throw InvalidConfig("wave run: noise path shorter than the horizon");
  const int stride = std::max(1, config.snapshot_stride);

  WaveTrajectory traj;
  PhaseState s = config.initial;
  const double mu = s.mass;
  for (int i = 0; i < 3; ++i)
    traj.ledger.initial[i] = sobolev_norm_squared(s.u, i + 1) + mu * sobolev_norm_squared(s.v, i);

  traj.snapshots.push_back({0.0, s.u, s.v});
  if (config.record_ledger) traj.ledger.observe(0.0, s, 0.0, true);

  for (std::int64_t k = 0; k < n_steps; ++k) {
    s = wave_step(s, config, path, k * config.noise_multiple);
    const double t = (k + 1) * config.dt;
    if (!s.all_finite()) throw BlowUp(static_cast<std::size_t>(k + 1), t, "wave integrator: non-finite state");
    const bool snap = (k + 1) % stride == 0 || k + 1 == n_steps;
    if (config.record_ledger) traj.ledger.observe(t, s, config.dt, snap);
    if (snap && (k + 1) % stride == 0) traj.snapshots.push_back({t, s.u, s.v});
  }
  traj.final_state = s;
  return traj;
}

}  // namespace kramers
