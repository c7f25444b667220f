#pragma once

// Damped stochastic wave system
//   mu u'' = Laplacian u - g_R(u) u' + f_R(u) + sigma_R(u) dW^Q/dt
// integrated by splitting: the undamped wave group is applied exactly per mode
// and the stiff friction exactly through an r x r matrix exponential.

#include "kramers/coefficients.hpp"
#include "kramers/noise.hpp"
#include "kramers/spectral.hpp"

#include <cstdint>
#include <vector>

namespace kramers {

/// (u, du/dt) at mass mu.
struct PhaseState {
  Field u;
  Field v;
  double mass = 1.0;

  PhaseState() = default;
  PhaseState(Field u_, Field v_, double mass_);
  bool all_finite() const { return u.all_finite() && v.all_finite(); }
};

/// ||(u, v)||^2 in H^delta x H^{delta-1}.
double phase_norm_squared(const Field& u, const Field& v, double delta);

/// Exact flow of mu u'' = Laplacian u over time t.
PhaseState group_step(const PhaseState& state, double t);

struct EnergySample {
  double t = 0.0;
  double u_sq[3] = {0, 0, 0};      // ||u||^2_{H^s}, s = 0, 1, 2
  double kinetic[3] = {0, 0, 0};   // mu ||du/dt||^2_{H^{s-1}}, s = 0, 1, 2
};

struct EnergyLedger {
  std::vector<EnergySample> samples;
  double sup_u_sq[3] = {0, 0, 0};
  double int_u_sq[3] = {0, 0, 0};
  double sup_kinetic[3] = {0, 0, 0};
  double int_kinetic[3] = {0, 0, 0};
  double sup_velocity_h1_sq = 0.0;  // sup_t ||du/dt||^2_{H^1}
  double int_u_fourth = 0.0;        // int ||u||^4_H dt
  double initial[3] = {0, 0, 0};    // ||(u0, sqrt(mu) v0)||^2 in H_i, i = 1, 2, 3

  void observe(double t, const PhaseState& s, double dt, bool keep_sample);
  bool all_finite() const;
};

struct WaveRunConfig {
  double dt = 0.0;
  double horizon = 0.0;
  PhaseState initial;
  Coefficients coefficients;
  /// Base noise steps per integrator step (dt = multiple * path.base_dt()).
  int noise_multiple = 1;
  /// Integrator steps between stored snapshots.
  int snapshot_stride = 100;
  bool record_ledger = true;
};

/// Step size for mass mu: min(dt_max, wave_cfl sqrt(mu / alpha_N), damping_resolution mu / ||g||).
double wave_dt_rule(double mu, const SpectralSpace& space, const FrictionModel& friction,
                    double dt_max = 1e-2, double wave_cfl = 0.5, double damping_resolution = 0.25);

/// One step from base noise index n: half damping, forcing and noise kick, half damping, group.
PhaseState wave_step(const PhaseState& state, const WaveRunConfig& config, const NoisePath& path,
                     std::int64_t n);

struct Snapshot {
  double t = 0.0;
  Field u;
  Field v;
};

struct WaveTrajectory {
  std::vector<Snapshot> snapshots;
  EnergyLedger ledger;
  PhaseState final_state;
};

WaveTrajectory simulate_wave(const WaveRunConfig& config, const NoisePath& path);

}  // namespace kramers
