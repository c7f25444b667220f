#pragma once

// Limit equation
//   du = [g_R^{-1}(u) (Laplacian u + f_R(u)) + S_R(u)] dt + g_R^{-1}(u) sigma_R(u) dW^Q
// stepped semi-implicitly: M = g_R^{-1}(u_n) is frozen and the Laplacian is
// taken implicitly, which leaves one r x r solve per mode.

#include "kramers/coefficients.hpp"
#include "kramers/drift.hpp"
#include "kramers/noise.hpp"
#include "kramers/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace kramers {

struct LimitRunConfig {
  double dt = 0.0;
  double horizon = 0.0;
  Field initial;
  Coefficients coefficients;
  bool include_drift = true;
  DriftMethod drift_method = DriftMethod::trace;
  /// Recompute S every `drift_lag` steps (1 = every step).
  int drift_lag = 1;
  int noise_multiple = 1;
  int snapshot_stride = 100;
  bool record_ledger = true;
};

struct LimitLedger {
  double sup_u_h1_sq = 0.0;
  double int_u_h2_sq = 0.0;
  double max_solve_residual = 0.0;
  bool all_finite() const {
    return std::isfinite(sup_u_h1_sq) && std::isfinite(int_u_h2_sq) &&
           std::isfinite(max_solve_residual);
  }
};

struct LimitSnapshot {
  double t = 0.0;
  Field u;
};

struct LimitTrajectory {
  std::vector<LimitSnapshot> snapshots;
  LimitLedger ledger;
  Field final_state;
};

/// One step from base noise index n.  `drift` is the S_R(u_n) to use (ignored when
/// include_drift is false); the residual of the per-mode solves is reported through `residual`.
Field limit_step(const Field& u, const LimitRunConfig& config, const NoisePath& path,
                 std::int64_t n, const Field* drift = nullptr, double* residual = nullptr);

LimitTrajectory simulate_limit(const LimitRunConfig& config, const NoisePath& path);

}  // namespace kramers
