#pragma once

// Experiment orchestration: coupled wave / limit ensembles over a mass grid,
// the drift ablation, energy diagnostics, corrector and drift cross-checks.
// Everything reported is a deterministic function of the Config; wall-clock
// data goes to a separate metadata file.

#include "kramers/coefficients.hpp"
#include "kramers/config.hpp"
#include "kramers/drift.hpp"
#include "kramers/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kramers {

/// Everything derived from a Config that the integrators need.
struct ExperimentSetup {
  SpacePtr space;
  Coefficients coefficients;
  Field initial;
  double horizon = 1.0;
  int snapshots = 200;
  /// Base noise steps per snapshot interval.
  int base_steps = 0;
  double base_dt = 0.0;
};

ExperimentSetup make_setup(const Config& cfg);
/// Model catalog entry selected by the config.
Coefficients make_coefficients(const Config& cfg, const SpacePtr& space);
/// Default smooth band-limited initial field (finite norm in every H^s).
Field default_initial_field(const SpacePtr& space, double amplitude);
/// Largest divisor m of base_steps with m * base_dt <= dt_bound (at least 1).
int steps_multiple(int base_steps, double base_dt, double dt_bound);

struct SweepRow {
  std::string arm;            // "with_drift" or "without_drift"
  double mu = 0.0;
  int replica = 0;
  std::uint64_t seed = 0;
  std::uint64_t path_checksum = 0;
  double wave_dt = 0.0;
  double limit_dt = 0.0;
  bool flagged = false;
  std::string status = "ok";
  double sup_error = 0.0;     // sup_k ||u_mu - u||_{H^varrho}
  double int_error = 0.0;     // trapezoid of ||u_mu - u||^p_{H^vartheta}
  double error = 0.0;
  // wave ledger
  double sup_u_h0_sq = 0.0;
  double int_u_h1_sq = 0.0;
  double sup_u_h1_sq = 0.0;
  double sup_u_h2_sq = 0.0;
  double int_kinetic_h0 = 0.0;   // mu int ||v||_H^2
  double sup_v_h1_sq = 0.0;
  // limit ledger
  double limit_sup_u_h1_sq = 0.0;
  double limit_int_u_h2_sq = 0.0;
  double wall_seconds = 0.0;     // metadata only
};

struct ArmSummary {
  std::string arm;
  double mu = 0.0;
  int valid = 0;
  int flagged = 0;
  double q25 = 0.0, median = 0.0, q75 = 0.0, iqr = 0.0;
  double fraction_above_eta = 0.0;
};

struct DiagnosticSummary {
  double mu = 0.0;
  double energy_h = 0.0;            // E sup ||u||_H^2 + int E ||u||_{H^1}^2
  double kinetic_h = 0.0;           // mu int E ||v||_H^2
  double sup_h1 = 0.0;              // E sup ||u||_{H^1}^2
  double sqrt_mu_sup_h2 = 0.0;      // sqrt(mu) E sup ||u||_{H^2}^2
  double mu2_sup_v_h1 = 0.0;        // mu^2 E sup ||v||_{H^1}^2
  bool all_finite = true;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SweepReport {
  std::string command;
  std::string config_hash;
  std::vector<SweepRow> rows;
  std::vector<ArmSummary> summaries;
  std::vector<DiagnosticSummary> diagnostics;
  std::vector<Check> checks;
  bool pass() const;
  const ArmSummary& summary(const std::string& arm, double mu) const;
};

/// Coupled ensemble for each requested arm; waves are shared across arms.
SweepReport run_ensemble(const Config& cfg, const std::vector<std::string>& arms);

/// Convergence of median errors along the mass grid.
SweepReport run_convergence_sweep(const Config& cfg);
/// Limit with and without the noise-induced drift.
SweepReport run_drift_ablation(const Config& cfg);
/// Energy functionals of the wave ensembles.
SweepReport run_diagnostics(const Config& cfg);

/// Adds the checks of each experiment to a report produced by run_ensemble.
void add_convergence_checks(SweepReport& report, const Config& cfg);
void add_ablation_checks(SweepReport& report, const Config& cfg);
void add_diagnostic_checks(SweepReport& report, const Config& cfg);

/// rows.csv, summary.json, config.cfg and metadata.json (timestamps, wall times).
void write_report(const SweepReport& report, const Config& cfg, const std::string& dir);
/// rows.csv content alone.
std::string rows_csv(const SweepReport& report);

struct CorrectorRow {
  std::string identity;
  double mu = 0.0;
  int case_index = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// phi1 generator identity, phi2 resolvent identity and stationary mean over random batteries.
std::vector<CorrectorRow> run_corrector_battery(const Config& cfg, const std::vector<double>& mus,
                                                int n_cases);

struct DriftCrossCheck {
  DriftResult spectral;
  DriftResult trace;
  DriftResult monte_carlo;
  DriftResult ergodic;
  AgreementStats mc_vs_spectral;
  AgreementStats ergodic_vs_spectral;
  AgreementStats mc_vs_ergodic;
};

DriftCrossCheck drift_cross_check(const Config& cfg, const Field& u, std::uint64_t seed);

/// Random field with coefficients decaying like i^{-decay}, scaled by `scale`.
Field random_field(const SpacePtr& space, std::uint64_t seed, std::uint32_t stream, double scale,
                   double decay = 2.0);

}  // namespace kramers
