// Command-line driver: single runs, drift cross-checks, sweeps and validations.

#include "kramers/config.hpp"
#include "kramers/corrector.hpp"
#include "kramers/errors.hpp"
#include "kramers/harness.hpp"
#include "kramers/io.hpp"
#include "kramers/noise.hpp"
#include "kramers/parabolic.hpp"
#include "kramers/wave.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace kramers;

struct CommonOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_common(CLI::App* app, CommonOptions& opt) {
  app->add_option("--config", opt.config_path, "flat key = value config file");
  for (const auto& key : config_schema()) {
    app->add_option_function<std::string>(
        "--" + key.name, [&opt, name = key.name](const std::string& v) { opt.overrides[name] = v; },
        key.doc + " [" + to_string(key.type) + ", default " + key.default_value + "]");
  }
}

Config load(const CommonOptions& opt) {
  Config cfg = opt.config_path.empty() ? Config() : Config::from_file(opt.config_path);
  for (const auto& [k, v] : opt.overrides) cfg.set(k, v);
  cfg.validate();
  return cfg;
}

void print_checks(const SweepReport& report) {
  for (const auto& c : report.checks)
    std::printf("%-36s %s  %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL", c.detail.c_str());
}

void print_summaries(const SweepReport& report) {
  std::printf("%-14s %-8s %6s %6s %14s %14s %14s\n", "arm", "mu", "valid", "flag", "q25", "median", "q75");
  for (const auto& s : report.summaries)
    std::printf("%-14s %-8g %6d %6d %14.6e %14.6e %14.6e\n", s.arm.c_str(), s.mu, s.valid, s.flagged, s.q25,
                s.median, s.q75);
}

int finish_sweep(const SweepReport& report, const Config& cfg) {
  write_report(report, cfg, cfg.str("output_dir"));
  print_summaries(report);
  print_checks(report);
  std::printf("report written to %s (config %s)\n", cfg.str("output_dir").c_str(), report.config_hash.c_str());
  return report.pass() ? 0 : 1;
}

Field initial_from(const std::string& source, const ExperimentSetup& setup) {
  if (source.empty() || source == "default") return setup.initial;
  const std::string prefix = "from-file:";
  if (source.rfind(prefix, 0) == 0) return read_field(source.substr(prefix.size()), setup.space);
  throw InvalidConfig("field source must be 'default' or 'from-file:<path>', got '" + source + "'");
}

int cmd_simulate_wave(const Config& cfg, double mu, int replica) {
  const ExperimentSetup setup = make_setup(cfg);
  const auto seed = static_cast<std::uint64_t>(cfg.integer("seed")) + replica;
  const NoisePath path(seed, setup.base_dt, setup.horizon, setup.space->n_components(), setup.space->n_modes());
  const double bound = wave_dt_rule(mu, *setup.space, setup.coefficients.friction, cfg.real("wave_dt_max"),
                                    cfg.real("wave_cfl"), cfg.real("damping_resolution"));
  const int m = steps_multiple(setup.base_steps, setup.base_dt, bound);
  WaveRunConfig wc;
  wc.dt = m * setup.base_dt;
  wc.horizon = setup.horizon;
  wc.initial = PhaseState(setup.initial, Field(setup.space), mu);
  wc.coefficients = setup.coefficients;
  wc.noise_multiple = m;
  wc.snapshot_stride = setup.base_steps / m;
  const WaveTrajectory traj = simulate_wave(wc, path);

  const std::string dir = cfg.str("output_dir");
  std::filesystem::create_directories(dir);
  std::vector<SnapshotRow> rows;
  for (const auto& s : traj.snapshots) rows.push_back({s.t, &s.u, &s.v});
  const std::string stem = dir + "/wave_mu" + format_real(mu) + "_replica" + std::to_string(replica);
  write_snapshots(stem + ".csv", {cfg.hash(), seed, mu, setup.space->n_modes(), setup.space->n_components()}, rows);
  std::ofstream ledger(stem + "_ledger.csv");
  ledger << csv_line({"t", "u_h0_sq", "u_h1_sq", "u_h2_sq", "kinetic_hm1", "kinetic_h0", "kinetic_h1"});
  for (const auto& e : traj.ledger.samples)
    ledger << csv_line({format_real(e.t), format_real(e.u_sq[0]), format_real(e.u_sq[1]), format_real(e.u_sq[2]),
                        format_real(e.kinetic[0]), format_real(e.kinetic[1]), format_real(e.kinetic[2])});
  std::printf("wave mu=%g dt=%g steps=%lld path=%016llx\n", mu, wc.dt,
              static_cast<long long>(std::llround(setup.horizon / wc.dt)),
              static_cast<unsigned long long>(path.checksum()));
  std::printf("sup ||u||_H^2 = %.6e  int ||u||_H1^2 = %.6e  sup ||u||_H2^2 = %.6e\n", traj.ledger.sup_u_sq[0],
              traj.ledger.int_u_sq[1], traj.ledger.sup_u_sq[2]);
  std::printf("snapshots: %s.csv\n", stem.c_str());
  return 0;
}

int cmd_simulate_limit(const Config& cfg, int replica, bool no_drift) {
  const ExperimentSetup setup = make_setup(cfg);
  const auto seed = static_cast<std::uint64_t>(cfg.integer("seed")) + replica;
  const NoisePath path(seed, setup.base_dt, setup.horizon, setup.space->n_components(), setup.space->n_modes());
  const int m = steps_multiple(setup.base_steps, setup.base_dt, cfg.real("limit_dt"));
  LimitRunConfig lc;
  lc.dt = m * setup.base_dt;
  lc.horizon = setup.horizon;
  lc.initial = setup.initial;
  lc.coefficients = setup.coefficients;
  lc.include_drift = !no_drift;
  lc.drift_method = parse_drift_method(cfg.str("drift_method"));
  lc.drift_lag = static_cast<int>(cfg.integer("drift_lag"));
  lc.noise_multiple = m;
  lc.snapshot_stride = setup.base_steps / m;
  const LimitTrajectory traj = simulate_limit(lc, path);

  const std::string dir = cfg.str("output_dir");
  std::filesystem::create_directories(dir);
  std::vector<SnapshotRow> rows;
  for (const auto& s : traj.snapshots) rows.push_back({s.t, &s.u, nullptr});
  const std::string file = dir + "/limit_" + (no_drift ? "without" : "with") + "_drift_replica" +
                           std::to_string(replica) + ".csv";
  write_snapshots(file, {cfg.hash(), seed, 0.0, setup.space->n_modes(), setup.space->n_components()}, rows);
  std::printf("limit dt=%g drift=%s path=%016llx\n", lc.dt, no_drift ? "off" : "on",
              static_cast<unsigned long long>(path.checksum()));
  std::printf("sup ||u||_H1^2 = %.6e  int ||u||_H2^2 = %.6e  max solve residual = %.3e\n",
              traj.ledger.sup_u_h1_sq, traj.ledger.int_u_h2_sq, traj.ledger.max_solve_residual);
  std::printf("snapshots: %s\n", file.c_str());
  return 0;
}

int cmd_drift(const Config& cfg, const std::string& source) {
  const ExperimentSetup setup = make_setup(cfg);
  const Field u = initial_from(source, setup);
  const DriftCrossCheck dc = drift_cross_check(cfg, u, static_cast<std::uint64_t>(cfg.integer("seed")));

  const std::string dir = cfg.str("output_dir");
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir + "/drift.csv");
  csv << csv_line({"component", "mode", "spectral", "trace", "monte_carlo", "mc_se", "ergodic", "ergodic_se"});
  std::printf("%4s %4s %14s %14s %14s %11s %14s %11s\n", "c", "mode", "spectral", "trace", "monte_carlo", "mc_se",
              "ergodic", "erg_se");
  const int r = u.space()->n_components();
  for (int i = 0; i < u.space()->n_modes(); ++i)
    for (int c = 0; c < r; ++c) {
      auto se = [&](const DriftResult& d) { return d.standard_errors.size() ? d.standard_errors(c, i) : 0.0; };
      csv << csv_line({std::to_string(c), std::to_string(i + 1), format_real(dc.spectral.value(c, i)),
                       format_real(dc.trace.value(c, i)), format_real(dc.monte_carlo.value(c, i)),
                       format_real(se(dc.monte_carlo)), format_real(dc.ergodic.value(c, i)),
                       format_real(se(dc.ergodic))});
      if (i < 8)
        std::printf("%4d %4d %14.6e %14.6e %14.6e %11.3e %14.6e %11.3e\n", c, i + 1, dc.spectral.value(c, i),
                    dc.trace.value(c, i), dc.monte_carlo.value(c, i), se(dc.monte_carlo), dc.ergodic.value(c, i),
                    se(dc.ergodic));
    }
  bool ok = true;
  auto report = [&](const char* name, const AgreementStats& a) {
    const bool pass = a.norm_ratio < 3.0 && a.projection_z < 3.0;
    ok = ok && pass;
    std::printf("%-22s norm ratio %.3f  projection z %.3f  %s\n", name, a.norm_ratio, a.projection_z,
                pass ? "PASS" : "FAIL");
  };
  report("monte_carlo/spectral", dc.mc_vs_spectral);
  report("ergodic/spectral", dc.ergodic_vs_spectral);
  report("monte_carlo/ergodic", dc.mc_vs_ergodic);
  std::printf("||S||_H1 = %.6e   max |spectral - trace| = %.3e\n", sobolev_norm(dc.spectral.value, 1.0),
              (dc.spectral.value.coeffs() - dc.trace.value.coeffs()).cwiseAbs().maxCoeff());
  return ok ? 0 : 1;
}

int cmd_validate_correctors(const Config& cfg, const std::vector<double>& mus, int cases) {
  const auto rows = run_corrector_battery(cfg, mus, cases);
  const std::string dir = cfg.str("output_dir");
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir + "/correctors.csv");
  csv << csv_line({"identity", "mu", "case", "residual", "tolerance", "pass"});
  struct Worst {
    double residual = 0.0;
    bool pass = true;
  };
  std::map<std::pair<std::string, double>, Worst> worst;
  for (const auto& r : rows) {
    csv << csv_line({r.identity, format_real(r.mu), std::to_string(r.case_index), format_real(r.residual),
                     format_real(r.tolerance), r.pass ? "1" : "0"});
    auto& w = worst[{r.identity, r.mu}];
    w.residual = std::max(w.residual, r.residual);
    w.pass = w.pass && r.pass;
  }
  bool ok = true;
  std::printf("%-22s %-8s %14s %s\n", "identity", "mu", "max residual", "");
  for (const auto& [key, w] : worst) {
    std::printf("%-22s %-8g %14.3e %s\n", key.first.c_str(), key.second, w.residual, w.pass ? "PASS" : "FAIL");
    ok = ok && w.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-mass limit experiments for damped stochastic wave systems"};
  app.require_subcommand(1);

  CommonOptions wave_opt, limit_opt, drift_opt, sweep_opt, ablation_opt, corr_opt, diag_opt;
  double wave_mu = 1e-2;
  int wave_replica = 0, limit_replica = 0, corr_cases = 20;
  bool no_drift = false;
  std::string drift_source = "default";
  std::vector<double> sweep_mu, ablation_mu, corr_mu{1e-1, 1e-2, 1e-3}, diag_mu;

  auto* wave = app.add_subcommand("simulate-wave", "integrate the wave system for one mass and replica");
  add_common(wave, wave_opt);
  wave->add_option("--mu", wave_mu, "mass");
  wave->add_option("--replica", wave_replica, "replica index (seed offset)");

  auto* limit = app.add_subcommand("simulate-limit", "integrate the limit equation for one replica");
  add_common(limit, limit_opt);
  limit->add_option("--replica", limit_replica, "replica index (seed offset)");
  limit->add_flag("--no-drift", no_drift, "drop the noise-induced drift");

  auto* drift = app.add_subcommand("drift", "noise-induced drift with Monte-Carlo and ergodic cross-checks");
  add_common(drift, drift_opt);
  drift->add_option("--u", drift_source, "'default' or from-file:<path>");

  auto* sweep = app.add_subcommand("sweep", "coupled convergence sweep over the mass grid");
  add_common(sweep, sweep_opt);
  sweep->add_option("--mu", sweep_mu, "mass grid (replaces mu_grid)")->delimiter(',');

  auto* ablation = app.add_subcommand("ablation", "limit equation with and without the noise-induced drift");
  add_common(ablation, ablation_opt);
  ablation->add_option("--mu", ablation_mu, "mass grid (replaces mu_grid)")->delimiter(',');

  auto* corr = app.add_subcommand("validate-correctors", "generator and resolvent identity residuals");
  add_common(corr, corr_opt);
  corr->add_option("--mu", corr_mu, "masses for the resolvent identity")->delimiter(',');
  corr->add_option("--cases", corr_cases, "random (u, v, h) cases");

  auto* diag = app.add_subcommand("diagnostics", "energy functionals across the mass grid");
  add_common(diag, diag_opt);
  diag->add_option("--mu", diag_mu, "mass grid (replaces mu_grid)")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  auto grid_override = [](CommonOptions& o, const std::vector<double>& mu) {
    if (!mu.empty()) {
      std::string s;
      for (double m : mu) s += (s.empty() ? "" : ",") + format_real(m);
      o.overrides["mu_grid"] = s;
    }
  };

  try {
    if (*wave) return cmd_simulate_wave(load(wave_opt), wave_mu, wave_replica);
    if (*limit) return cmd_simulate_limit(load(limit_opt), limit_replica, no_drift);
    if (*drift) return cmd_drift(load(drift_opt), drift_source);
    if (*sweep) {
      grid_override(sweep_opt, sweep_mu);
      const Config cfg = load(sweep_opt);
      return finish_sweep(run_convergence_sweep(cfg), cfg);
    }
    if (*ablation) {
      grid_override(ablation_opt, ablation_mu);
      const Config cfg = load(ablation_opt);
      return finish_sweep(run_drift_ablation(cfg), cfg);
    }
    if (*corr) return cmd_validate_correctors(load(corr_opt), corr_mu, corr_cases);
    if (*diag) {
      grid_override(diag_opt, diag_mu);
      const Config cfg = load(diag_opt);
      return finish_sweep(run_diagnostics(cfg), cfg);
    }
  } catch (const InvalidConfig& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
