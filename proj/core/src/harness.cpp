#include "kramers/harness.hpp"

#include "kramers/corrector.hpp"
#include "kramers/errors.hpp"
#include "kramers/io.hpp"
#include "kramers/noise.hpp"
#include "kramers/numerics.hpp"
#include "kramers/ou.hpp"
#include "kramers/parabolic.hpp"
#include "kramers/wave.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace kramers {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace

Coefficients make_coefficients(const Config& cfg, const SpacePtr& space) {
  ModelParams p;
  p.friction_perturbation = cfg.real("friction_perturbation");
  p.noise_amplitude = cfg.real("noise_amplitude");
  p.diffusion_slope = cfg.real("diffusion_slope");
  p.cutoff_radius = cfg.real("cutoff_radius");
  return model_catalog(cfg.str("model"), space, p);
}

Field default_initial_field(const SpacePtr& space, double amplitude) {
  static const double pattern[2][4] = {{1.0, -0.3, 0.1, 0.0}, {-0.5, 0.4, 0.0, 0.1}};
  Field u(space);
  for (int c = 0; c < space->n_components(); ++c)
    for (int i = 0; i < std::min(4, space->n_modes()); ++i)
      u(c, i) = amplitude * (c < 2 ? pattern[c][i] : 0.5 / ((i + 1.0) * (i + 1.0)));
  return u;
}

Field random_field(const SpacePtr& space, std::uint64_t seed, std::uint32_t stream, double scale,
                   double decay) {
  KeyedNormalStream z(seed, stream);
  Field u(space);
  for (int i = 0; i < space->n_modes(); ++i)
    for (int c = 0; c < space->n_components(); ++c)
      u(c, i) = scale * z() / std::pow(i + 1.0, decay);
  return u;
}

int steps_multiple(int base_steps, double base_dt, double dt_bound) {
  int best = 1;
  for (int m = 1; m <= base_steps; ++m)
    if (base_steps % m == 0 && m * base_dt <= dt_bound * (1.0 + 1e-12)) best = m;
  return best;
}

ExperimentSetup make_setup(const Config& cfg) {
  cfg.validate();
  ExperimentSetup s;
  s.space = SpectralSpace::build(cfg.real("length"), static_cast<int>(cfg.integer("modes")),
                                 static_cast<int>(cfg.integer("components")));
  s.coefficients = make_coefficients(cfg, s.space);
  s.initial = default_initial_field(s.space, cfg.real("initial_amplitude"));
  s.horizon = cfg.real("horizon");
  s.snapshots = static_cast<int>(cfg.integer("snapshots"));
  const double interval = s.horizon / s.snapshots;

  s.base_steps = static_cast<int>(cfg.integer("base_steps_per_snapshot"));
  if (s.base_steps == 0) {
    double finest = cfg.real("limit_dt");
    for (double mu : cfg.real_list("mu_grid"))
      finest = std::min(finest, wave_dt_rule(mu, *s.space, s.coefficients.friction,
                                             cfg.real("wave_dt_max"), cfg.real("wave_cfl"),
                                             cfg.real("damping_resolution")));
    s.base_steps = 120;
    while (interval / s.base_steps > finest * (1.0 + 1e-12)) s.base_steps *= 2;
  }
  s.base_dt = interval / s.base_steps;
  return s;
}

// ---------------------------------------------------------------------------

bool SweepReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const ArmSummary& SweepReport::summary(const std::string& arm, double mu) const {
  for (const auto& s : summaries)
    if (s.arm == arm && s.mu == mu) return s;
  throw InvalidConfig("sweep report: no summary for arm '" + arm + "' at mu " + format_real(mu));
}

namespace {

struct ReplicaResult {
  std::vector<SweepRow> rows;  // arm-major, then mu
};

ReplicaResult run_replica(const Config& cfg, const ExperimentSetup& setup,
                          const std::vector<std::string>& arms, int replica) {
  const auto grid = cfg.real_list("mu_grid");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.integer("seed")) + replica;
  const int r = setup.space->n_components();
  const int n = setup.space->n_modes();
  const NoisePath path(seed, setup.base_dt, setup.horizon, r, n);
  const std::uint64_t checksum = path.checksum();
  const double varrho = cfg.real("varrho");
  const double vartheta = cfg.real("vartheta");
  const double p = cfg.real("p_exponent");
  const bool keep_snapshots = cfg.boolean("write_snapshots");
  const std::string out_dir = cfg.str("output_dir");

  // Limit trajectories, one per arm.
  const int limit_m = steps_multiple(setup.base_steps, setup.base_dt, cfg.real("limit_dt"));
  std::vector<LimitTrajectory> limits(arms.size());
  std::vector<std::string> limit_status(arms.size(), "ok");
  std::vector<double> limit_seconds(arms.size(), 0.0);
  for (std::size_t a = 0; a < arms.size(); ++a) {
    LimitRunConfig lc;
    lc.dt = limit_m * setup.base_dt;
    lc.horizon = setup.horizon;
    lc.initial = setup.initial;
    lc.coefficients = setup.coefficients;
    lc.include_drift = arms[a] == "with_drift";
    lc.drift_method = parse_drift_method(cfg.str("drift_method"));
    lc.drift_lag = static_cast<int>(cfg.integer("drift_lag"));
    lc.noise_multiple = limit_m;
    lc.snapshot_stride = setup.base_steps / limit_m;
    const auto t0 = Clock::now();
    try {
      limits[a] = simulate_limit(lc, path);
    } catch (const std::exception& e) {
      limit_status[a] = std::string("limit_failed: ") + e.what();
    }
    limit_seconds[a] = seconds_since(t0);
    if (keep_snapshots && limit_status[a] == "ok") {
      std::vector<SnapshotRow> rows;
      for (const auto& s : limits[a].snapshots) rows.push_back({s.t, &s.u, nullptr});
      write_snapshots(out_dir + "/snapshots/limit_" + arms[a] + "_replica" + std::to_string(replica) + ".csv",
                      {cfg.hash(), seed, 0.0, n, r}, rows);
    }
  }

  ReplicaResult out;
  std::vector<std::vector<SweepRow>> by_arm(arms.size());
  for (double mu : grid) {
    const double bound = wave_dt_rule(mu, *setup.space, setup.coefficients.friction,
                                      cfg.real("wave_dt_max"), cfg.real("wave_cfl"),
                                      cfg.real("damping_resolution"));
    const int m = steps_multiple(setup.base_steps, setup.base_dt, bound);
    WaveRunConfig wc;
    wc.dt = m * setup.base_dt;
    wc.horizon = setup.horizon;
    wc.initial = PhaseState(setup.initial, Field(setup.space), mu);
    wc.coefficients = setup.coefficients;
    wc.noise_multiple = m;
    wc.snapshot_stride = setup.base_steps / m;

    WaveTrajectory wave;
    std::string wave_status = "ok";
    const auto t0 = Clock::now();
    try {
      wave = simulate_wave(wc, path);
      if (!wave.ledger.all_finite()) wave_status = "wave_failed: non-finite ledger";
    } catch (const std::exception& e) {
      wave_status = std::string("wave_failed: ") + e.what();
    }
    const double wave_seconds = seconds_since(t0);
    if (keep_snapshots && wave_status == "ok") {
      std::vector<SnapshotRow> rows;
      for (const auto& s : wave.snapshots) rows.push_back({s.t, &s.u, &s.v});
      write_snapshots(out_dir + "/snapshots/wave_mu" + format_real(mu) + "_replica" +
                          std::to_string(replica) + ".csv",
                      {cfg.hash(), seed, mu, n, r}, rows);
    }

    for (std::size_t a = 0; a < arms.size(); ++a) {
      SweepRow row;
      row.arm = arms[a];
      row.mu = mu;
      row.replica = replica;
      row.seed = seed;
      row.path_checksum = checksum;
      row.wave_dt = wc.dt;
      row.limit_dt = limit_m * setup.base_dt;
      row.wall_seconds = wave_seconds + limit_seconds[a] / grid.size();
      if (wave_status != "ok" || limit_status[a] != "ok") {
        row.flagged = true;
        row.status = wave_status != "ok" ? wave_status : limit_status[a];
        row.sup_error = row.int_error = row.error = NAN;
      } else {
        const auto& ws = wave.snapshots;
        const auto& ls = limits[a].snapshots;
        if (ws.size() != ls.size())
          throw NumericError("sweep: wave and limit snapshot grids differ");
        std::vector<double> t(ws.size()), integrand(ws.size());
        double sup = 0.0;
        for (std::size_t k = 0; k < ws.size(); ++k) {
          const Field diff = ws[k].u - ls[k].u;
          sup = std::max(sup, sobolev_norm(diff, varrho));
          t[k] = ws[k].t;
          integrand[k] = std::pow(sobolev_norm(diff, vartheta), p);
        }
        row.sup_error = sup;
        row.int_error = trapezoid(t, integrand);
        row.error = row.sup_error + row.int_error;
        const auto& lg = wave.ledger;
        row.sup_u_h0_sq = lg.sup_u_sq[0];
        row.int_u_h1_sq = lg.int_u_sq[1];
        row.sup_u_h1_sq = lg.sup_u_sq[1];
        row.sup_u_h2_sq = lg.sup_u_sq[2];
        row.int_kinetic_h0 = lg.int_kinetic[1];
        row.sup_v_h1_sq = lg.sup_velocity_h1_sq;
        row.limit_sup_u_h1_sq = limits[a].ledger.sup_u_h1_sq;
        row.limit_int_u_h2_sq = limits[a].ledger.int_u_h2_sq;
      }
      by_arm[a].push_back(std::move(row));
    }
  }
  for (auto& rows : by_arm)
    for (auto& row : rows) out.rows.push_back(std::move(row));
  return out;
}

void summarise(SweepReport& report, const Config& cfg, const std::vector<std::string>& arms) {
  const auto grid = cfg.real_list("mu_grid");
  const double eta = cfg.real("eta");
  for (const auto& arm : arms)
    for (double mu : grid) {
      ArmSummary s;
      s.arm = arm;
      s.mu = mu;
      std::vector<double> errs;
      for (const auto& row : report.rows) {
        if (row.arm != arm || row.mu != mu) continue;
        if (row.flagged) {
          ++s.flagged;
          continue;
        }
        errs.push_back(row.error);
      }
      s.valid = static_cast<int>(errs.size());
      if (!errs.empty()) {
        s.q25 = quantile(errs, 0.25);
        s.median = median(errs);
        s.q75 = quantile(errs, 0.75);
        s.iqr = s.q75 - s.q25;
        int above = 0;
        for (double e : errs) above += e > eta;
        s.fraction_above_eta = static_cast<double>(above) / errs.size();
      } else {
        s.q25 = s.median = s.q75 = s.iqr = NAN;
      }
      report.summaries.push_back(s);
    }

  // Waves are shared by the arms, so the first arm's rows carry every ledger.
  for (double mu : grid) {
    DiagnosticSummary d;
    d.mu = mu;
    CompensatedSum e_h, k_h, s1, s2, v1;
    int count = 0;
    for (const auto& row : report.rows) {
      if (row.arm != arms.front() || row.mu != mu) continue;
      if (row.flagged) {
        if (row.status.rfind("wave_failed", 0) == 0) d.all_finite = false;
        continue;
      }
      e_h.add(row.sup_u_h0_sq + row.int_u_h1_sq);
      k_h.add(row.int_kinetic_h0);
      s1.add(row.sup_u_h1_sq);
      s2.add(row.sup_u_h2_sq);
      v1.add(row.sup_v_h1_sq);
      ++count;
    }
    if (count > 0) {
      d.energy_h = e_h.value() / count;
      d.kinetic_h = k_h.value() / count;
      d.sup_h1 = s1.value() / count;
      d.sqrt_mu_sup_h2 = std::sqrt(mu) * s2.value() / count;
      d.mu2_sup_v_h1 = mu * mu * v1.value() / count;
    } else {
      d.all_finite = false;
    }
    for (double x : {d.energy_h, d.kinetic_h, d.sup_h1, d.sqrt_mu_sup_h2, d.mu2_sup_v_h1})
      d.all_finite = d.all_finite && std::isfinite(x);
    report.diagnostics.push_back(d);
  }
}

// Short form for check details; the full precision lives in rows.csv.
std::string brief(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string join_values(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? ", " : "") + brief(xs[k]);
  return s;
}

// Allows each successive value to exceed its predecessor by `slack` relative.
bool nonincreasing_within(const std::vector<double>& xs, double slack) {
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (!(xs[k] <= (1.0 + slack) * xs[k - 1])) return false;
  return true;
}

}  // namespace

SweepReport run_ensemble(const Config& cfg, const std::vector<std::string>& arms) {
  if (arms.empty()) throw InvalidConfig("run_ensemble: no arms requested");
  for (const auto& a : arms)
    if (a != "with_drift" && a != "without_drift")
      throw InvalidConfig("run_ensemble: unknown arm '" + a + "'");
  const ExperimentSetup setup = make_setup(cfg);
  const int replicas = static_cast<int>(cfg.integer("replicas"));
  const int threads = std::max(1, std::min<int>(static_cast<int>(cfg.integer("threads")), replicas));
  if (cfg.boolean("write_snapshots"))
    std::filesystem::create_directories(cfg.str("output_dir") + "/snapshots");

  std::vector<ReplicaResult> results(replicas);
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (int k; (k = next.fetch_add(1)) < replicas;) {
      try {
        results[k] = run_replica(cfg, setup, arms, k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SweepReport report;
  report.config_hash = cfg.hash();
  // Deterministic ordering: arm, mu, replica.
  const auto grid = cfg.real_list("mu_grid");
  for (const auto& arm : arms)
    for (double mu : grid)
      for (const auto& res : results)
        for (const auto& row : res.rows)
          if (row.arm == arm && row.mu == mu) report.rows.push_back(row);
  summarise(report, cfg, arms);
  return report;
}

void add_convergence_checks(SweepReport& report, const Config& cfg) {
  const auto grid = cfg.real_list("mu_grid");
  const std::string arm = "with_drift";
  int flagged = 0, total = 0;
  for (const auto& row : report.rows)
    if (row.arm == arm) {
      ++total;
      flagged += row.flagged;
    }
  const double frac = total ? static_cast<double>(flagged) / total : 1.0;
  report.checks.push_back({"flagged_fraction", frac <= cfg.real("max_flagged_fraction"),
                           std::to_string(flagged) + " of " + std::to_string(total) + " rows flagged"});

  std::vector<double> med, above;
  for (double mu : grid) {
    med.push_back(report.summary(arm, mu).median);
    above.push_back(report.summary(arm, mu).fraction_above_eta);
  }
  int inversions = 0;
  bool finite = true;
  for (std::size_t k = 0; k < med.size(); ++k) {
    finite = finite && std::isfinite(med[k]);
    if (k && !(med[k] < med[k - 1])) ++inversions;
  }
  report.checks.push_back({"median_error_decreasing",
                           finite && inversions <= cfg.integer("max_inversions"),
                           "medians [" + join_values(med) + "], " + std::to_string(inversions) + " inversion(s)"});
  const double ratio = med.front() / med.back();
  report.checks.push_back({"median_error_ratio", finite && ratio > cfg.real("pass_ratio"),
                           "median(largest mu) / median(smallest mu) = " + brief(ratio) +
                               ", required > " + brief(cfg.real("pass_ratio"))});
  int rises = 0;
  for (std::size_t k = 1; k < above.size(); ++k) rises += above[k] > above[k - 1];
  report.checks.push_back({"eta_fraction_trend", rises <= cfg.integer("max_inversions"),
                           "P(error > eta) [" + join_values(above) + "]"});
}

void add_ablation_checks(SweepReport& report, const Config& cfg) {
  const auto grid = cfg.real_list("mu_grid");
  std::string detail;
  for (double mu : grid) {
    const double gap = report.summary("without_drift", mu).median - report.summary("with_drift", mu).median;
    detail += (detail.empty() ? "" : ", ") + std::string("gap(") + brief(mu) + ") = " + brief(gap);
  }
  const double mu = grid.back();
  const auto& with = report.summary("with_drift", mu);
  const auto& without = report.summary("without_drift", mu);
  const double gap = without.median - with.median;
  report.checks.push_back({"ablation_gap", std::isfinite(gap) && gap > with.iqr,
                           "at mu = " + brief(mu) + ": gap " + brief(gap) + " vs IQR " +
                               brief(with.iqr) + "; " + detail});
}

void add_diagnostic_checks(SweepReport& report, const Config& cfg) {
  const double slack = cfg.real("energy_slack");
  bool finite = true;
  std::vector<double> e, k, h2, v1;
  for (const auto& d : report.diagnostics) {
    finite = finite && d.all_finite;
    e.push_back(d.energy_h);
    k.push_back(d.kinetic_h);
    h2.push_back(d.sqrt_mu_sup_h2);
    v1.push_back(d.mu2_sup_v_h1);
  }
  report.checks.push_back({"functionals_finite", finite, "every monitored functional finite on every replica"});
  report.checks.push_back({"sqrt_mu_sup_h2_nonincreasing", finite && nonincreasing_within(h2, slack),
                           "sqrt(mu) E sup ||u||_{H^2}^2 = [" + join_values(h2) + "]"});
  report.checks.push_back({"mu2_sup_velocity_h1_nonincreasing", finite && nonincreasing_within(v1, slack),
                           "mu^2 E sup ||du/dt||_{H^1}^2 = [" + join_values(v1) + "]"});
  // Uniform-in-mu bounds: no more than doubling relative to the largest mass.
  auto bounded = [](const std::vector<double>& xs) {
    for (double x : xs)
      if (!(x <= 2.0 * xs.front())) return false;
    return true;
  };
  report.checks.push_back({"energy_h_bounded", finite && bounded(e),
                           "E sup ||u||_H^2 + int E ||u||_{H^1}^2 = [" + join_values(e) + "]"});
  report.checks.push_back({"kinetic_h_bounded", finite && bounded(k),
                           "mu int E ||du/dt||_H^2 = [" + join_values(k) + "]"});
}

SweepReport run_convergence_sweep(const Config& cfg) {
  SweepReport report = run_ensemble(cfg, {"with_drift"});
  report.command = "sweep";
  add_convergence_checks(report, cfg);
  return report;
}

SweepReport run_drift_ablation(const Config& cfg) {
  SweepReport report = run_ensemble(cfg, {"with_drift", "without_drift"});
  report.command = "ablation";
  add_ablation_checks(report, cfg);
  return report;
}

SweepReport run_diagnostics(const Config& cfg) {
  SweepReport report = run_ensemble(cfg, {"with_drift"});
  report.command = "diagnostics";
  add_diagnostic_checks(report, cfg);
  return report;
}

// ---------------------------------------------------------------------------

std::string rows_csv(const SweepReport& report) {
  std::string out = csv_line({"arm", "mu", "replica", "seed", "path_checksum", "config_hash", "wave_dt",
                              "limit_dt", "status", "sup_error", "int_error", "error", "sup_u_h0_sq",
                              "int_u_h1_sq", "sup_u_h1_sq", "sup_u_h2_sq", "int_kinetic_h0",
                              "sup_v_h1_sq", "limit_sup_u_h1_sq", "limit_int_u_h2_sq"});
  for (const auto& r : report.rows) {
    std::string status = r.status;
    for (char& c : status)
      if (c == ',' || c == '\n') c = ';';
    out += csv_line({r.arm, format_real(r.mu), std::to_string(r.replica), std::to_string(r.seed),
                     hex64(r.path_checksum), report.config_hash, format_real(r.wave_dt),
                     format_real(r.limit_dt), status, format_real(r.sup_error), format_real(r.int_error),
                     format_real(r.error), format_real(r.sup_u_h0_sq), format_real(r.int_u_h1_sq),
                     format_real(r.sup_u_h1_sq), format_real(r.sup_u_h2_sq), format_real(r.int_kinetic_h0),
                     format_real(r.sup_v_h1_sq), format_real(r.limit_sup_u_h1_sq),
                     format_real(r.limit_int_u_h2_sq)});
  }
  return out;
}

void write_report(const SweepReport& report, const Config& cfg, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw InvalidConfig("write_report: cannot write '" + (fs::path(dir) / name).string() + "'");
    out << text;
  };
  write("rows.csv", rows_csv(report));
  write("config.cfg", cfg.canonical());

  using nlohmann::ordered_json;
  auto num = [](double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); };
  ordered_json summary;
  summary["command"] = report.command;
  summary["config_hash"] = report.config_hash;
  summary["pass"] = report.pass();
  summary["summaries"] = ordered_json::array();
  for (const auto& s : report.summaries)
    summary["summaries"].push_back({{"arm", s.arm}, {"mu", s.mu}, {"valid", s.valid}, {"flagged", s.flagged},
                                    {"q25", num(s.q25)}, {"median", num(s.median)}, {"q75", num(s.q75)},
                                    {"iqr", num(s.iqr)}, {"fraction_above_eta", s.fraction_above_eta}});
  summary["diagnostics"] = ordered_json::array();
  for (const auto& d : report.diagnostics)
    summary["diagnostics"].push_back({{"mu", d.mu}, {"energy_h", num(d.energy_h)}, {"kinetic_h", num(d.kinetic_h)},
                                      {"sup_h1", num(d.sup_h1)}, {"sqrt_mu_sup_h2", num(d.sqrt_mu_sup_h2)},
                                      {"mu2_sup_v_h1", num(d.mu2_sup_v_h1)}, {"all_finite", d.all_finite}});
  summary["checks"] = ordered_json::array();
  for (const auto& c : report.checks)
    summary["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  write("summary.json", summary.dump(2) + "\n");

  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  ordered_json meta;
  meta["written_at"] = stamp;
  meta["config_hash"] = report.config_hash;
  double total = 0.0;
  meta["row_wall_seconds"] = ordered_json::array();
  for (const auto& r : report.rows) {
    meta["row_wall_seconds"].push_back(r.wall_seconds);
    total += r.wall_seconds;
  }
  meta["total_wall_seconds"] = total;
  write("metadata.json", meta.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

std::vector<CorrectorRow> run_corrector_battery(const Config& cfg, const std::vector<double>& mus,
                                                int n_cases) {
  cfg.validate();
  const SpacePtr space = SpectralSpace::build(cfg.real("length"), static_cast<int>(cfg.integer("modes")),
                                              static_cast<int>(cfg.integer("components")));
  const Coefficients co = make_coefficients(cfg, space);
  const auto seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  QuadratureOptions quad{static_cast<int>(cfg.integer("quadrature_nodes")), cfg.real("quadrature_horizon")};

  std::vector<CorrectorRow> rows;
  for (int k = 0; k < n_cases; ++k) {
    const Field u = random_field(space, seed + k, 101, 0.5);
    const Field v = random_field(space, seed + k, 202, 1.0, 1.0);
    const Field h = random_field(space, seed + k, 303, 1.0, 1.0);
    const CorrectorContext ctx(co, u, h, cfg.real("delta"), quad);

    const double r1 = std::abs(generator_identity_phi1(ctx, v));
    rows.push_back({"phi1_generator", 0.0, k, r1, 1e-11, r1 < 1e-11});
    const StationaryMean sm = stationary_mean_psi(ctx);
    const double r3 = std::abs(sm.difference());
    rows.push_back({"stationary_mean", 0.0, k, r3, 1e-10, r3 < 1e-10});
    for (double mu : mus) {
      const double r2 = std::abs(resolvent_identity_phi2(ctx, v, mu));
      rows.push_back({"phi2_resolvent", mu, k, r2, 1e-6, r2 < 1e-6});
      // Node doubling 4 -> 8; 8 nodes already sit near round-off, hence the floor.
      const double coarse = std::abs(resolvent_identity_phi2(ctx, v, mu, 4));
      const double fine = std::abs(resolvent_identity_phi2(ctx, v, mu, 8));
      const double tol = std::max(coarse / 4.0, 1e-13);
      rows.push_back({"phi2_node_doubling", mu, k, fine, tol, fine <= tol});
    }
  }
  return rows;
}

DriftCrossCheck drift_cross_check(const Config& cfg, const Field& u, std::uint64_t seed) {
  const Coefficients co = make_coefficients(cfg, u.space());
  const OuKernel kernel = OuKernel::build(co, u);
  DriftCrossCheck out;
  out.spectral = drift_spectral(co, u, kernel);
  out.trace = drift_trace(co, u, kernel);

  Field direction = out.spectral.value;
  const double norm = direction.coeffs().norm();
  if (norm > 0.0) {
    direction *= 1.0 / norm;
  } else {
    direction = Field::basis(u.space(), 0, 0);
  }

  MonteCarloOptions mc;
  mc.n_samples = cfg.integer("mc_samples");
  mc.seed = seed;
  mc.projection = direction;
  out.monte_carlo = drift_monte_carlo(co, u, kernel, mc);

  ErgodicOptions eo;
  eo.n_steps = cfg.integer("ergodic_steps");
  eo.seed = seed;
  eo.projection = direction;
  out.ergodic = stationary_process_oracle(co, u, kernel, eo);

  out.mc_vs_spectral = agreement(out.monte_carlo, out.spectral, direction);
  out.ergodic_vs_spectral = agreement(out.ergodic, out.spectral, direction);
  out.mc_vs_ergodic = agreement(out.monte_carlo, out.ergodic, direction);
  return out;
}

}  // namespace kramers
