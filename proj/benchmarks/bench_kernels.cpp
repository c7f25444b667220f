// Hot kernels at the default resolution (r = 2); the mode count is the benchmark argument.

#include "kramers/corrector.hpp"
#include "kramers/drift.hpp"
#include "kramers/harness.hpp"
#include "kramers/noise.hpp"
#include "kramers/ou.hpp"
#include "kramers/parabolic.hpp"
#include "kramers/wave.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace kramers;

namespace {

struct Fixture {
  SpacePtr space;
  Coefficients co;
  Field u;
  explicit Fixture(int n)
      : space(SpectralSpace::build(M_PI, n, 2)),
        co(default_coefficients(space)),
        u(random_field(space, 7, 101, 0.5)) {}
};

void BM_WaveStep(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const double mu = 1e-3;
  WaveRunConfig cfg;
  cfg.dt = wave_dt_rule(mu, *f.space, f.co.friction);
  cfg.horizon = 1000 * cfg.dt;
  cfg.initial = PhaseState{f.u, Field(f.space), mu};
  cfg.coefficients = f.co;
  const NoisePath path(1, cfg.dt, cfg.horizon, 2, f.space->n_modes());
  PhaseState s = cfg.initial;
  std::int64_t n = 0;
  for (auto _ : state) {
    s = wave_step(s, cfg, path, n);
    n = (n + 1) % path.n_steps();
    benchmark::DoNotOptimize(s.u.coeffs().data());
  }
}
BENCHMARK(BM_WaveStep)->Arg(16)->Arg(32)->Arg(64);

void BM_LimitStep(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  LimitRunConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 1.0;
  cfg.initial = f.u;
  cfg.coefficients = f.co;
  const NoisePath path(1, cfg.dt, cfg.horizon, 2, f.space->n_modes());
  Field u = f.u;
  std::int64_t n = 0;
  for (auto _ : state) {
    u = limit_step(u, cfg, path, n);
    n = (n + 1) % path.n_steps();
    benchmark::DoNotOptimize(u.coeffs().data());
  }
}
BENCHMARK(BM_LimitStep)->Arg(16)->Arg(32)->Arg(64);

void BM_OuKernelBuild(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(OuKernel::build(f.co, f.u));
}
BENCHMARK(BM_OuKernelBuild)->Arg(16)->Arg(32)->Arg(64);

void BM_DriftTrace(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const OuKernel k = OuKernel::build(f.co, f.u);
  for (auto _ : state) benchmark::DoNotOptimize(drift_trace(f.co, f.u, k));
}
BENCHMARK(BM_DriftTrace)->Arg(16)->Arg(32)->Arg(64);

void BM_DriftSpectral(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const OuKernel k = OuKernel::build(f.co, f.u);
  for (auto _ : state) benchmark::DoNotOptimize(drift_spectral(f.co, f.u, k));
}
BENCHMARK(BM_DriftSpectral)->Arg(16)->Arg(32);

void BM_Phi2Form(benchmark::State& state) {
  const Fixture f(32);
  const CorrectorContext ctx(f.co, f.u, random_field(f.space, 7, 303, 1.0, 1.0));
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(phi2_form(ctx, 1e-3, nodes));
}
BENCHMARK(BM_Phi2Form)->Arg(8)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
