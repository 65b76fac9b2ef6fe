#include <benchmark/benchmark.h>

#include <vector>

#include "solitonflow/analyze.hpp"
#include "solitonflow/integrate.hpp"
#include "solitonflow/linalg.hpp"
#include "solitonflow/seed.hpp"
#include "solitonflow/systems.hpp"

namespace {

using namespace solitonflow;

const WarpedProductSpec kSpec({1, 2, 3}, {0.0, 1.0, 1.0});
const SolitonParams kParams{0.0, -1.0};

std::vector<double> example1_state() {
  SeedConfig cfg;
  cfg.l = {6.0, 3.0};
  ZState z = soliton_seed(kSpec, kParams, cfg);
  std::vector<double> y(z.dim());
  z.pack(y);
  return y;
}

void BM_WarpedRhs(benchmark::State& state) {
  const auto y = example1_state();
  std::vector<double> dy(y.size());
  for (auto _ : state) {
    warped_z_rhs(y, dy, kSpec, kParams);
    benchmark::DoNotOptimize(dy.data());
  }
}
BENCHMARK(BM_WarpedRhs);

void BM_TwoSummandsRhs(benchmark::State& state) {
  const TwoSummandsSpec ts = TwoSummandsSpec::twistor_orbit(1);
  const std::vector<double> y = {0.5, 0.9, 6.0, 0.01, -0.1, -0.2};
  std::vector<double> dy(6);
  for (auto _ : state) {
    two_summands_z_rhs(y, dy, ts, kParams);
    benchmark::DoNotOptimize(dy.data());
  }
}
BENCHMARK(BM_TwoSummandsRhs);

void BM_XyRhs(benchmark::State& state) {
  const std::vector<double> y = {0.4, 0.2, 0.3, 0.8, 0.5, 0.6};
  std::vector<double> dy(6);
  for (auto _ : state) {
    xy_rhs(y, dy, kSpec);
    benchmark::DoNotOptimize(dy.data());
  }
}
BENCHMARK(BM_XyRhs);

void BM_Rk4Step(benchmark::State& state) {
  VectorField f = make_warped_z_field(kSpec, kParams);
  Rk4Workspace ws;
  std::vector<double> y = example1_state();
  for (auto _ : state) {
    rk4_step(f, y, 1e-6, ws);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_Rk4Step);

void BM_ScalarsFromZ(benchmark::State& state) {
  SeedConfig cfg;
  cfg.l = {6.0, 3.0};
  const ZState z = soliton_seed(kSpec, kParams, cfg);
  for (auto _ : state) {
    GeometryScalars sc = scalars_from_z(z, kSpec, kParams);
    benchmark::DoNotOptimize(sc);
  }
}
BENCHMARK(BM_ScalarsFromZ);

void BM_ConservationResidual(benchmark::State& state) {
  SeedConfig cfg;
  cfg.l = {6.0, 3.0};
  const ZState z = soliton_seed(kSpec, kParams, cfg);
  for (auto _ : state) {
    auto res = conservation_residual(z, kSpec, kParams);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_ConservationResidual);

void BM_Example1To10(benchmark::State& state) {
  SeedConfig cfg;
  cfg.l = {6.0, 3.0};
  ZState z0 = soliton_seed(kSpec, kParams, cfg);
  std::vector<double> y0(z0.dim());
  z0.pack(y0);
  VectorField f = make_warped_z_field(kSpec, kParams);
  IntegratorConfig icfg;
  icfg.h = 1e-3;
  icfg.t_max = 10.0;
  icfg.decimate = 100;
  for (auto _ : state) {
    Trajectory traj = integrate(f, y0, z0.t, icfg, make_z_probe(kSpec, kParams));
    benchmark::DoNotOptimize(traj.end_state.data());
  }
}
BENCHMARK(BM_Example1To10)->Unit(benchmark::kMillisecond);

void BM_CriticalPoints(benchmark::State& state) {
  const WarpedProductSpec spec({1, 2, 3, 4}, {0.0, 1.0, 1.0, 1.0});
  for (auto _ : state) {
    auto points = critical_points(spec);
    benchmark::DoNotOptimize(points.data());
  }
}
BENCHMARK(BM_CriticalPoints);

void BM_JacobianEigenvalues(benchmark::State& state) {
  XYState xy;
  xy.X = {0.4, 0.2, 0.3};
  xy.Y = {0.8, 0.5, 0.6};
  for (auto _ : state) {
    auto eig = eigenvalues(xy_jacobian(xy, kSpec));
    benchmark::DoNotOptimize(eig.data());
  }
}
BENCHMARK(BM_JacobianEigenvalues);

}  // namespace

BENCHMARK_MAIN();
