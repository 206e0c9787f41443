// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "rspk/doa.hpp"
#include "rspk/inference.hpp"
#include "rspk/scatter.hpp"
#include "rspk/spectrum.hpp"

namespace {

using namespace rspk;

SnapshotMatrix make_snapshots(Index n_antennas, Index n_samples) {
  SourceConfig src;
  src.angles = {deg_to_rad(10.0), deg_to_rad(12.0)};
  src.powers = {1.0, 1.0};
  Rng rng = make_stream(1, 0, StreamRole::kData);
  return synthesize(src, NoiseModel::student_t(10.0), n_antennas, n_samples, rng).snapshots;
}

void BM_FixedPoint(benchmark::State& state) {
  const Index n_antennas = state.range(0);
  const auto y = make_snapshots(n_antennas, 5 * n_antennas);
  const auto w = WeightFunction::maronna(0.2, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_fixed_point(y, w));
}
BENCHMARK(BM_FixedPoint)->Arg(20)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_DeltaSolve(benchmark::State& state) {
  const SpectralContext ctx(TauMeasure::analytic(NoiseModel::student_t(100.0), 1'000'000).compressed(
                                static_cast<std::size_t>(state.range(0))),
                            WeightFunction::maronna(0.2, 0.2));
  double x = ctx.s_plus() * 1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctx.delta(x));
    x = x * (1 + 1e-9);
  }
}
BENCHMARK(BM_DeltaSolve)->Arg(512)->Arg(4096);

void BM_ContextBuild(benchmark::State& state) {
  const auto nu = TauMeasure::analytic(NoiseModel::student_t(100.0), 1'000'000).compressed(4096);
  for (auto _ : state) benchmark::DoNotOptimize(SpectralContext(nu, WeightFunction::maronna(0.2, 0.2)));
}
BENCHMARK(BM_ContextBuild)->Unit(benchmark::kMillisecond);

void BM_LocalizationCurve(benchmark::State& state) {
  const auto y = make_snapshots(20, 100);
  const auto w = WeightFunction::maronna(0.2, 0.2);
  const auto est = solve_fixed_point(y, w);
  const SpectralContext ctx(TauMeasure::dirac(1.0), w);
  const auto report = forced_report(est.eigenvalues(), ctx, EstimatorMode::kKnownNu, 2);
  const auto f = LocalizationFunction::weighted(est.eigenvectors(), report, 0.5);
  const auto grid = make_grid(deg_to_rad(6.0), deg_to_rad(16.0), deg_to_rad(0.02));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_curve(Method::kRobustGMusic, f, grid, 2));
}
BENCHMARK(BM_LocalizationCurve)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
