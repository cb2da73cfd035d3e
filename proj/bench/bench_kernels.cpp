// Serial reference vs OpenMP kernels. Both produce identical results; only
// wall time differs.

#include "proxima/kernels.hpp"

#include <benchmark/benchmark.h>

namespace k = proxima::kernels;

namespace {

k::Exec exec_of(const benchmark::State& state)
{
    return state.range(0) ? k::Exec::Parallel : k::Exec::Serial;
}

void BM_DistanceMoments(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(k::distance_moments(2, 20000, 1, exec_of(state)));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_Calibration(benchmark::State& state)
{
    proxima::CalibrationParams p;
    for (auto _ : state) benchmark::DoNotOptimize(k::calibration_distances(p, exec_of(state)));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_FabricatedInside(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(k::fabricated_inside_rate(4.9, 14.0, 20, 10000, 1, exec_of(state)));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_BloomFp(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(k::bloom_fp_rate(20, 0.01, 500, 200, 1, exec_of(state)));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

} // namespace

BENCHMARK(BM_DistanceMoments)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Calibration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FabricatedInside)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BloomFp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
