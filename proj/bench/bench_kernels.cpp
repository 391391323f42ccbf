// Serial reference vs OpenMP kernel for the trial loops.
// Thread count follows OMP_NUM_THREADS.

#include "rcf/deviation.hpp"
#include "rcf/levy.hpp"
#include "rcf/mixing.hpp"

#include <benchmark/benchmark.h>

using namespace rcf;

namespace {

Execution mode(const benchmark::State& state)
{
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state)
{
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel x" + std::to_string(worker_count()));
}

void BM_trajectory_gauss(benchmark::State& state)
{
    const auto spec = ProcessSpec::gauss_stationary();
    for (auto _ : state)
        benchmark::DoNotOptimize(trajectory_samples(spec, 500, 64, 1, mode(state)));
    label(state);
    state.SetItemsProcessed(state.iterations() * 64);
}

void BM_trajectory_iid(benchmark::State& state)
{
    const auto spec = ProcessSpec::iid(Distribution::gauss_kuzmin());
    for (auto _ : state)
        benchmark::DoNotOptimize(trajectory_samples(spec, 500, 2000, 1, mode(state)));
    label(state);
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_tail_values(benchmark::State& state)
{
    const auto spec = ProcessSpec::iid(Distribution::gauss_kuzmin());
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_tail_values(spec, 20000, kDefaultTruncation, 1, mode(state)));
    label(state);
    state.SetItemsProcessed(state.iterations() * 20000);
}

void BM_deviation_curve(benchmark::State& state)
{
    const auto spec = ProcessSpec::iid(Distribution::uniform(3));
    for (auto _ : state)
        benchmark::DoNotOptimize(empirical_deviation(spec, 0.1, {50, 100, 200}, 2000, 1, 1.0, mode(state)));
    label(state);
}

void BM_psi(benchmark::State& state)
{
    const auto spec = ProcessSpec::iid(Distribution::gauss_kuzmin());
    for (auto _ : state)
        benchmark::DoNotOptimize(psi_hat(spec, 2, 2, 5, 50000, 1, mode(state)));
    label(state);
}

} // namespace

BENCHMARK(BM_trajectory_gauss)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_trajectory_iid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tail_values)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_deviation_curve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_psi)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
