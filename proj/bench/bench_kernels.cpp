// Serial reference kernels against their OpenMP versions.

#include "rare/kernels.hpp"

#include <benchmark/benchmark.h>

namespace k = rare::kernels;

namespace {

constexpr double kRate = 0.00131;

void BM_BootstrapSerial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            k::bootstrap_statistics_serial(n, kRate, k::EdfStatistic::ad, 999, 1));
    state.SetItemsProcessed(state.iterations() * 999);
}

void BM_BootstrapOmp(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            k::bootstrap_statistics_omp(n, kRate, k::EdfStatistic::ad, 999, 1));
    state.SetItemsProcessed(state.iterations() * 999);
}

void BM_BandsSerial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(k::order_statistic_bands_serial(n, 0.025, 0.975));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BandsOmp(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(k::order_statistic_bands_omp(n, 0.025, 0.975));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_BootstrapSerial)->Arg(50)->Arg(223)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapOmp)->Arg(50)->Arg(223)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BandsSerial)->Arg(223)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BandsOmp)->Arg(223)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
