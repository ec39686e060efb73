#include <benchmark/benchmark.h>

#include "gridrisk/temperature.hpp"
#include "minisystem.hpp"

using namespace gridrisk;

static void BM_UnconditionalField(benchmark::State& state) {
    const int sites = static_cast<int>(state.range(0));
    const auto marginals = minisystem::make_marginals(sites);
    const CopulaModel copula = minisystem::make_copula(sites);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sample_unconditional(copula, marginals.at(14), 14, 40, 8, ++seed));
    }
    state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_UnconditionalField)->Arg(5)->Arg(10)->Arg(25);

static void BM_ConditionalField(benchmark::State& state) {
    const int sites = 10;
    const auto marginals = minisystem::make_marginals(sites);
    const CopulaModel copula = minisystem::make_copula(sites);
    ExtremeOptions opts;
    opts.q_spatial = 0.99;
    opts.z_threshold_alpha = 0.975;
    opts.threshold_sample_count = 2000;
    SpatialQuantileCache cache;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_conditional_extreme(
            copula, marginals.at(14), 14, 196, 8, Tail::hot, opts, ++seed, &cache));
    }
    state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_ConditionalField);
