#include <benchmark/benchmark.h>

#include "gridrisk/ef.hpp"
#include "gridrisk/mip.hpp"
#include "testbed.hpp"

using namespace gridrisk;

static void BM_BaseLpRelaxation(benchmark::State& state) {
    Rng rng(4);
    const Fleet fleet = testbed::binary_fleet(rng, 20);
    const auto scenarios =
        testbed::random_scenarios(rng, fleet, static_cast<int>(state.range(0)), 200.0, 2500.0);
    const LpModel model = compile(build_base(fleet, scenarios, 150.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_lp(model));
    }
}
BENCHMARK(BM_BaseLpRelaxation)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_BaseMip(benchmark::State& state) {
    Rng rng(5);
    const Fleet fleet = testbed::binary_fleet(rng, static_cast<int>(state.range(0)));
    const auto scenarios = testbed::random_scenarios(rng, fleet, 16, 200.0, 1500.0);
    const ExtensiveFormInstance instance = build_base(fleet, scenarios, 150.0);
    MipOptions opts;
    opts.gap_tol = 1e-6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(instance, opts));
    }
}
BENCHMARK(BM_BaseMip)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
