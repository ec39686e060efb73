#include <benchmark/benchmark.h>

#include "gridrisk/dispatch.hpp"
#include "testbed.hpp"

using namespace gridrisk;

static void BM_MeritOrderDispatch(benchmark::State& state) {
    Rng rng(1);
    const Fleet fleet = testbed::binary_fleet(rng, static_cast<int>(state.range(0)));
    const auto scenarios = testbed::random_scenarios(rng, fleet, 64, 100.0, 2000.0);
    const FleetDecision x = FleetDecision::all(fleet);
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(q_normal(x, scenarios[k % scenarios.size()], fleet, 200.0));
        ++k;
    }
}
BENCHMARK(BM_MeritOrderDispatch)->Arg(10)->Arg(50)->Arg(200);

static void BM_ExtremeShed(benchmark::State& state) {
    Rng rng(2);
    const Fleet fleet = testbed::binary_fleet(rng, static_cast<int>(state.range(0)));
    const auto scenarios = testbed::random_scenarios(rng, fleet, 64, 100.0, 2000.0);
    const FleetDecision x = FleetDecision::all(fleet);
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(q_extreme(x, scenarios[k % scenarios.size()], fleet));
        ++k;
    }
}
BENCHMARK(BM_ExtremeShed)->Arg(10)->Arg(200);
