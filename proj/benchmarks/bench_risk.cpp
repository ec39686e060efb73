#include <benchmark/benchmark.h>

#include "gridrisk/risk.hpp"
#include "gridrisk/rng.hpp"

using namespace gridrisk;

static void BM_Cvar(benchmark::State& state) {
    Rng rng(3);
    std::vector<double> values(state.range(0));
    for (auto& v : values) v = rng.uniform(0.0, 1000.0);
    const LossSample sample = LossSample::uniform(std::move(values));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvar(sample, 0.999));
    }
}
BENCHMARK(BM_Cvar)->Arg(1000)->Arg(25008);
