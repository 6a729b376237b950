// Serial reference vs OpenMP: population scoring and the RBF Gram matrix.
#include <benchmark/benchmark.h>

#include "ssel/baselines.hpp"
#include "ssel/evolution.hpp"
#include "ssel/synth.hpp"

namespace {

const ssel::SynthOutput& data() {
    static const ssel::SynthOutput out = ssel::generate(ssel::SynthSpec::planted(7));
    return out;
}

void score(benchmark::State& state, ssel::Exec exec) {
    const auto& ds = data().dataset;
    ssel::Config cfg;
    ssel::EvolutionConfig ecfg;
    const auto population = ssel::init_population(ds, cfg, ecfg);
    for (auto _ : state) {
        auto pop = population;
        ssel::score_population(pop, ds, cfg, exec);
        benchmark::DoNotOptimize(pop.front().cached_score);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(population.size()));
}

void gram(benchmark::State& state, ssel::Exec exec) {
    const auto& x = data().dataset.trials.front().x;
    for (auto _ : state) {
        auto g = ssel::rbf_gram(x, 10.0, exec);
        benchmark::DoNotOptimize(g.values().data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(score, serial, ssel::Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(score, openmp, ssel::Exec::parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(gram, serial, ssel::Exec::serial)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(gram, openmp, ssel::Exec::parallel)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
