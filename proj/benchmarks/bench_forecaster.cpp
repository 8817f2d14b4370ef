#include <benchmark/benchmark.h>

#include <cstdint>
#include "ctah/forecaster.hpp"
#include "ctah/processes.hpp"

namespace {

using namespace ctah;

// Predict scans every context slot of every order with prior support, so the
// cost doubles with each unit of depth.
void BM_Predict(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    ContextStatsTable stats(depth);
    const PriorSpec prior = make_prior(PriorKind::proportional, depth);
    SplitMix64 rng(7);
    ContextWindow window(depth, 0);
    for (int i = 0; i < depth; ++i) window = window.shifted(Symbol(rng.next_bit()));
    for (int i = 0; i < 512; ++i) {
        stats.record(window, Symbol(rng.next_bit()));
        window = window.shifted(Symbol(rng.next_bit()));
    }
    const double eta = 0.31;
    for (auto _ : state) {
        Prediction w = predict(stats, window, eta, prior);
        benchmark::DoNotOptimize(w);
        window = window.shifted(Symbol(rng.next_bit()));
    }
    state.SetComplexityN(static_cast<std::int64_t>(predict_slot_visits(depth)));
}
BENCHMARK(BM_Predict)->DenseRange(6, 16, 2)->Complexity(benchmark::oN);

void BM_Record(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    ContextStatsTable stats(depth);
    SplitMix64 rng(7);
    ContextWindow window(depth, 0);
    for (int i = 0; i < depth; ++i) window = window.shifted(Symbol(rng.next_bit()));
    for (auto _ : state) {
        stats.record(window, Symbol(rng.next_bit()));
        window = window.shifted(Symbol(rng.next_bit()));
    }
    state.SetComplexityN(static_cast<std::int64_t>(record_slot_visits(depth)));
}
BENCHMARK(BM_Record)->DenseRange(6, 16, 2)->Complexity(benchmark::oN);

void BM_StepRound(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    ContextStatsTable stats(depth);
    HedgeState hedge;
    const PriorSpec prior = make_prior(PriorKind::proportional, depth);
    StochasticStream stream(xor3_spec(depth), 11);
    for (auto _ : state) {
        auto [context, outcome] = stream.next();
        StepResult res = step(stats, hedge, prior, context, outcome);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_StepRound)->DenseRange(6, 12, 2);

} // namespace

BENCHMARK_MAIN();
