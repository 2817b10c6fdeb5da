#include <benchmark/benchmark.h>

#include "fohl/frontend.hpp"
#include "fohl/semantics.hpp"

namespace {

// Unsatisfiable within the bounds, so the whole search space is enumerated.
const char* const kExhaustive = "~(F (lam x. B(x))(iota y. K(y)) -> F exists x. B(x))";
// Satisfiable; the search stops at the least witness.
const char* const kWitness = "F p & P q & ~p & ~q & exists x. B(x)";

void runOracle(benchmark::State& state, const char* text, bool parallel) {
    fohl::Formula phi = fohl::parseFormula(text);
    const int maxT = static_cast<int>(state.range(0));
    fohl::OracleOptions opts;
    opts.parallel = parallel;
    for (auto _ : state) benchmark::DoNotOptimize(fohl::boundedOracle(phi, maxT, 2, opts));
    state.counters["models"] = static_cast<double>(fohl::oracleSearchSpace(phi, maxT, 2));
}

void BM_ExhaustiveSerial(benchmark::State& s) { runOracle(s, kExhaustive, false); }
void BM_ExhaustiveParallel(benchmark::State& s) { runOracle(s, kExhaustive, true); }
void BM_WitnessSerial(benchmark::State& s) { runOracle(s, kWitness, false); }
void BM_WitnessParallel(benchmark::State& s) { runOracle(s, kWitness, true); }

}  // namespace

BENCHMARK(BM_ExhaustiveSerial)->DenseRange(2, 3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExhaustiveParallel)->DenseRange(2, 3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WitnessSerial)->DenseRange(2, 3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WitnessParallel)->DenseRange(2, 3)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
