#include <benchmark/benchmark.h>

#include "ramsey/arrow.hpp"
#include "ramsey/embedding.hpp"
#include "ramsey/hales_jewett.hpp"
#include "ramsey/structure.hpp"

using namespace ramsey;

namespace {

// Ordered complete graph, the classic two-color triangle host.
FiniteStructure ordered_clique(int n) {
    FiniteStructure s(Signature({{"ord", 2}}), n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s.add_tuple("ord", {i, j});
    return s;
}

void bm_arrow_holds(benchmark::State& state) {
    auto c = ordered_clique(static_cast<int>(state.range(0)));
    auto b = ordered_clique(3);
    auto a = ordered_clique(2);
    for (auto _ : state) {
        auto res = check_arrow(c, b, a, 2);
        benchmark::DoNotOptimize(res.checked);
    }
}

void bm_arrow_fails(benchmark::State& state) {
    auto c = ordered_clique(5);
    auto b = ordered_clique(3);
    auto a = ordered_clique(2);
    for (auto _ : state) {
        auto res = check_arrow(c, b, a, 2);
        benchmark::DoNotOptimize(res.checked);
    }
}

void bm_arrow_hypergraph(benchmark::State& state) {
    auto c = ordered_clique(static_cast<int>(state.range(0)));
    auto b = ordered_clique(3);
    auto a = ordered_clique(2);
    for (auto _ : state) {
        auto res = check_arrow_hypergraph(c, b, a, 2);
        benchmark::DoNotOptimize(res.checked);
    }
}

void bm_enumerate_embeddings(benchmark::State& state) {
    auto c = ordered_clique(static_cast<int>(state.range(0)));
    auto b = ordered_clique(3);
    for (auto _ : state) {
        auto embs = enumerate_embeddings(b, c);
        benchmark::DoNotOptimize(embs.size());
    }
}

void bm_hj_check(benchmark::State& state) {
    for (auto _ : state) {
        auto res = hj_check(2, 2, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(res.checked);
    }
}

BENCHMARK(bm_arrow_holds)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_arrow_fails)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_arrow_hypergraph)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_enumerate_embeddings)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_hj_check)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
