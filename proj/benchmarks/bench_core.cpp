#include <benchmark/benchmark.h>

#include <memory>

#include "wordlelab/entropy.hpp"
#include "wordlelab/simulator.hpp"

using namespace wordlelab;

namespace {

std::shared_ptr<const EntropyEngine> engine() {
    static const auto instance = [] {
        auto pools = load_canonical_pools(WORDLELAB_BENCH_DATA_DIR);
        auto table = FeedbackTable::load_or_build(pools.guesses, pools.solutions, WORDLELAB_BENCH_CACHE);
        return std::make_shared<const EntropyEngine>(std::move(pools.guesses), std::move(pools.solutions), std::move(table));
    }();
    return instance;
}

void BM_Feedback(benchmark::State& state) {
    const auto& g = engine()->guesses();
    const auto& s = engine()->solutions();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(feedback_code(g[i % g.size()], s[(i * 7) % s.size()]));
        ++i;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Feedback);

void BM_BuildTable(benchmark::State& state) {
    const auto& e = *engine();
    for (auto _ : state) benchmark::DoNotOptimize(FeedbackTable::build(e.guesses(), e.solutions()));
}
BENCHMARK(BM_BuildTable)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_FilterSolutions(benchmark::State& state) {
    const auto& e = *engine();
    const auto full = e.full(EntropyPool::Solutions);
    const auto crane = Word::from("crane");
    const auto pattern = feedback(crane, Word::from("plant"));
    for (auto _ : state) benchmark::DoNotOptimize(e.filter(full, crane, pattern));
}
BENCHMARK(BM_FilterSolutions);

void BM_FilterWords(benchmark::State& state) {
    const auto& e = *engine();
    const auto full = e.full(EntropyPool::Words);
    const auto crane = Word::from("crane");
    const auto pattern = feedback(crane, Word::from("plant"));
    for (auto _ : state) benchmark::DoNotOptimize(e.filter(full, crane, pattern));
}
BENCHMARK(BM_FilterWords);

void BM_GreedyAfterOpening(benchmark::State& state) {
    const BotBrain brain(engine());
    const auto& e = *engine();
    const auto opening = brain.greedy(e.full(EntropyPool::Solutions));
    const auto after = e.filter(e.full(EntropyPool::Solutions), opening, feedback(opening, Word::from("fuzzy")));
    for (auto _ : state) benchmark::DoNotOptimize(brain.greedy(after));
}
BENCHMARK(BM_GreedyAfterOpening)->Unit(benchmark::kMicrosecond);

void BM_BotGame(benchmark::State& state) {
    const BotBrain brain(engine());
    Rng rng(1);
    const auto& solutions = engine()->solutions();
    for (auto _ : state) {
        const auto& s = solutions[uniform_index(rng, solutions.size())];
        benchmark::DoNotOptimize(play_offline(brain, s, {PolicyKind::NoisyHeuristic, 0.6}, rng));
    }
}
BENCHMARK(BM_BotGame)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
