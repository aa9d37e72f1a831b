// Solver throughput: worker count, pruning, and the naive reference.
#include <benchmark/benchmark.h>

#include "seqvote/acceptance.hpp"
#include "seqvote/experiments.hpp"
#include "seqvote/families.hpp"
#include "seqvote/spe_engine.hpp"

using namespace seqvote;

namespace {

void solve(benchmark::State& state, const ConfirmationNetwork& g,
           const Rule& rule) {
  SolverOptions opt;
  opt.threads = static_cast<int>(state.range(0));
  opt.prune = state.range(1) != 0;
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const AchievableSet w = achievable_winners(g, rule, opt);
    benchmark::DoNotOptimize(w.winners);
    nodes = w.stats.nodes;
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}

void BM_HkApproval(benchmark::State& state) {
  static const auto g = gen_paper_instance({"h_k", 2, {}});
  solve(state, g, Rule::approval());
}

void BM_PluralityChain5(benchmark::State& state) {
  static const auto g = gen_paper_instance({"plurality_chain", 5, {}});
  solve(state, g, Rule::plurality());
}

void BM_RandomPlurality9(benchmark::State& state) {
  static const auto g = gen_random({9, 0.35, std::nullopt, 17});
  solve(state, g, Rule::plurality());
}

void BM_NaivePlurality5(benchmark::State& state) {
  static const auto g = gen_random({5, 0.4, std::nullopt, 3});
  for (auto _ : state) {
    benchmark::DoNotOptimize(naive_achievable_winners(g, Rule::plurality()));
  }
}

void BM_MemoPlurality5(benchmark::State& state) {
  static const auto g = gen_random({5, 0.4, std::nullopt, 3});
  for (auto _ : state) {
    benchmark::DoNotOptimize(achievable_winners(g, Rule::plurality()));
  }
}

void BM_Batch(benchmark::State& state) {
  static const auto specs = random_suite(64, 4, 7, std::nullopt, 123);
  BatchOptions opt;
  opt.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(specs, Rule::plurality(), opt));
  }
}

}  // namespace

#define SOLVER_ARGS \
  ArgsProduct({{1, 4}, {0, 1}})->ArgNames({"threads", "prune"})->Unit(benchmark::kMillisecond)->UseRealTime()

BENCHMARK(BM_HkApproval)->SOLVER_ARGS;
BENCHMARK(BM_PluralityChain5)->SOLVER_ARGS;
BENCHMARK(BM_RandomPlurality9)->SOLVER_ARGS;
BENCHMARK(BM_NaivePlurality5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MemoPlurality5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Batch)->Arg(1)->Arg(4)->ArgName("threads")->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
