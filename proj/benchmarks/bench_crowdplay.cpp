#include <benchmark/benchmark.h>

#include "crowdplay/crowd.hpp"
#include "crowdplay/random_stream.hpp"
#include "crowdplay/ruin.hpp"
#include "crowdplay/simulate.hpp"

namespace {

using namespace crowdplay;

const PlayerProfile kExpert{0.99, 0.1};

void BM_WinProbability(benchmark::State& state) {
  const auto rules = GameRules::bounded(state.range(0), state.range(0));
  const JumpProbability p{0.55};
  for (auto _ : state) benchmark::DoNotOptimize(win_probability(p, rules));
}
BENCHMARK(BM_WinProbability)->Arg(10)->Arg(1000)->Arg(1'000'000);

void BM_ExpectedGameTimeCrowd(benchmark::State& state) {
  const Environment env{0.15, 19};
  for (auto _ : state) benchmark::DoNotOptimize(expected_game_time_crowd(kExpert, env, 100));
}
BENCHMARK(BM_ExpectedGameTimeCrowd);

void BM_OptimalPlayerCount(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(optimal_player_count(kExpert, 0.15, 100));
}
BENCHMARK(BM_OptimalPlayerCount);

void BM_RandomStreamUniform(benchmark::State& state) {
  RandomStream rng{1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(rng.uniform());
}
BENCHMARK(BM_RandomStreamUniform);

void BM_CrowdRound(benchmark::State& state) {
  const Environment env{0.15, state.range(0)};
  RandomStream rng{1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_crowd_round(kExpert, env, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CrowdRound)->Arg(1)->Arg(19)->Arg(46);

void BM_PlaythroughBatch(benchmark::State& state) {
  const Environment env{0.15, 5};
  const BatchOptions options{static_cast<std::uint64_t>(state.range(0)), 1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_crowd_playthrough_batch(kExpert, env, 20, options));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PlaythroughBatch)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
