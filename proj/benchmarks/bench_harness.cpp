#include <benchmark/benchmark.h>

#include "content.hpp"
#include "sxgame/harness.hpp"

using namespace sxgame;

namespace {

Scenario scenario(GameType game, std::size_t bots) {
  Scenario s;
  s.game = game;
  s.content = bench_content();
  for (std::size_t i = 0; i < bots; ++i) {
    BotScript b;
    b.think = ThinkTime::uniform(10, 40);
    s.scripts.push_back(b);
  }
  return s;
}

}  // namespace

static void BM_MiBoardScenario(benchmark::State& state) {
  auto s = scenario(GameType::MIBOARD, static_cast<std::size_t>(state.range(0)));
  std::size_t records = 0;
  for (auto _ : state) {
    ++s.seed;
    records += run_scenario(s).log.size();
  }
  state.counters["records/game"] = benchmark::Counter(static_cast<double>(records), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_MiBoardScenario)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_ShowdownScenario(benchmark::State& state) {
  auto s = scenario(GameType::SHOWDOWN, 2);
  for (auto _ : state) {
    ++s.seed;
    benchmark::DoNotOptimize(run_scenario(s));
  }
}
BENCHMARK(BM_ShowdownScenario)->Unit(benchmark::kMillisecond);
