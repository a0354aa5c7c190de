#include <benchmark/benchmark.h>

#include "asym/harness.hpp"
#include "asym/search.hpp"

namespace asym {
namespace {

GameState scenario(const char* preset, std::uint64_t seed = 1) {
  ScenarioConfig c = scenario_preset(preset);
  c.seed = seed;
  return generate_scenario(c);
}

void BM_Apply(benchmark::State& st) {
  const GameState s = scenario("zldg8");
  const Script nokav = nokav_script();
  const PlayerAction a = script_action(s, Player::kFirst, nokav);
  const PlayerAction b = script_action(s, Player::kSecond, nokav);
  for (auto _ : st) benchmark::DoNotOptimize(apply(s, a, b));
}
BENCHMARK(BM_Apply);

void BM_Playout(benchmark::State& st) {
  const GameState s = scenario(st.range(0) ? "zl50" : "zl8");
  for (auto _ : st) benchmark::DoNotOptimize(evaluate(s));
}
BENCHMARK(BM_Playout)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_Decision(benchmark::State& st) {
  const GameState s = scenario("zl8");
  const char* name = st.range(0) ? "gab" : "pgs";
  auto agent = make_agent(name, {}, 1);
  const SearchBudget budget = SearchBudget::node_count(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(agent->decide(s, Player::kFirst, budget));
  st.SetLabel(name);
}
BENCHMARK(BM_Decision)->ArgsProduct({{0, 1}, {50, 200}})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace asym

BENCHMARK_MAIN();
