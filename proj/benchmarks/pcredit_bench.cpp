#include <benchmark/benchmark.h>

#include "pcredit/mnk/oracle.hpp"
#include "pcredit/rank_overlap.hpp"
#include "pcredit/rng.hpp"
#include "pcredit/stats.hpp"

using namespace pcredit;

namespace {

mnk::Board opened(const mnk::BoardConfig& cfg, int moves) {
  mnk::Board b = mnk::new_game(cfg);
  Rng rng(1);
  while (moves-- > 0) {
    const auto empties = b.empty_squares();
    b = mnk::apply_move(b, empties[rng.below(empties.size())]);
  }
  return b;
}

overlap::RankList ranked(int n, int offset) {
  std::vector<ActionId> ids;
  for (int i = 0; i < n; ++i) ids.emplace_back("a" + std::to_string((i * 7 + offset) % (2 * n)));
  return overlap::RankList(std::move(ids));
}

std::vector<stats::SampleGroup> groups(std::size_t per_group) {
  Rng rng(3);
  std::vector<stats::SampleGroup> out(4);
  for (std::size_t g = 0; g < out.size(); ++g) {
    out[g].label = "g" + std::to_string(g);
    for (std::size_t i = 0; i < per_group; ++i) out[g].values.push_back(rng.uniform() + rng.uniform() + 0.1 * g);
  }
  return out;
}

}  // namespace

static void BM_ExhaustiveOracle333(benchmark::State& state) {
  const mnk::Board b = mnk::new_game({3, 3, 3});
  for (auto _ : state) benchmark::DoNotOptimize(mnk::value_oracle(b, mnk::AgentSpec::make_exhaustive()));
}
BENCHMARK(BM_ExhaustiveOracle333)->Unit(benchmark::kMillisecond);

static void BM_ExhaustiveOracle12Empty(benchmark::State& state) {
  const mnk::Board b = opened({4, 4, 3}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(mnk::value_oracle(b, mnk::AgentSpec::make_exhaustive()));
}
BENCHMARK(BM_ExhaustiveOracle12Empty)->Unit(benchmark::kMillisecond);

static void BM_SampledOracle944(benchmark::State& state) {
  const mnk::Board b = mnk::new_game({9, 4, 4});
  const auto spec = mnk::AgentSpec::make_sampled(static_cast<std::uint64_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(mnk::value_oracle(b, spec));
}
BENCHMARK(BM_SampledOracle944)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Mrbo(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto s = ranked(n / 3 + 1, 1), t = ranked(n, 0);
  for (auto _ : state) benchmark::DoNotOptimize(overlap::mrbo_ext(s, t, 0.9));
}
BENCHMARK(BM_Mrbo)->Arg(36)->Arg(1000);

static void BM_ShapiroWilk(benchmark::State& state) {
  const auto g = groups(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stats::shapiro_wilk(g[0].values));
}
BENCHMARK(BM_ShapiroWilk)->Arg(30)->Arg(5000);

static void BM_Pipeline(benchmark::State& state) {
  const auto g = groups(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stats::run_pipeline(g));
}
BENCHMARK(BM_Pipeline)->Arg(30)->Arg(1000);
BENCHMARK_MAIN();
