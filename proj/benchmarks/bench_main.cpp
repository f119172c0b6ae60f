#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "mtgender/linguistics.hpp"
#include "mtgender/postprocess.hpp"
#include "mtgender/thresholding.hpp"

namespace {

mtg::WordScoreList random_list(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.001, 1.0);
  mtg::WordScoreList list;
  list.sentence_id = "b";
  for (int i = 0; i < n; ++i) {
    const double s = u(rng) / n;
    list.entries.push_back({"w" + std::to_string(i), i, s, s});
  }
  mtg::sort_entries(list.entries);
  return list;
}

void BM_CumulativeBudget(benchmark::State& state) {
  const auto list = random_list(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(mtg::select_cumulative_budget(list, 20));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CumulativeBudget)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_TopPercent(benchmark::State& state) {
  const auto list = random_list(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(mtg::select_top_percent(list, 10));
}
BENCHMARK(BM_TopPercent)->RangeMultiplier(4)->Range(16, 4096);

void BM_MergeSubwords(benchmark::State& state) {
  const int words = static_cast<int>(state.range(0));
  std::string source;
  mtg::AttributionResult r;
  for (int i = 0; i < words; ++i) {
    source += (i ? " " : "") + std::string("consumer");
    r.source_scores.push_back({"consum", 2 * i, 0.5, 0.5 / words});
    r.source_scores.push_back({"##er", 2 * i + 1, 0.5, 0.5 / words});
  }
  r.source_scores.push_back({"</s>", 2 * words, 0.1, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(mtg::merge_subwords(r, source));
}
BENCHMARK(BM_MergeSubwords)->RangeMultiplier(4)->Range(8, 512);

void BM_TreeDistance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<int> heads(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) heads[static_cast<std::size_t>(i)] = i == 0 ? -1 : (i - 1) / 2;
  const mtg::DependencyTree tree(heads);
  for (auto _ : state) benchmark::DoNotOptimize(tree.distance(n - 1, n / 2));
}
BENCHMARK(BM_TreeDistance)->RangeMultiplier(4)->Range(8, 1024);

}  // namespace

BENCHMARK_MAIN();
