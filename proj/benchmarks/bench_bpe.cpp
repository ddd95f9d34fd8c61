#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "bicorpus/bpe.hpp"

namespace {

void BM_LearnBpe(benchmark::State& state) {
  const auto table = bench::synthetic_table(static_cast<std::size_t>(state.range(0)), 1);
  bicorpus::BpeOptions options;
  options.target_size = static_cast<std::size_t>(state.range(1));
  options.min_char_count = 1;
  for (auto _ : state) {
    auto result = bicorpus::learn_bpe(table, options);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(table.size()));
}
BENCHMARK(BM_LearnBpe)->Args({2000, 500})->Args({20000, 2000})->Args({20000, 8000})->Unit(benchmark::kMillisecond);

void BM_ApplyMerges(benchmark::State& state) {
  const auto table = bench::synthetic_table(20000, 2);
  bicorpus::BpeOptions options;
  options.target_size = 4000;
  options.min_char_count = 1;
  const auto result = bicorpus::learn_bpe(table, options);
  const auto words = bench::synthetic_words(1000, 3);
  const bicorpus::MergeTable merge_table(result.rules.merges);
  for (auto _ : state) {
    for (const auto& w : words) benchmark::DoNotOptimize(merge_table.apply(w));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_ApplyMerges)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
