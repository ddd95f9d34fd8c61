#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "bicorpus/tokenizer.hpp"
#include "bicorpus/vocabulary.hpp"

namespace {

const bicorpus::Vocabulary& vocabulary() {
  static const bicorpus::Vocabulary v = [] {
    bicorpus::BpeOptions options;
    options.target_size = static_cast<std::size_t>(8000);
    options.min_char_count = 1;
    const auto result = bicorpus::learn_bpe(bench::synthetic_table(20000, 4), options);
    return bicorpus::convert_to_wordpiece(result.rules, result.pieces);
  }();
  return v;
}

void BM_WordPieceTokenize(benchmark::State& state) {
  const auto& v = vocabulary();
  const auto words = bench::synthetic_words(10000, 5);
  for (auto _ : state) {
    for (const auto& w : words) benchmark::DoNotOptimize(bicorpus::wordpiece_tokenize(w, v));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_WordPieceTokenize)->Unit(benchmark::kMillisecond);

void BM_TokenizeText(benchmark::State& state) {
  const auto& v = vocabulary();
  std::string text;
  for (const auto& w : bench::synthetic_words(2000, 6)) text += w + (text.size() % 7 == 0 ? ". " : " ");
  for (auto _ : state) benchmark::DoNotOptimize(bicorpus::tokenize_text(text, v));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_TokenizeText)->Unit(benchmark::kMillisecond);

}  // namespace
