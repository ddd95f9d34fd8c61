#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "bicorpus/examplegen.hpp"
#include "bicorpus/tokenizer.hpp"

namespace {

bicorpus::Vocabulary vocabulary() {
  bicorpus::BpeOptions options;
  options.target_size = 4000;
  options.min_char_count = 1;
  const auto result = bicorpus::learn_bpe(bench::synthetic_table(10000, 7), options);
  return bicorpus::convert_to_wordpiece(result.rules, result.pieces);
}

void BM_WholeWordMasking(benchmark::State& state) {
  const auto v = vocabulary();
  std::vector<bicorpus::TokenId> ids = {v.cls_id()};
  for (const auto& w : bench::synthetic_words(200, 8)) {
    for (const auto& p : bicorpus::wordpiece_tokenize(w, v)) {
      if (ids.size() + 1 >= static_cast<std::size_t>(state.range(0))) break;
      ids.push_back(*v.find(p));
    }
  }
  ids.push_back(v.sep_id());
  bicorpus::MaskingConfig config;
  config.max_predictions = static_cast<std::size_t>(state.range(0)) * 15 / 100;
  bicorpus::Rng rng(9);
  for (auto _ : state) benchmark::DoNotOptimize(bicorpus::apply_whole_word_masking(ids, v, config, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WholeWordMasking)->Arg(128)->Arg(512);

void BM_BuildPass(benchmark::State& state) {
  const auto v = vocabulary();
  const auto words = bench::synthetic_words(60000, 10);
  bicorpus::TokenizedCorpus corpus(300);
  std::size_t next = 0;
  for (auto& doc : corpus) {
    for (int s = 0; s < 10; ++s) {
      std::vector<bicorpus::TokenId> sentence;
      for (int k = 0; k < 20; ++k) {
        for (const auto& p : bicorpus::wordpiece_tokenize(words[next++ % words.size()], v)) {
          sentence.push_back(*v.find(p));
        }
      }
      doc.push_back(std::move(sentence));
    }
  }
  const bicorpus::MaskingConfig config;
  std::uint64_t pass = 0;
  for (auto _ : state) {
    const auto stats = bicorpus::build_pass(corpus, v, config, 11, pass++, true,
                                            [](bicorpus::PretrainingInstance&& x) { benchmark::DoNotOptimize(x); });
    state.counters["instances"] = static_cast<double>(stats.instances);
  }
}
BENCHMARK(BM_BuildPass)->Unit(benchmark::kMillisecond);

}  // namespace
