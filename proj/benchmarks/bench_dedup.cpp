#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "bicorpus/dedup.hpp"

namespace {

std::vector<bicorpus::Document> documents(std::size_t count, double duplicate_share) {
  const auto words = bench::synthetic_words(5000, 12);
  bicorpus::Rng rng(13);
  std::vector<bicorpus::Document> docs;
  for (std::size_t i = 0; i < count; ++i) {
    if (!docs.empty() && rng.uniform01() < duplicate_share) {
      docs.push_back(docs[rng.uniform(docs.size())]);
      continue;
    }
    bicorpus::Document d;
    d.doc_id = std::to_string(i);
    for (int s = 0; s < 8; ++s) {
      bicorpus::Sentence sentence;
      for (int k = 0; k < 15; ++k) sentence.tokens.push_back(words[rng.uniform(words.size())]);
      d.sentences.push_back(std::move(sentence));
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

void BM_Shingles(benchmark::State& state) {
  const auto words = bench::synthetic_words(10000, 14);
  for (auto _ : state) benchmark::DoNotOptimize(bicorpus::shingles(words, 5));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_Shingles);

void BM_DedupStream(benchmark::State& state) {
  const auto docs = documents(5000, 0.1);
  bicorpus::DedupOptions options;
  options.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    bicorpus::ShingleIndex index;
    bicorpus::DedupReport report;
    benchmark::DoNotOptimize(bicorpus::dedup_stream(docs, index, report, options));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}
BENCHMARK(BM_DedupStream)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
