#pragma once

#include <string>
#include <vector>

#include "bicorpus/bpe.hpp"
#include "bicorpus/random.hpp"

namespace bench {

// Words over a Finnish-flavoured alphabet with a skewed length distribution.
inline std::vector<std::string> synthetic_words(std::size_t count, std::uint64_t seed) {
  static const std::string letters = "aaaeeiiioouuyknlstrmhvpdgjbf";
  bicorpus::Rng rng(seed);
  std::vector<std::string> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string w;
    const auto len = 2 + rng.uniform(6) + rng.uniform(6);
    for (std::uint64_t k = 0; k < len; ++k) w += letters[rng.uniform(letters.size())];
    words.push_back(std::move(w));
  }
  return words;
}

inline bicorpus::WordCounts synthetic_table(std::size_t distinct, std::uint64_t seed) {
  bicorpus::WordCounts table;
  bicorpus::Rng rng(seed);
  for (const auto& w : synthetic_words(distinct, seed)) table[w] += 1 + rng.uniform(50);
  return table;
}

}  // namespace bench
