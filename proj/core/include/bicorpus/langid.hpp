#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bicorpus {

// An n-gram of up to three code points packed 21 bits each, first code point
// highest. Numeric order of keys equals the lexicographic order of the
// n-grams' UTF-8 forms.
using NgramKey = std::uint64_t;
NgramKey ngram_key(std::u32string_view gram);
std::string ngram_text(NgramKey key);

// Ranked character n-gram profile (n = 1..3, words padded with "_").
struct LanguageProfile {
  std::string language;
  std::unordered_map<NgramKey, std::uint32_t> ranks;  // 0 = most frequent
};

struct Detection {
  std::string language;
  double confidence = 0.0;  // normalized margin to the runner-up, in [0, 1]
};

// Counts the n-grams of `text` and returns them most frequent first (ties
// broken lexicographically), truncated to `limit`.
std::vector<std::pair<std::string, std::size_t>> ranked_ngrams(std::string_view text,
                                                               std::size_t limit);

// Rank-order ("out-of-place") language classifier.
class LanguageIdentifier {
 public:
  static constexpr std::size_t kDefaultProfileSize = 3000;

  explicit LanguageIdentifier(std::vector<LanguageProfile> profiles,
                              std::size_t profile_size = kDefaultProfileSize);

  static LanguageProfile build_profile(std::string language, std::string_view text,
                                       std::size_t profile_size = kDefaultProfileSize);

  // Profiles built from the bundled seed texts.
  static const LanguageIdentifier& builtin();

  // Distance to each profile in [0, 1]; lower is closer. Empty when the text
  // has no letters.
  std::vector<std::pair<std::string, double>> distances(std::string_view text) const;

  std::optional<Detection> try_detect(std::string_view text) const;
  // Throws Error(kUndetectable) when the text contains no letters.
  Detection detect(std::string_view text) const;

  std::vector<std::string> languages() const;
  std::size_t profile_size() const { return profile_size_; }

 private:
  std::vector<LanguageProfile> profiles_;
  std::size_t profile_size_;
};

const std::vector<std::pair<std::string, std::string>>& builtin_langid_seed_texts();

}  // namespace bicorpus
