#include "bicorpus/langid.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

#include "bicorpus/error.hpp"
#include "bicorpus/unicode.hpp"

namespace bicorpus {

namespace {

constexpr char32_t kPad = U'_';

// Lowercased letter runs, each padded as "_word_".
std::vector<std::u32string> padded_words(std::string_view text) {
  std::vector<std::u32string> words;
  std::u32string current;
  for (char32_t c : unicode::to_u32(text)) {
    if (unicode::is_letter(c)) {
      current.push_back(unicode::to_lower(c));
    } else if (!current.empty()) {
      words.push_back(kPad + current + kPad);
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(kPad + current + kPad);
  return words;
}

std::vector<std::pair<NgramKey, std::size_t>> ranked_keys(std::string_view text,
                                                         std::size_t limit) {
  std::unordered_map<NgramKey, std::size_t> counts;
  for (const auto& word : padded_words(text)) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (std::size_t i = 0; i + n <= word.size(); ++i) {
        std::u32string_view gram(word.data() + i, n);
        if (n == 1 && gram[0] == kPad) continue;
        ++counts[ngram_key(gram)];
      }
    }
  }
  std::vector<std::pair<NgramKey, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > limit) ranked.resize(limit);
  return ranked;
}

}  // namespace

NgramKey ngram_key(std::u32string_view gram) {
  NgramKey key = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    key <<= 21;
    if (i < gram.size()) key |= static_cast<NgramKey>(gram[i]) & 0x1FFFFF;
  }
  return key;
}

std::string ngram_text(NgramKey key) {
  std::u32string gram;
  for (int shift = 42; shift >= 0; shift -= 21) {
    const auto c = static_cast<char32_t>((key >> shift) & 0x1FFFFF);
    if (c != 0) gram.push_back(c);
  }
  return unicode::to_utf8(gram);
}

std::vector<std::pair<std::string, std::size_t>> ranked_ngrams(std::string_view text,
                                                               std::size_t limit) {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& [key, count] : ranked_keys(text, limit)) out.emplace_back(ngram_text(key), count);
  return out;
}

LanguageIdentifier::LanguageIdentifier(std::vector<LanguageProfile> profiles,
                                       std::size_t profile_size)
    : profiles_(std::move(profiles)), profile_size_(profile_size) {
  if (profiles_.empty()) throw Error(ErrorCode::kInvalidArgument, "no language profiles");
  std::sort(profiles_.begin(), profiles_.end(),
            [](const auto& a, const auto& b) { return a.language < b.language; });
}

LanguageProfile LanguageIdentifier::build_profile(std::string language, std::string_view text,
                                                  std::size_t profile_size) {
  LanguageProfile profile;
  profile.language = std::move(language);
  const auto ranked = ranked_keys(text, profile_size);
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    profile.ranks.emplace(ranked[r].first, static_cast<std::uint32_t>(r));
  }
  return profile;
}

const LanguageIdentifier& LanguageIdentifier::builtin() {
  static const LanguageIdentifier instance = [] {
    std::vector<LanguageProfile> profiles;
    for (const auto& [language, text] : builtin_langid_seed_texts()) {
      profiles.push_back(build_profile(language, text));
    }
    return LanguageIdentifier(std::move(profiles));
  }();
  return instance;
}

std::vector<std::pair<std::string, double>> LanguageIdentifier::distances(
    std::string_view text) const {
  const auto ranked = ranked_keys(text, profile_size_);
  std::vector<std::pair<std::string, double>> result;
  if (ranked.empty()) return result;
  const auto max_penalty = static_cast<double>(profile_size_);
  for (const auto& profile : profiles_) {
    double total = 0.0;
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      auto it = profile.ranks.find(ranked[r].first);
      if (it == profile.ranks.end()) {
        total += max_penalty;
      } else {
        const double gap = std::abs(static_cast<double>(it->second) - static_cast<double>(r));
        total += std::min(gap, max_penalty);
      }
    }
    result.emplace_back(profile.language,
                        total / (max_penalty * static_cast<double>(ranked.size())));
  }
  return result;
}

std::optional<Detection> LanguageIdentifier::try_detect(std::string_view text) const {
  auto scored = distances(text);
  if (scored.empty()) return std::nullopt;
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  Detection detection;
  detection.language = scored[0].first;
  if (scored.size() == 1) {
    detection.confidence = 1.0 - scored[0].second;
  } else {
    const double best = scored[0].second;
    const double second = scored[1].second;
    detection.confidence = second > 0.0 ? (second - best) / second : 0.0;
  }
  detection.confidence = std::clamp(detection.confidence, 0.0, 1.0);
  return detection;
}

Detection LanguageIdentifier::detect(std::string_view text) const {
  auto detection = try_detect(text);
  if (!detection) throw Error(ErrorCode::kUndetectable, "no letters in text");
  return *detection;
}

std::vector<std::string> LanguageIdentifier::languages() const {
  std::vector<std::string> out;
  for (const auto& p : profiles_) out.push_back(p.language);
  return out;
}

}  // namespace bicorpus
