#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bicorpus {

inline constexpr std::string_view kContinuationPrefix = "##";

// A subword piece. `initial` pieces start a word; the others continue one
// and are written with the "##" prefix.
struct Piece {
  std::string text;
  bool initial = true;

  std::string surface() const;
  static Piece from_surface(std::string_view surface);

  friend bool operator==(const Piece&, const Piece&) = default;
  // Bare text first, word-initial before continuation on equal text.
  friend std::strong_ordering operator<=>(const Piece& a, const Piece& b);
};

struct MergeRule {
  Piece left;
  Piece right;  // always a continuation piece

  Piece result() const { return Piece{left.text + right.text, left.initial}; }
  friend bool operator==(const MergeRule&, const MergeRule&) = default;
};

struct MergeRuleList {
  std::vector<char32_t> alphabet;  // ascending code points
  std::vector<MergeRule> merges;   // creation order

  // One "left right" line per merge, surface forms.
  void write_merges(const std::filesystem::path& path) const;
  static std::vector<MergeRule> read_merges(const std::filesystem::path& path);
};

using WordCounts = std::map<std::string, std::uint64_t>;

WordCounts count_words(std::span<const std::vector<std::string>> tokenized_sentences);

struct BpeOptions {
  std::size_t target_size = 80000;  // including special tokens
  std::size_t special_count = 5;
  // Characters seen fewer times are left out of the alphabet; words that
  // contain them are skipped.
  std::size_t min_char_count = 10;
};

struct BpeResult {
  MergeRuleList rules;
  // Alphabet as initial pieces, then as continuation pieces, then every new
  // piece in the order its first merge created it.
  std::vector<Piece> pieces;
  std::size_t vocab_size = 0;  // pieces + special tokens
  bool target_reached = false;
  std::size_t skipped_words = 0;      // distinct words with excluded characters
  std::size_t excluded_characters = 0;
};

// Byte-pair encoding over a word-frequency table. Each step merges the most
// frequent adjacent pair (overlapping occurrences counted), ties broken by
// (left text, right text, word-initial left first). A pair is merged at most
// once. Stops when pieces + specials reach the target, or when no pair occurs
// at least twice (target_reached = false).
BpeResult learn_bpe(const WordCounts& words, const BpeOptions& options);

// Segments words by applying merges in rank order (lowest rank first, left
// to right). Characters are not checked against any alphabet.
class MergeTable {
 public:
  explicit MergeTable(std::span<const MergeRule> merges);
  std::vector<Piece> apply(std::string_view word) const;

 private:
  std::vector<MergeRule> merges_;
  std::unordered_map<std::string, std::size_t> ranks_;  // "left right" surfaces
};

// One-off form of MergeTable::apply.
std::vector<Piece> apply_merges(std::string_view word, std::span<const MergeRule> merges);

void write_pieces(const std::filesystem::path& path, std::span<const Piece> pieces);
std::vector<Piece> read_pieces(const std::filesystem::path& path);

}  // namespace bicorpus
