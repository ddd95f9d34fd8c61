#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bicorpus/vocabulary.hpp"

namespace bicorpus {

inline constexpr std::size_t kDefaultMaxWordChars = 100;

// Greedy longest-match-first WordPiece segmentation of one basic token. A
// word longer than `max_chars` code points, or with an unmatched remainder,
// becomes the single piece "[UNK]".
std::vector<std::string> wordpiece_tokenize(std::string_view word, const Vocabulary& vocab,
                                            std::size_t max_chars = kDefaultMaxWordChars);

// Basic tokenization followed by WordPiece.
std::vector<std::string> tokenize_text(std::string_view text, const Vocabulary& vocab,
                                       std::size_t max_chars = kDefaultMaxWordChars);

// [CLS] A [SEP] B [SEP], or [CLS] A [SEP] without B.
struct EncodedPair {
  std::vector<TokenId> ids;
  std::vector<std::uint8_t> segment_ids;
  std::vector<std::string> pieces;
};

// Removes pieces from the end of the longer side (B on ties) until the
// pieces plus special tokens fit in `max_len`, then assembles the layout.
// Throws kInvalidArgument when max_len < 3 (2 without B).
EncodedPair encode_pieces(std::vector<std::string> a, std::optional<std::vector<std::string>> b,
                          const Vocabulary& vocab, std::size_t max_len);

// WordPiece-tokenizes basic tokens `a` (and `b`), then encode_pieces.
EncodedPair encode_pair(std::span<const std::string> a,
                        std::optional<std::span<const std::string>> b, const Vocabulary& vocab,
                        std::size_t max_len, std::size_t max_chars = kDefaultMaxWordChars);

// Joins continuation pieces to their head, words with single spaces; special
// tokens are dropped.
std::string decode(std::span<const std::string> pieces);

}  // namespace bicorpus
