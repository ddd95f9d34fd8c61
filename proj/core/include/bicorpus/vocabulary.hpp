#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bicorpus/bpe.hpp"

namespace bicorpus {

using TokenId = std::uint32_t;

inline constexpr std::array<std::string_view, 5> kSpecialTokens = {"[PAD]", "[UNK]", "[CLS]",
                                                                   "[SEP]", "[MASK]"};

// WordPiece vocabulary: one piece per line, line number = id. Continuation
// pieces carry the "##" prefix.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws kInvalidArgument on duplicate pieces or when a special token is
  // missing.
  explicit Vocabulary(std::vector<std::string> pieces);

  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  // Exact file bytes: pieces joined with '\n', trailing newline.
  std::string serialize() const;

  std::size_t size() const { return pieces_.size(); }
  const std::string& piece(TokenId id) const { return pieces_.at(id); }
  const std::vector<std::string>& pieces() const { return pieces_; }
  std::optional<TokenId> find(std::string_view piece) const;
  bool contains(std::string_view piece) const { return find(piece).has_value(); }

  TokenId pad_id() const { return special_ids_[0]; }
  TokenId unk_id() const { return special_ids_[1]; }
  TokenId cls_id() const { return special_ids_[2]; }
  TokenId sep_id() const { return special_ids_[3]; }
  TokenId mask_id() const { return special_ids_[4]; }
  bool is_special(TokenId id) const;
  // True when the five special tokens occupy ids 0-4 in canonical order.
  bool has_canonical_layout() const;

  // Seeded 64-bit hash of serialize(); recorded in instance file headers.
  std::uint64_t checksum() const { return checksum_; }

 private:
  std::vector<std::string> pieces_;
  std::unordered_map<std::string, TokenId> ids_;
  std::array<TokenId, 5> special_ids_{};
  std::uint64_t checksum_ = 0;
};

struct ConversionReport {
  std::size_t collisions = 0;  // surface forms produced twice, later copy dropped
};

// Specials at ids 0-4, then the alphabet as word-initial pieces, then as
// continuation pieces, then the remaining pieces in merge-creation order.
// Every alphabet character is present in both forms.
Vocabulary convert_to_wordpiece(const MergeRuleList& merges, std::span<const Piece> pieces,
                                ConversionReport* report = nullptr);

struct CoverageResult {
  std::size_t shared = 0;
  std::size_t reference_size = 0;
  double fraction = 0.0;
};

// |pieces(v) ∩ pieces(reference)| / |pieces(reference)|, special tokens
// excluded on both sides. Throws kEmpty when either side has no pieces.
CoverageResult vocab_coverage(const Vocabulary& v, const Vocabulary& reference);
// Same measure over raw piece lists (used for vocabularies without specials).
CoverageResult vocab_coverage(std::span<const std::string> v, std::span<const std::string> reference);

std::vector<std::string> read_piece_lines(const std::filesystem::path& path);

}  // namespace bicorpus
