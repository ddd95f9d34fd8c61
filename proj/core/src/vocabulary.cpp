#include "bicorpus/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "bicorpus/error.hpp"
#include "bicorpus/hash.hpp"
#include "bicorpus/report.hpp"
#include "bicorpus/unicode.hpp"

namespace bicorpus {

namespace {

constexpr std::uint64_t kChecksumSeed = 0x766f636162763031ULL;

bool is_special_piece(std::string_view piece) {
  return std::find(kSpecialTokens.begin(), kSpecialTokens.end(), piece) != kSpecialTokens.end();
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> pieces) : pieces_(std::move(pieces)) {
  ids_.reserve(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!ids_.emplace(pieces_[i], static_cast<TokenId>(i)).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate vocabulary piece '" + pieces_[i] + "'");
    }
  }
  for (std::size_t s = 0; s < kSpecialTokens.size(); ++s) {
    auto it = ids_.find(std::string(kSpecialTokens[s]));
    if (it == ids_.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "vocabulary lacks special token " + std::string(kSpecialTokens[s]));
    }
    special_ids_[s] = it->second;
  }
  checksum_ = hash64(serialize(), kChecksumSeed);
}

std::vector<std::string> read_piece_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open vocabulary " + path.string());
  std::vector<std::string> pieces;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pieces.push_back(line);
  }
  // A trailing empty line is the file's final newline, not a piece.
  while (!pieces.empty() && pieces.back().empty()) pieces.pop_back();
  return pieces;
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  return Vocabulary(read_piece_lines(path));
}

std::string Vocabulary::serialize() const {
  std::string out;
  for (const auto& p : pieces_) {
    out += p;
    out += '\n';
  }
  return out;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  write_file_atomic(path, serialize());
}

std::optional<TokenId> Vocabulary::find(std::string_view piece) const {
  auto it = ids_.find(std::string(piece));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool Vocabulary::is_special(TokenId id) const {
  return std::find(special_ids_.begin(), special_ids_.end(), id) != special_ids_.end();
}

bool Vocabulary::has_canonical_layout() const {
  for (std::size_t s = 0; s < special_ids_.size(); ++s) {
    if (special_ids_[s] != s) return false;
  }
  return true;
}

Vocabulary convert_to_wordpiece(const MergeRuleList& merges, std::span<const Piece> pieces,
                                ConversionReport* report) {
  std::vector<std::string> out(kSpecialTokens.begin(), kSpecialTokens.end());
  std::unordered_set<std::string> seen(out.begin(), out.end());
  ConversionReport local;
  auto emit = [&](const Piece& p) {
    std::string surface = p.surface();
    if (seen.insert(surface).second) {
      out.push_back(std::move(surface));
    } else {
      ++local.collisions;
    }
  };

  std::vector<char32_t> alphabet = merges.alphabet;
  for (const auto& p : pieces) {
    const auto chars = unicode::to_u32(p.text);
    if (chars.size() == 1 && std::find(alphabet.begin(), alphabet.end(), chars[0]) == alphabet.end()) {
      alphabet.push_back(chars[0]);
    }
  }
  std::sort(alphabet.begin(), alphabet.end());

  std::unordered_set<std::string> alphabet_surfaces;
  for (char32_t c : alphabet) {
    Piece initial{unicode::to_utf8(std::u32string(1, c)), true};
    alphabet_surfaces.insert(initial.surface());
    emit(initial);
  }
  for (char32_t c : alphabet) {
    Piece continuation{unicode::to_utf8(std::u32string(1, c)), false};
    alphabet_surfaces.insert(continuation.surface());
    emit(continuation);
  }
  for (const auto& p : pieces) {
    if (alphabet_surfaces.count(p.surface())) continue;
    emit(p);
  }
  if (report != nullptr) *report = local;
  return Vocabulary(std::move(out));
}

CoverageResult vocab_coverage(std::span<const std::string> v,
                              std::span<const std::string> reference) {
  std::unordered_set<std::string_view> mine;
  for (const auto& p : v) {
    if (!is_special_piece(p)) mine.insert(p);
  }
  std::unordered_set<std::string_view> theirs;
  for (const auto& p : reference) {
    if (!is_special_piece(p)) theirs.insert(p);
  }
  if (mine.empty() || theirs.empty()) {
    throw Error(ErrorCode::kEmpty, "coverage needs two non-empty vocabularies");
  }
  CoverageResult result;
  result.reference_size = theirs.size();
  for (auto p : theirs) result.shared += mine.count(p);
  result.fraction = static_cast<double>(result.shared) / static_cast<double>(result.reference_size);
  return result;
}

CoverageResult vocab_coverage(const Vocabulary& v, const Vocabulary& reference) {
  return vocab_coverage(std::span<const std::string>(v.pieces()),
                        std::span<const std::string>(reference.pieces()));
}

}  // namespace bicorpus
