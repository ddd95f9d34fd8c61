#include "bicorpus/tokenizer.hpp"

#include <algorithm>

#include "bicorpus/error.hpp"
#include "bicorpus/ingest.hpp"
#include "bicorpus/unicode.hpp"

namespace bicorpus {

std::vector<std::string> wordpiece_tokenize(std::string_view word, const Vocabulary& vocab,
                                            std::size_t max_chars) {
  const std::u32string chars = unicode::to_u32(word);
  const std::vector<std::string> unknown = {std::string(kSpecialTokens[1])};
  if (chars.empty()) return {};
  if (chars.size() > max_chars) return unknown;

  std::vector<std::string> pieces;
  std::size_t start = 0;
  std::string candidate;
  while (start < chars.size()) {
    std::size_t end = chars.size();
    bool matched = false;
    while (end > start) {
      candidate = start > 0 ? std::string(kContinuationPrefix) : std::string();
      candidate += unicode::to_utf8(std::u32string_view(chars).substr(start, end - start));
      if (vocab.contains(candidate)) {
        matched = true;
        break;
      }
      --end;
    }
    if (!matched) return unknown;
    pieces.push_back(candidate);
    start = end;
  }
  return pieces;
}

std::vector<std::string> tokenize_text(std::string_view text, const Vocabulary& vocab,
                                       std::size_t max_chars) {
  std::vector<std::string> pieces;
  for (const auto& token : basic_tokenize(text)) {
    for (auto& p : wordpiece_tokenize(token, vocab, max_chars)) pieces.push_back(std::move(p));
  }
  return pieces;
}

EncodedPair encode_pieces(std::vector<std::string> a, std::optional<std::vector<std::string>> b,
                          const Vocabulary& vocab, std::size_t max_len) {
  const std::size_t specials = b ? 3 : 2;
  if (max_len < specials) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_len " + std::to_string(max_len) + " cannot hold the special tokens");
  }
  const std::size_t budget = max_len - specials;
  if (b) {
    while (a.size() + b->size() > budget) {
      if (a.size() > b->size()) {
        a.pop_back();
      } else {
        b->pop_back();
      }
    }
  } else if (a.size() > budget) {
    a.resize(budget);
  }

  EncodedPair out;
  auto push = [&](const std::string& piece, std::uint8_t segment) {
    const auto id = vocab.find(piece);
    out.ids.push_back(id ? *id : vocab.unk_id());
    out.segment_ids.push_back(segment);
    out.pieces.push_back(id ? piece : vocab.piece(vocab.unk_id()));
  };
  push(std::string(kSpecialTokens[2]), 0);
  for (const auto& p : a) push(p, 0);
  push(std::string(kSpecialTokens[3]), 0);
  if (b) {
    for (const auto& p : *b) push(p, 1);
    push(std::string(kSpecialTokens[3]), 1);
  }
  return out;
}

EncodedPair encode_pair(std::span<const std::string> a,
                        std::optional<std::span<const std::string>> b, const Vocabulary& vocab,
                        std::size_t max_len, std::size_t max_chars) {
  auto pieces_of = [&](std::span<const std::string> words) {
    std::vector<std::string> pieces;
    for (const auto& w : words) {
      for (auto& p : wordpiece_tokenize(w, vocab, max_chars)) pieces.push_back(std::move(p));
    }
    return pieces;
  };
  std::optional<std::vector<std::string>> b_pieces;
  if (b) b_pieces = pieces_of(*b);
  return encode_pieces(pieces_of(a), std::move(b_pieces), vocab, max_len);
}

std::string decode(std::span<const std::string> pieces) {
  std::string out;
  for (const auto& piece : pieces) {
    if (std::find(kSpecialTokens.begin(), kSpecialTokens.end(), piece) != kSpecialTokens.end()) {
      continue;
    }
    if (piece.size() > kContinuationPrefix.size() && piece.starts_with(kContinuationPrefix)) {
      out.append(piece, kContinuationPrefix.size());
      continue;
    }
    if (!out.empty()) out += ' ';
    out += piece;
  }
  return out;
}

}  // namespace bicorpus
