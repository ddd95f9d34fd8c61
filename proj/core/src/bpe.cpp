#include "bicorpus/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "bicorpus/error.hpp"
#include "bicorpus/report.hpp"
#include "bicorpus/unicode.hpp"

namespace bicorpus {

std::string Piece::surface() const {
  return initial ? text : std::string(kContinuationPrefix) + text;
}

Piece Piece::from_surface(std::string_view surface) {
  if (surface.size() > kContinuationPrefix.size() && surface.starts_with(kContinuationPrefix)) {
    return Piece{std::string(surface.substr(kContinuationPrefix.size())), false};
  }
  return Piece{std::string(surface), true};
}

std::strong_ordering operator<=>(const Piece& a, const Piece& b) {
  if (auto c = a.text <=> b.text; c != 0) return c;
  if (a.initial == b.initial) return std::strong_ordering::equal;
  return a.initial ? std::strong_ordering::less : std::strong_ordering::greater;
}

void MergeRuleList::write_merges(const std::filesystem::path& path) const {
  std::string out;
  for (const auto& m : merges) {
    out += m.left.surface();
    out += ' ';
    out += m.right.surface();
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<MergeRule> MergeRuleList::read_merges(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  std::vector<MergeRule> merges;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos || line.find(' ', space + 1) != std::string::npos) {
      throw Error(ErrorCode::kCorrupt, "bad merge line: " + line);
    }
    merges.push_back({Piece::from_surface(std::string_view(line).substr(0, space)),
                      Piece::from_surface(std::string_view(line).substr(space + 1))});
  }
  return merges;
}

void write_pieces(const std::filesystem::path& path, std::span<const Piece> pieces) {
  std::string out;
  for (const auto& p : pieces) {
    out += p.surface();
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<Piece> read_pieces(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  std::vector<Piece> pieces;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) pieces.push_back(Piece::from_surface(line));
  }
  return pieces;
}

WordCounts count_words(std::span<const std::vector<std::string>> tokenized_sentences) {
  WordCounts counts;
  for (const auto& sentence : tokenized_sentences) {
    for (const auto& token : sentence) ++counts[token];
  }
  return counts;
}

namespace {

using SymbolId = std::uint32_t;
using PairKey = std::uint64_t;

PairKey make_key(SymbolId left, SymbolId right) {
  return (static_cast<PairKey>(left) << 32) | right;
}
SymbolId key_left(PairKey key) { return static_cast<SymbolId>(key >> 32); }
SymbolId key_right(PairKey key) { return static_cast<SymbolId>(key & 0xffffffffu); }

struct Word {
  std::vector<SymbolId> symbols;
  std::uint64_t count = 0;
};

class SymbolTable {
 public:
  SymbolId intern(const Piece& piece, bool* created = nullptr) {
    auto [it, inserted] = ids_.try_emplace(piece.surface(), static_cast<SymbolId>(pieces_.size()));
    if (inserted) pieces_.push_back(piece);
    if (created != nullptr) *created = inserted;
    return it->second;
  }
  const Piece& operator[](SymbolId id) const { return pieces_[id]; }

 private:
  std::vector<Piece> pieces_;
  std::unordered_map<std::string, SymbolId> ids_;
};

struct Candidate {
  std::int64_t count;
  PairKey key;
};

// Highest count first, then pair order on the symbols' pieces.
struct CandidateOrder {
  const SymbolTable* symbols;
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.count != b.count) return a.count > b.count;
    if (a.key == b.key) return false;
    const Piece& al = (*symbols)[key_left(a.key)];
    const Piece& bl = (*symbols)[key_left(b.key)];
    if (al.text != bl.text) return al.text < bl.text;
    const Piece& ar = (*symbols)[key_right(a.key)];
    const Piece& br = (*symbols)[key_right(b.key)];
    if (ar.text != br.text) return ar.text < br.text;
    if (al.initial != bl.initial) return al.initial;
    return ar.initial && !br.initial;
  }
};

class BpeTrainer {
 public:
  BpeTrainer() : candidates_(CandidateOrder{&symbols_}) {}

  BpeResult run(const WordCounts& words, const BpeOptions& options);

 private:
  void add_pairs(std::uint32_t word_index, std::vector<PairKey>& touched);
  void remove_pairs(std::uint32_t word_index, std::vector<PairKey>& touched);
  void refresh(const std::vector<PairKey>& touched);
  void merge(PairKey key, SymbolId result);

  SymbolTable symbols_;
  std::vector<Word> words_;
  std::unordered_map<PairKey, std::int64_t> pair_counts_;
  std::unordered_map<PairKey, std::int64_t> listed_;  // count currently in candidates_
  std::unordered_map<PairKey, std::vector<std::uint32_t>> occurrences_;
  std::unordered_set<PairKey> merged_;
  std::set<Candidate, CandidateOrder> candidates_;
  std::vector<std::uint64_t> visited_;
  std::uint64_t step_ = 0;
};

void BpeTrainer::add_pairs(std::uint32_t word_index, std::vector<PairKey>& touched) {
  const Word& w = words_[word_index];
  for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
    const PairKey key = make_key(w.symbols[i], w.symbols[i + 1]);
    pair_counts_[key] += static_cast<std::int64_t>(w.count);
    occurrences_[key].push_back(word_index);
    touched.push_back(key);
  }
}

void BpeTrainer::remove_pairs(std::uint32_t word_index, std::vector<PairKey>& touched) {
  const Word& w = words_[word_index];
  for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
    const PairKey key = make_key(w.symbols[i], w.symbols[i + 1]);
    pair_counts_[key] -= static_cast<std::int64_t>(w.count);
    touched.push_back(key);
  }
}

void BpeTrainer::refresh(const std::vector<PairKey>& touched) {
  for (PairKey key : touched) {
    auto listed = listed_.find(key);
    const std::int64_t count = pair_counts_[key];
    if (listed != listed_.end()) {
      if (listed->second == count) continue;
      candidates_.erase(Candidate{listed->second, key});
      listed_.erase(listed);
    }
    if (count > 0 && !merged_.count(key)) {
      candidates_.insert(Candidate{count, key});
      listed_[key] = count;
    }
  }
}

void BpeTrainer::merge(PairKey key, SymbolId result) {
  const SymbolId left = key_left(key);
  const SymbolId right = key_right(key);
  ++step_;
  std::vector<PairKey> touched;
  auto node = occurrences_.extract(key);
  for (std::uint32_t wi : node.mapped()) {
    if (visited_[wi] == step_) continue;
    visited_[wi] = step_;
    Word& w = words_[wi];
    bool present = false;
    for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
      if (w.symbols[i] == left && w.symbols[i + 1] == right) {
        present = true;
        break;
      }
    }
    if (!present) continue;
    remove_pairs(wi, touched);
    std::vector<SymbolId> merged;
    merged.reserve(w.symbols.size());
    for (std::size_t i = 0; i < w.symbols.size();) {
      if (i + 1 < w.symbols.size() && w.symbols[i] == left && w.symbols[i + 1] == right) {
        merged.push_back(result);
        i += 2;
      } else {
        merged.push_back(w.symbols[i]);
        ++i;
      }
    }
    w.symbols = std::move(merged);
    add_pairs(wi, touched);
  }
  merged_.insert(key);
  touched.push_back(key);
  refresh(touched);
}

BpeResult BpeTrainer::run(const WordCounts& words, const BpeOptions& options) {
  BpeResult result;

  std::map<char32_t, std::uint64_t> char_counts;
  std::vector<std::pair<std::u32string, std::uint64_t>> decoded;
  decoded.reserve(words.size());
  for (const auto& [word, count] : words) {
    if (word.empty() || count == 0) continue;
    decoded.emplace_back(unicode::to_u32(word), count);
    for (char32_t c : decoded.back().first) char_counts[c] += count;
  }
  std::set<char32_t> excluded;
  for (const auto& [c, n] : char_counts) {
    if (n >= options.min_char_count) {
      result.rules.alphabet.push_back(c);
    } else {
      excluded.insert(c);
    }
  }
  result.excluded_characters = excluded.size();

  for (char32_t c : result.rules.alphabet) {
    result.pieces.push_back(symbols_[symbols_.intern(Piece{unicode::to_utf8(std::u32string(1, c)), true})]);
  }
  for (char32_t c : result.rules.alphabet) {
    result.pieces.push_back(symbols_[symbols_.intern(Piece{unicode::to_utf8(std::u32string(1, c)), false})]);
  }

  const std::size_t base_size = result.pieces.size() + options.special_count;
  if (options.target_size < base_size) {
    throw Error(ErrorCode::kInvalidArgument,
                "target size " + std::to_string(options.target_size) +
                    " is smaller than alphabet plus special tokens (" +
                    std::to_string(base_size) + ")");
  }

  for (const auto& [chars, count] : decoded) {
    if (std::any_of(chars.begin(), chars.end(), [&](char32_t c) { return excluded.count(c); })) {
      ++result.skipped_words;
      continue;
    }
    Word w;
    w.count = count;
    for (std::size_t i = 0; i < chars.size(); ++i) {
      w.symbols.push_back(symbols_.intern(Piece{unicode::to_utf8(std::u32string(1, chars[i])), i == 0}));
    }
    words_.push_back(std::move(w));
  }
  visited_.assign(words_.size(), 0);

  std::vector<PairKey> touched;
  for (std::uint32_t i = 0; i < words_.size(); ++i) add_pairs(i, touched);
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  refresh(touched);

  std::size_t piece_count = result.pieces.size();
  while (piece_count + options.special_count < options.target_size) {
    if (candidates_.empty()) break;
    const Candidate best = *candidates_.begin();
    if (best.count < 2) break;
    const Piece& left = symbols_[key_left(best.key)];
    const Piece& right = symbols_[key_right(best.key)];
    MergeRule rule{left, right};
    bool created = false;
    const SymbolId id = symbols_.intern(rule.result(), &created);
    if (created) {
      result.pieces.push_back(symbols_[id]);
      ++piece_count;
    }
    result.rules.merges.push_back(std::move(rule));
    merge(best.key, id);
  }

  result.vocab_size = piece_count + options.special_count;
  result.target_reached = result.vocab_size == options.target_size;
  return result;
}

}  // namespace

BpeResult learn_bpe(const WordCounts& words, const BpeOptions& options) {
  BpeTrainer trainer;
  return trainer.run(words, options);
}

namespace {

std::string pair_key(const Piece& left, const Piece& right) {
  return left.surface() + ' ' + right.surface();
}

}  // namespace

MergeTable::MergeTable(std::span<const MergeRule> merges) : merges_(merges.begin(), merges.end()) {
  ranks_.reserve(merges_.size());
  for (std::size_t r = 0; r < merges_.size(); ++r) ranks_.try_emplace(pair_key(merges_[r].left, merges_[r].right), r);
}

std::vector<Piece> MergeTable::apply(std::string_view word) const {
  std::vector<Piece> pieces;
  const std::u32string chars = unicode::to_u32(word);
  for (std::size_t i = 0; i < chars.size(); ++i) {
    pieces.push_back(Piece{unicode::to_utf8(std::u32string(1, chars[i])), i == 0});
  }
  for (;;) {
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      auto it = ranks_.find(pair_key(pieces[i], pieces[i + 1]));
      if (it != ranks_.end()) best_rank = std::min(best_rank, it->second);
    }
    if (best_rank == std::numeric_limits<std::size_t>::max()) break;
    const MergeRule& rule = merges_[best_rank];
    std::vector<Piece> next;
    for (std::size_t i = 0; i < pieces.size();) {
      if (i + 1 < pieces.size() && pieces[i] == rule.left && pieces[i + 1] == rule.right) {
        next.push_back(rule.result());
        i += 2;
      } else {
        next.push_back(pieces[i]);
        ++i;
      }
    }
    pieces = std::move(next);
  }
  return pieces;
}

std::vector<Piece> apply_merges(std::string_view word, std::span<const MergeRule> merges) {
  return MergeTable(merges).apply(word);
}

}  // namespace bicorpus
