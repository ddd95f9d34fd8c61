#include <algorithm>
#include <cmath>

#include "bicorpus/error.hpp"
#include "bicorpus/examplegen.hpp"

namespace bicorpus {

void MaskingConfig::validate() const {
  auto probability = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be in [0, 1]");
    }
  };
  probability(masked_lm_prob, "masked_lm_prob");
  probability(mask_token_share, "mask_token_share");
  probability(random_share, "random_share");
  probability(keep_share, "keep_share");
  probability(short_seq_prob, "short_seq_prob");
  probability(random_next_prob, "random_next_prob");
  if (std::abs(mask_token_share + random_share + keep_share - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "mask/random/keep shares must sum to 1");
  }
  if (max_predictions < 1) throw Error(ErrorCode::kInvalidArgument, "max_predictions must be >= 1");
  if (max_seq_len < 3) throw Error(ErrorCode::kInvalidArgument, "max_seq_len must be >= 3");
}

std::size_t prediction_budget(std::size_t non_special, const MaskingConfig& config) {
  const auto scaled = std::llround(config.masked_lm_prob * static_cast<double>(non_special));
  return std::min<std::size_t>(config.max_predictions,
                               std::max<std::size_t>(1, static_cast<std::size_t>(scaled)));
}

std::vector<std::vector<std::uint32_t>> whole_words(std::span<const TokenId> ids,
                                                    const Vocabulary& vocab) {
  std::vector<std::vector<std::uint32_t>> words;
  bool open = false;
  for (std::uint32_t i = 0; i < ids.size(); ++i) {
    if (vocab.is_special(ids[i])) {
      open = false;
      continue;
    }
    if (open && vocab.piece(ids[i]).starts_with(kContinuationPrefix) &&
        vocab.piece(ids[i]).size() > kContinuationPrefix.size()) {
      words.back().push_back(i);
    } else {
      words.push_back({i});
      open = true;
    }
  }
  return words;
}

namespace {

// Maps k in [0, |V| - #specials) to the k-th non-special id.
TokenId nth_regular_id(const Vocabulary& vocab, std::uint64_t k) {
  if (vocab.has_canonical_layout()) return static_cast<TokenId>(k + kSpecialTokens.size());
  for (TokenId id = 0; id < vocab.size(); ++id) {
    if (vocab.is_special(id)) continue;
    if (k-- == 0) return id;
  }
  return vocab.unk_id();
}

}  // namespace

MaskedSequence apply_whole_word_masking(std::span<const TokenId> ids, const Vocabulary& vocab,
                                        const MaskingConfig& config, Rng& rng) {
  MaskedSequence out;
  out.ids.assign(ids.begin(), ids.end());
  auto words = whole_words(ids, vocab);
  std::size_t non_special = 0;
  for (const auto& w : words) non_special += w.size();
  if (non_special == 0) return out;

  const std::size_t budget = prediction_budget(non_special, config);
  const std::uint64_t regular = vocab.size() - kSpecialTokens.size();
  rng.shuffle(std::span(words));

  std::size_t selected = 0;
  for (const auto& word : words) {
    if (selected >= budget) break;
    if (selected + word.size() > budget) continue;
    selected += word.size();
    for (std::uint32_t position : word) {
      out.positions.push_back(position);
      const double r = rng.uniform01();
      if (r < config.mask_token_share) {
        out.ids[position] = vocab.mask_id();
      } else if (r < config.mask_token_share + config.random_share && regular > 0) {
        out.ids[position] = nth_regular_id(vocab, rng.uniform(regular));
      }
    }
  }
  std::sort(out.positions.begin(), out.positions.end());
  out.labels.reserve(out.positions.size());
  for (auto p : out.positions) out.labels.push_back(ids[p]);
  return out;
}

}  // namespace bicorpus
