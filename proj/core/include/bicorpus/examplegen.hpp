#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bicorpus/ingest.hpp"
#include "bicorpus/random.hpp"
#include "bicorpus/report.hpp"
#include "bicorpus/vocabulary.hpp"

namespace bicorpus {

struct MaskingConfig {
  double masked_lm_prob = 0.15;
  double mask_token_share = 0.8;
  double random_share = 0.1;
  double keep_share = 0.1;
  std::size_t max_predictions = 20;
  std::size_t max_seq_len = 128;
  double short_seq_prob = 0.1;
  double random_next_prob = 0.5;
  std::size_t max_word_chars = 100;

  // Throws kInvalidArgument unless shares sum to 1, probabilities are in
  // [0, 1], max_predictions >= 1 and max_seq_len >= 3.
  void validate() const;
};

struct PretrainingInstance {
  std::vector<TokenId> ids;
  std::vector<std::uint8_t> segment_ids;
  std::vector<std::uint32_t> masked_positions;  // ascending
  std::vector<TokenId> masked_labels;           // original ids at those positions
  bool is_random_next = false;

  friend bool operator==(const PretrainingInstance&, const PretrainingInstance&) = default;
};

// min(max_predictions, max(1, round(masked_lm_prob * non_special))).
std::size_t prediction_budget(std::size_t non_special, const MaskingConfig& config);

// Groups non-special positions into whole words: a piece without the "##"
// prefix followed by its continuation pieces.
std::vector<std::vector<std::uint32_t>> whole_words(std::span<const TokenId> ids,
                                                    const Vocabulary& vocab);

struct MaskedSequence {
  std::vector<TokenId> ids;
  std::vector<std::uint32_t> positions;
  std::vector<TokenId> labels;
};

// Whole-word masking: words are visited in random order and selected while
// they fit the prediction budget (a word that does not fit is skipped, never
// split). Each piece of a selected word independently becomes [MASK], a
// uniformly random non-special id, or stays unchanged.
MaskedSequence apply_whole_word_masking(std::span<const TokenId> ids, const Vocabulary& vocab,
                                        const MaskingConfig& config, Rng& rng);

// --- Duplication planning --------------------------------------------------

struct SourceInstanceCount {
  std::string source_id;
  std::string language;
  std::uint64_t instances = 0;  // one-pass yield
};

struct SourceFactor {
  std::string source_id;
  std::string language;
  std::uint64_t one_pass = 0;
  std::uint64_t factor = 1;
  double target = 0.0;  // 0 for unbalanced languages
};

struct DuplicationPlan {
  std::vector<SourceFactor> sources;
  std::map<std::string, std::uint64_t> language_totals;
  double reference_total = 0.0;
  double tolerance = 0.0;
  bool within_tolerance = true;
  std::vector<std::string> warnings;

  std::uint64_t factor_of(std::string_view source_id) const;
  KeyValueReport to_key_values() const;
};

// Languages outside `balance_within` keep factor 1 and define the reference
// total T (their mean; the largest language total when every language is
// balanced). Each source of a balanced language gets
// factor = max(1, round((T / #sources) / one_pass)). Deviations beyond
// `tolerance` set a warning, never an error.
DuplicationPlan plan_duplication(const std::vector<SourceInstanceCount>& counts,
                                 const std::set<std::string>& balance_within, double tolerance);

// --- Instance generation ---------------------------------------------------

// WordPiece ids per sentence per document.
using TokenizedCorpus = std::vector<std::vector<std::vector<TokenId>>>;

TokenizedCorpus tokenize_corpus(std::span<const Document> documents, const Vocabulary& vocab,
                                std::size_t max_word_chars, unsigned threads = 1);

struct PassStats {
  std::uint64_t instances = 0;
  std::uint64_t random_next = 0;
  std::uint64_t same_document_random_next = 0;  // single-document corpora
  std::uint64_t unpaired_sentences = 0;  // one-sentence documents drawn for an actual next
  std::uint64_t non_special_tokens = 0;
  std::uint64_t masked = 0;
};

// Packs one pass over `corpus`: sentences accumulate into a chunk up to the
// target length (max_seq_len - 3, or with short_seq_prob a uniform length in
// [2, max_seq_len - 3]); a random split gives segment A, and segment B is
// either the rest of the chunk or, with random_next_prob, text from a
// uniformly chosen other document. Packing and masking draw from separate
// substreams of `seed`, so a pass without masking yields the same instances
// (and count) as the masked pass.
PassStats build_pass(const TokenizedCorpus& corpus, const Vocabulary& vocab,
                     const MaskingConfig& config, std::uint64_t seed, std::uint64_t pass,
                     bool mask, const std::function<void(PretrainingInstance&&)>& sink);

// Instances produced by pass 0 without masking; feeds plan_duplication.
std::uint64_t count_instances(const TokenizedCorpus& corpus, const Vocabulary& vocab,
                              const MaskingConfig& config, std::uint64_t seed);

struct GenerationReport {
  std::vector<PassStats> passes;

  std::uint64_t instances() const;
  PassStats totals() const;
};

// Runs `factor` passes (pass k uses substreams derived from `seed` and k).
std::vector<PretrainingInstance> build_instances(std::span<const Document> documents,
                                                 const Vocabulary& vocab,
                                                 const MaskingConfig& config,
                                                 std::uint64_t factor, std::uint64_t seed,
                                                 GenerationReport* report = nullptr);

}  // namespace bicorpus
