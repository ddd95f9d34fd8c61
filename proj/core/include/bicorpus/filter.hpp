#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bicorpus/ingest.hpp"
#include "bicorpus/langid.hpp"
#include "bicorpus/report.hpp"

namespace bicorpus {

// Sentence-level reasons come first, in the order the rules are applied.
enum class RejectReason : std::size_t {
  kShort = 0,
  kUppercase,
  kDigits,
  kForeign,
  kLanguage,
  kBookBoilerplate,    // line removed by the book cleaning patterns
  kTooFewSentences,    // survivor of a document rejected for size
  kMajorityRejected,   // survivor of a document rejected for quality
};
inline constexpr std::size_t kRejectReasonCount = 8;

std::string_view reject_reason_name(RejectReason reason);

struct FilterConfig {
  std::size_t min_tokens = 3;
  double max_uppercase_ratio = 0.3;
  double max_digit_ratio = 0.3;
  double max_foreign_ratio = 0.1;
  double min_lang_confidence = 0.1;
  // Document floor and the share of rejected sentences that sinks a document.
  std::size_t min_document_sentences = 1;
  double max_rejected_share = 0.5;
  bool language_check = true;
  // Accepted letters per language; languages without an entry skip the
  // foreign-character rule.
  std::map<std::string, std::u32string> alphabets = default_alphabets();

  static std::map<std::string, std::u32string> default_alphabets();
  // Throws Error(kInvalidArgument) when a ratio is outside [0, 1] or
  // min_tokens is 0.
  void validate() const;
};

struct SentenceVerdict {
  bool keep = true;
  RejectReason reason = RejectReason::kShort;  // meaningful when !keep
};

struct FilterTally {
  std::size_t sentences_in = 0;
  std::size_t sentences_out = 0;
  std::size_t tokens_in = 0;
  std::size_t tokens_out = 0;
  std::size_t documents_in = 0;
  std::size_t documents_out = 0;
  std::array<std::size_t, kRejectReasonCount> rejected{};

  std::size_t rejected_total() const;
  // sentences_in == sentences_out + sum(rejected)
  bool balanced() const;
  FilterTally& operator+=(const FilterTally& other);
};

struct FilterReport {
  std::map<std::string, FilterTally> sources;

  FilterTally total() const;
  bool balanced() const;
  void merge(const FilterReport& other);
  KeyValueReport to_key_values() const;
  std::string to_text() const;
};

struct DocumentVerdict {
  bool keep = true;
  RejectReason reason = RejectReason::kMajorityRejected;  // meaningful when !keep
  Document document;  // surviving sentences when kept
  FilterTally tally;
};

// Sentence must be basic-tokenized. Rules, first failure wins: token count,
// uppercase/letter ratio, digit/character ratio, out-of-alphabet letter
// ratio, language identity and confidence.
SentenceVerdict filter_sentence(const Sentence& sentence, std::string_view language,
                                const FilterConfig& config,
                                const LanguageIdentifier& identifier = LanguageIdentifier::builtin());

// True for table-of-contents, copyright and reference lines in book text.
bool is_book_boilerplate(std::string_view line);

DocumentVerdict filter_document(const Document& document, const FilterConfig& config,
                                bool book = false,
                                const LanguageIdentifier& identifier = LanguageIdentifier::builtin());

}  // namespace bicorpus
