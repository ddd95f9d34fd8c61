#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bicorpus/examplegen.hpp"
#include "bicorpus/instance_io.hpp"
#include "bicorpus/ingest.hpp"
#include "bicorpus/report.hpp"
#include "bicorpus/vocabulary.hpp"

namespace bicorpus {

struct TextCounts {
  std::uint64_t documents = 0;
  std::uint64_t sentences = 0;
  std::uint64_t tokens = 0;

  TextCounts& operator+=(const TextCounts& other);
  friend bool operator==(const TextCounts&, const TextCounts&) = default;
};

struct LanguageCounts {
  TextCounts total;
  std::map<std::string, TextCounts> sources;

  friend bool operator==(const LanguageCounts&, const LanguageCounts&) = default;
};

struct CorpusStats {
  std::map<std::string, LanguageCounts> languages;

  CorpusStats& operator+=(const CorpusStats& other);
  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;

  TextCounts total() const;
  KeyValueReport to_key_values() const;
  // Language rows with their sources indented beneath, counts shown both
  // exactly and abbreviated (e.g. 198M, 3.8B).
  std::string to_table() const;
};

// Documents must be basic-tokenized.
CorpusStats corpus_stats(std::span<const Document> documents);

// "198M", "3.8B", "512"; one decimal below 10 units of the suffix.
std::string abbreviate_count(std::uint64_t n);

struct FertilityStats {
  std::uint64_t basic_tokens = 0;
  std::uint64_t pieces = 0;
  std::uint64_t unknown = 0;  // basic tokens mapped to [UNK]

  double fertility() const;
};

// Mean WordPiece pieces per basic token, per language. Throws kEmpty when
// the documents contain no tokens.
std::map<std::string, FertilityStats> fertility(std::span<const Document> documents,
                                                const Vocabulary& vocab,
                                                std::size_t max_word_chars = 100);
KeyValueReport fertility_report(const std::map<std::string, FertilityStats>& stats);

struct AuditReport {
  std::uint64_t instances = 0;
  std::uint64_t non_special_tokens = 0;
  std::uint64_t masked = 0;
  std::uint64_t replaced_with_mask = 0;
  std::uint64_t replaced_with_random = 0;
  std::uint64_t unchanged = 0;
  std::uint64_t random_next = 0;
  std::map<std::uint32_t, std::uint64_t> length_histogram;  // bucket start -> count
  std::uint64_t violations = 0;
  std::vector<std::string> violation_examples;  // first few, for diagnosis

  double masked_fraction() const;
  double mask_share() const;
  double random_share() const;
  double unchanged_share() const;
  double random_next_share() const;

  AuditReport& operator+=(const AuditReport& other);
  KeyValueReport to_key_values() const;
  std::string to_text() const;
};

inline constexpr std::uint32_t kLengthBucket = 16;

// Checks one instance against the layout, masking budget and whole-word
// invariants; returns the number of violations found (descriptions are
// appended to `problems` when given).
std::uint64_t check_instance(const PretrainingInstance& instance, const Vocabulary& vocab,
                             const InstanceFileHeader& header,
                             std::vector<std::string>* problems = nullptr);

// Reads an instance shard and measures the masking and NSP statistics. A
// masked position counts as [MASK] when it holds the mask id, unchanged when
// it holds its label, random otherwise. Throws when the file is unreadable
// or was generated with a different vocabulary.
AuditReport audit_instances(const std::filesystem::path& path, const Vocabulary& vocab);

}  // namespace bicorpus
