#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bicorpus/dedup.hpp"
#include "bicorpus/examplegen.hpp"
#include "bicorpus/filter.hpp"
#include "bicorpus/ingest.hpp"

namespace bicorpus {

struct DedupConfig {
  std::size_t n = 5;
  double threshold = 0.5;
  DedupGranularity granularity = DedupGranularity::kDocument;
};

struct VocabConfig {
  std::uint64_t sample_total = 10'000'000;
  std::size_t target_size = 80000;
  std::size_t min_char_count = 10;
  // Reference vocabulary for the coverage report (optional).
  std::optional<std::filesystem::path> coverage_reference;
};

struct ExamplesConfig {
  MaskingConfig masking;
  std::set<std::string> balance_languages;
  double duplication_tolerance = 0.1;
  // Vocabulary used for generation; defaults to the pipeline's own output.
  std::optional<std::filesystem::path> vocab;
};

// Run description, read from an INI-style file:
//
//   [run]            seed, output_dir, languages
//   [filter]         min_tokens, max_uppercase_ratio, ...
//   [dedup]          n, threshold, granularity
//   [vocab]          sample_total, target_size, min_char_count, coverage_reference
//   [examples]       masked_lm_prob, max_seq_len, ..., balance_languages
//   [source:<id>]    language, format, paths, book, segment
//
// Relative paths are resolved against the manifest's directory. Lists are
// comma separated.
struct Manifest {
  std::uint64_t seed = 12345;
  std::filesystem::path output_dir = "out";
  std::vector<std::string> languages;
  std::vector<SourceSpec> sources;
  FilterConfig filter;
  DedupConfig dedup;
  VocabConfig vocab;
  ExamplesConfig examples;

  // Throws Error(kInvalidArgument) on unknown sections or keys and on
  // malformed values, Error(kNotFound) when the file is missing.
  static Manifest load(const std::filesystem::path& path);
  static Manifest parse(std::string_view text, const std::filesystem::path& base_dir);

  // Sets "section.key" (e.g. "examples.max_seq_len", "source.wiki.book").
  // Paths in `value` are resolved against `base_dir`. Used both for the file
  // and for command-line overrides.
  void set(std::string_view dotted_key, std::string_view value,
           const std::filesystem::path& base_dir = {});

  // Source ids unique, languages configured, every path present, option
  // ranges valid. Throws Error.
  void validate() const;

  const SourceSpec* find_source(std::string_view source_id) const;

  // `languages` when set, otherwise the source languages in first-seen order.
  std::vector<std::string> language_list() const;

  // The effective configuration in manifest syntax.
  std::string to_string() const;
};

}  // namespace bicorpus
