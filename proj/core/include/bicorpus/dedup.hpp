#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "bicorpus/ingest.hpp"
#include "bicorpus/report.hpp"

namespace bicorpus {

inline constexpr std::uint64_t kShingleSeed = 0x6f6e696f6e5f7631ULL;  // fixed for reproducibility

// One hash per contiguous n-token window, tokens case-folded first.
std::vector<std::uint64_t> shingles(std::span<const std::string> tokens, std::size_t n);

// Set of already-seen shingle hashes (the state of a one-pass duplicate filter).
class ShingleIndex {
 public:
  ShingleIndex(std::size_t n = 5, double threshold = 0.5);

  std::size_t n() const { return n_; }
  double threshold() const { return threshold_; }
  std::size_t size() const { return seen_.size(); }

  bool contains(std::uint64_t hash) const { return seen_.count(hash) != 0; }
  void insert(std::span<const std::uint64_t> hashes);
  // Fraction of `hashes` already present (0 for an empty span).
  double overlap(std::span<const std::uint64_t> hashes) const;

  // Spill format: "BCSH" magic, u32 version, u32 n, f64 threshold, u64 count,
  // then the hashes sorted ascending, all little-endian.
  void save(const std::filesystem::path& path) const;
  static ShingleIndex load(const std::filesystem::path& path);

 private:
  std::size_t n_;
  double threshold_;
  std::unordered_set<std::uint64_t> seen_;
};

enum class DedupGranularity {
  kDocument,   // whole documents are kept or dropped
  kParagraph,  // each line of a document is judged on its own
};

struct DedupOptions {
  DedupGranularity granularity = DedupGranularity::kDocument;
  unsigned threads = 1;  // used only for shingle computation
};

// Counts are in units of the granularity (documents or lines).
struct DedupReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::size_t short_kept = 0;  // fewer than n tokens, kept unconditionally
  std::size_t documents_in = 0;
  std::size_t documents_out = 0;

  bool balanced() const { return kept + dropped + short_kept == input; }
  DedupReport& operator+=(const DedupReport& other);
  KeyValueReport to_key_values() const;
};

// One pass in input order: a unit whose shingle overlap with everything kept
// so far exceeds the threshold is dropped; otherwise it is kept and its
// shingles join the index. Documents must be basic-tokenized.
std::vector<Document> dedup_stream(std::vector<Document> documents, ShingleIndex& index,
                                   DedupReport& report, const DedupOptions& options = {});

}  // namespace bicorpus
