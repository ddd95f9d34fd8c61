#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bicorpus/random.hpp"
#include "bicorpus/report.hpp"

namespace bicorpus {

struct SourceSize {
  std::string source_id;
  std::string language;
  std::uint64_t sentences = 0;
};

struct SourceQuota {
  std::string source_id;
  std::string language;
  std::uint64_t available = 0;
  std::uint64_t quota = 0;
};

// Equal sentence totals per language, split across each language's sources
// in proportion to their size.
struct SampleQuota {
  std::vector<SourceQuota> sources;              // input order
  std::map<std::string, std::uint64_t> languages;  // per-language totals

  std::uint64_t total() const;
  const SourceQuota* find(std::string_view source_id) const;
  KeyValueReport to_key_values() const;
};

// Per-language total = total / #languages; within a language each source
// gets floor(share) and the leftover sentences go to the largest
// remainders (ties to the earlier source). Throws kInvalidArgument when the
// total does not divide evenly or a language is empty, and kShortfall when a
// quota exceeds the sentences available to a source.
SampleQuota plan_sample(const std::vector<SourceSize>& sizes, std::uint64_t total);

// Uniform sample without replacement of `quota` items from a stream of
// unknown length (Algorithm R). Kept items are returned in stream order.
class SentenceReservoir {
 public:
  SentenceReservoir(std::uint64_t quota, std::uint64_t seed);

  void offer(std::string_view sentence);
  std::uint64_t seen() const { return seen_; }
  // Throws kShortfall if fewer than `quota` sentences were offered.
  std::vector<std::string> take();

 private:
  std::uint64_t quota_;
  std::uint64_t seen_ = 0;
  Rng rng_;
  std::vector<std::pair<std::uint64_t, std::string>> slots_;
};

// Draws every source's quota from `streams` (source id -> sentences) using a
// per-source substream of `seed`; output is concatenated in quota order.
std::vector<std::string> draw_sample(
    const SampleQuota& quota,
    const std::map<std::string, std::vector<std::string>>& streams, std::uint64_t seed);

}  // namespace bicorpus
