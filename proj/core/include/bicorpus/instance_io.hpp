#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <vector>

#include "bicorpus/examplegen.hpp"

namespace bicorpus {

// Instance shard layout (all integers little-endian):
//   header: "BCPI" | u32 version | u32 max_seq_len | u64 vocab checksum
//           | u32 max_predictions | f64 masked_lm_prob
//   record: u32 payload bytes | u16 n | n x u32 ids | n x u8 segment ids
//           | u16 m | m x u32 positions | m x u32 labels | u8 is_random_next
inline constexpr std::uint32_t kInstanceFormatVersion = 1;

struct InstanceFileHeader {
  std::uint32_t version = kInstanceFormatVersion;
  std::uint32_t max_seq_len = 0;
  std::uint64_t vocab_checksum = 0;
  std::uint32_t max_predictions = 0;
  double masked_lm_prob = 0.0;

  static InstanceFileHeader for_config(const MaskingConfig& config, const Vocabulary& vocab);
};

// Streams records into "<path>.partial" and renames to `path` on finish();
// an unfinished writer leaves the .partial file behind.
class InstanceWriter {
 public:
  InstanceWriter(std::filesystem::path path, const InstanceFileHeader& header);
  InstanceWriter(const InstanceWriter&) = delete;
  InstanceWriter& operator=(const InstanceWriter&) = delete;

  void write(const PretrainingInstance& instance);
  void finish();
  std::uint64_t written() const { return written_; }

 private:
  std::filesystem::path path_;
  std::filesystem::path partial_;
  std::ofstream out_;
  std::uint64_t written_ = 0;
  bool finished_ = false;
};

class InstanceReader {
 public:
  // With `expected_vocab`, a checksum mismatch throws kVocabMismatch. Bad
  // magic throws kBadMagic, an unknown version kVersionMismatch.
  explicit InstanceReader(const std::filesystem::path& path,
                          const Vocabulary* expected_vocab = nullptr);

  const InstanceFileHeader& header() const { return header_; }
  // False at end of file; throws kCorrupt on a truncated or malformed record.
  bool next(PretrainingInstance& instance);

 private:
  std::ifstream in_;
  InstanceFileHeader header_;
};

void write_instances(const std::filesystem::path& path, std::span<const PretrainingInstance> instances,
                     const InstanceFileHeader& header);
std::vector<PretrainingInstance> read_instances(const std::filesystem::path& path,
                                                const Vocabulary* expected_vocab = nullptr,
                                                InstanceFileHeader* header = nullptr);

}  // namespace bicorpus
