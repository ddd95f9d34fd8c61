#include "bicorpus/instance_io.hpp"

#include <cstring>
#include <limits>
#include <string>

#include "bicorpus/error.hpp"

namespace bicorpus {

namespace {

constexpr char kMagic[4] = {'B', 'C', 'P', 'I'};

template <typename T>
void put(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(static_cast<unsigned char>(value >> (8 * i))));
  }
}

void put_double(std::string& out, double value) {
  std::uint64_t bits;
  std::memcpy(&bits, &value, sizeof bits);
  put<std::uint64_t>(out, bits);
}

class Cursor {
 public:
  explicit Cursor(std::string_view data) : data_(data) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > data_.size()) throw Error(ErrorCode::kCorrupt, "record overrun");
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return value;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::string read_exact(std::istream& in, std::size_t n, bool* eof_at_start = nullptr) {
  std::string buf(n, '\0');
  in.read(buf.data(), static_cast<std::streamsize>(n));
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got == 0 && eof_at_start != nullptr) {
    *eof_at_start = true;
    return {};
  }
  if (got != n) throw Error(ErrorCode::kCorrupt, "truncated instance file");
  return buf;
}

}  // namespace

InstanceFileHeader InstanceFileHeader::for_config(const MaskingConfig& config,
                                                  const Vocabulary& vocab) {
  InstanceFileHeader header;
  header.max_seq_len = static_cast<std::uint32_t>(config.max_seq_len);
  header.vocab_checksum = vocab.checksum();
  header.max_predictions = static_cast<std::uint32_t>(config.max_predictions);
  header.masked_lm_prob = config.masked_lm_prob;
  return header;
}

InstanceWriter::InstanceWriter(std::filesystem::path path, const InstanceFileHeader& header)
    : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  partial_ = path_;
  partial_ += ".partial";
  out_.open(partial_, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::kIo, "cannot write " + partial_.string());
  std::string bytes(kMagic, 4);
  put<std::uint32_t>(bytes, header.version);
  put<std::uint32_t>(bytes, header.max_seq_len);
  put<std::uint64_t>(bytes, header.vocab_checksum);
  put<std::uint32_t>(bytes, header.max_predictions);
  put_double(bytes, header.masked_lm_prob);
  out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void InstanceWriter::write(const PretrainingInstance& x) {
  constexpr std::size_t kMax = std::numeric_limits<std::uint16_t>::max();
  if (x.ids.size() > kMax || x.masked_positions.size() > kMax ||
      x.segment_ids.size() != x.ids.size() || x.masked_labels.size() != x.masked_positions.size()) {
    throw Error(ErrorCode::kInvalidArgument, "instance not serializable");
  }
  std::string payload;
  payload.reserve(8 + x.ids.size() * 5 + x.masked_positions.size() * 8);
  put<std::uint16_t>(payload, static_cast<std::uint16_t>(x.ids.size()));
  for (auto id : x.ids) put<std::uint32_t>(payload, id);
  for (auto s : x.segment_ids) put<std::uint8_t>(payload, s);
  put<std::uint16_t>(payload, static_cast<std::uint16_t>(x.masked_positions.size()));
  for (auto p : x.masked_positions) put<std::uint32_t>(payload, p);
  for (auto l : x.masked_labels) put<std::uint32_t>(payload, l);
  put<std::uint8_t>(payload, x.is_random_next ? 1 : 0);

  std::string record;
  put<std::uint32_t>(record, static_cast<std::uint32_t>(payload.size()));
  record += payload;
  out_.write(record.data(), static_cast<std::streamsize>(record.size()));
  if (!out_) throw Error(ErrorCode::kIo, "write failed for " + partial_.string());
  ++written_;
}

void InstanceWriter::finish() {
  if (finished_) return;
  out_.close();
  if (!out_) throw Error(ErrorCode::kIo, "close failed for " + partial_.string());
  std::filesystem::rename(partial_, path_);
  finished_ = true;
}

InstanceReader::InstanceReader(const std::filesystem::path& path, const Vocabulary* expected_vocab)
    : in_(path, std::ios::binary) {
  if (!in_) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  char magic[4] = {};
  in_.read(magic, 4);
  if (in_.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, path.string() + " is not an instance file");
  }
  const std::string raw = read_exact(in_, 28);
  Cursor c(raw);
  header_.version = c.get<std::uint32_t>();
  if (header_.version != kInstanceFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "instance format version " + std::to_string(header_.version) + ", expected " +
                    std::to_string(kInstanceFormatVersion));
  }
  header_.max_seq_len = c.get<std::uint32_t>();
  header_.vocab_checksum = c.get<std::uint64_t>();
  header_.max_predictions = c.get<std::uint32_t>();
  const auto bits = c.get<std::uint64_t>();
  std::memcpy(&header_.masked_lm_prob, &bits, sizeof bits);
  if (expected_vocab != nullptr && expected_vocab->checksum() != header_.vocab_checksum) {
    throw Error(ErrorCode::kVocabMismatch,
                "instance file was generated with a different vocabulary (checksum " +
                    std::to_string(header_.vocab_checksum) + " vs " +
                    std::to_string(expected_vocab->checksum()) + ")");
  }
}

bool InstanceReader::next(PretrainingInstance& x) {
  bool eof = false;
  const std::string length_bytes = read_exact(in_, 4, &eof);
  if (eof) return false;
  const auto length = Cursor(length_bytes).get<std::uint32_t>();
  const std::string payload = read_exact(in_, length);
  Cursor c(payload);
  const auto n = c.get<std::uint16_t>();
  x.ids.resize(n);
  for (auto& id : x.ids) id = c.get<std::uint32_t>();
  x.segment_ids.resize(n);
  for (auto& s : x.segment_ids) s = c.get<std::uint8_t>();
  const auto m = c.get<std::uint16_t>();
  x.masked_positions.resize(m);
  for (auto& p : x.masked_positions) p = c.get<std::uint32_t>();
  x.masked_labels.resize(m);
  for (auto& l : x.masked_labels) l = c.get<std::uint32_t>();
  x.is_random_next = c.get<std::uint8_t>() != 0;
  if (!c.done()) throw Error(ErrorCode::kCorrupt, "trailing bytes in instance record");
  return true;
}

void write_instances(const std::filesystem::path& path,
                     std::span<const PretrainingInstance> instances,
                     const InstanceFileHeader& header) {
  InstanceWriter writer(path, header);
  for (const auto& x : instances) writer.write(x);
  writer.finish();
}

std::vector<PretrainingInstance> read_instances(const std::filesystem::path& path,
                                                const Vocabulary* expected_vocab,
                                                InstanceFileHeader* header) {
  InstanceReader reader(path, expected_vocab);
  if (header != nullptr) *header = reader.header();
  std::vector<PretrainingInstance> out;
  PretrainingInstance x;
  while (reader.next(x)) out.push_back(x);
  return out;
}

}  // namespace bicorpus
