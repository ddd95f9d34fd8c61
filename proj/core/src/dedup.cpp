#include "bicorpus/dedup.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "bicorpus/error.hpp"
#include "bicorpus/hash.hpp"
#include "bicorpus/parallel.hpp"
#include "bicorpus/unicode.hpp"

namespace bicorpus {

std::vector<std::uint64_t> shingles(std::span<const std::string> tokens, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "shingle order must be >= 2");
  std::vector<std::uint64_t> out;
  if (tokens.size() < n) return out;
  std::vector<std::string> folded;
  folded.reserve(tokens.size());
  for (const auto& t : tokens) folded.push_back(unicode::fold_case(t));
  out.reserve(tokens.size() - n + 1);
  std::string window;
  for (std::size_t i = 0; i + n <= folded.size(); ++i) {
    window.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) window += '\x1f';
      window += folded[i + j];
    }
    out.push_back(hash64(window, kShingleSeed));
  }
  return out;
}

ShingleIndex::ShingleIndex(std::size_t n, double threshold) : n_(n), threshold_(threshold) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "shingle order must be >= 2");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "dedup threshold must be in (0, 1]");
  }
}

void ShingleIndex::insert(std::span<const std::uint64_t> hashes) {
  seen_.insert(hashes.begin(), hashes.end());
}

double ShingleIndex::overlap(std::span<const std::uint64_t> hashes) const {
  if (hashes.empty()) return 0.0;
  std::size_t hits = 0;
  for (auto h : hashes) hits += contains(h) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(hashes.size());
}

namespace {

constexpr char kIndexMagic[4] = {'B', 'C', 'S', 'H'};
constexpr std::uint32_t kIndexVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(ErrorCode::kCorrupt, "truncated shingle index");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void ShingleIndex::save(const std::filesystem::path& path) const {
  std::vector<std::uint64_t> sorted(seen_.begin(), seen_.end());
  std::sort(sorted.begin(), sorted.end());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(kIndexMagic, 4);
  put_le<std::uint32_t>(out, kIndexVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(n_));
  std::uint64_t threshold_bits;
  std::memcpy(&threshold_bits, &threshold_, sizeof threshold_bits);
  put_le<std::uint64_t>(out, threshold_bits);
  put_le<std::uint64_t>(out, sorted.size());
  for (auto h : sorted) put_le<std::uint64_t>(out, h);
}

ShingleIndex ShingleIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kIndexMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, path.string() + " is not a shingle index");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kIndexVersion) {
    throw Error(ErrorCode::kVersionMismatch, "shingle index version " + std::to_string(version));
  }
  const auto n = get_le<std::uint32_t>(in);
  const auto threshold_bits = get_le<std::uint64_t>(in);
  double threshold;
  std::memcpy(&threshold, &threshold_bits, sizeof threshold);
  ShingleIndex index(n, threshold);
  const auto count = get_le<std::uint64_t>(in);
  index.seen_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) index.seen_.insert(get_le<std::uint64_t>(in));
  return index;
}

DedupReport& DedupReport::operator+=(const DedupReport& other) {
  input += other.input;
  kept += other.kept;
  dropped += other.dropped;
  short_kept += other.short_kept;
  documents_in += other.documents_in;
  documents_out += other.documents_out;
  return *this;
}

KeyValueReport DedupReport::to_key_values() const {
  KeyValueReport kv;
  kv.set("input", input);
  kv.set("kept", kept);
  kv.set("dropped", dropped);
  kv.set("short_kept", short_kept);
  kv.set("documents_in", documents_in);
  kv.set("documents_out", documents_out);
  kv.set("balanced", balanced());
  return kv;
}

namespace {

std::vector<std::string> document_tokens(const Document& doc) {
  std::vector<std::string> tokens;
  tokens.reserve(doc.token_count());
  for (const auto& s : doc.sentences) tokens.insert(tokens.end(), s.tokens.begin(), s.tokens.end());
  return tokens;
}

}  // namespace

std::vector<Document> dedup_stream(std::vector<Document> documents, ShingleIndex& index,
                                   DedupReport& report, const DedupOptions& options) {
  const bool paragraphs = options.granularity == DedupGranularity::kParagraph;

  // Shingles for every unit are computed up front (in parallel); the
  // keep/drop decisions below stay strictly sequential in input order.
  std::vector<std::vector<std::vector<std::uint64_t>>> unit_shingles(documents.size());
  parallel_for(documents.size(), options.threads, [&](std::size_t i) {
    const Document& doc = documents[i];
    if (paragraphs) {
      for (const auto& s : doc.sentences) unit_shingles[i].push_back(shingles(s.tokens, index.n()));
    } else {
      unit_shingles[i].push_back(shingles(document_tokens(doc), index.n()));
    }
  });

  auto decide = [&](const std::vector<std::uint64_t>& hashes) {
    ++report.input;
    if (hashes.empty()) {
      ++report.short_kept;
      return true;
    }
    if (index.overlap(hashes) > index.threshold()) {
      ++report.dropped;
      return false;
    }
    ++report.kept;
    index.insert(hashes);
    return true;
  };

  std::vector<Document> kept;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    ++report.documents_in;
    Document& doc = documents[i];
    if (paragraphs) {
      std::vector<Sentence> survivors;
      for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        if (decide(unit_shingles[i][s])) survivors.push_back(std::move(doc.sentences[s]));
      }
      if (survivors.empty()) continue;
      doc.sentences = std::move(survivors);
    } else if (!decide(unit_shingles[i][0])) {
      continue;
    }
    ++report.documents_out;
    kept.push_back(std::move(doc));
  }
  return kept;
}

}  // namespace bicorpus
