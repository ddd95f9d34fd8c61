#include "bicorpus/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "bicorpus/bpe.hpp"
#include "bicorpus/dedup.hpp"
#include "bicorpus/error.hpp"
#include "bicorpus/examplegen.hpp"
#include "bicorpus/filter.hpp"
#include "bicorpus/hash.hpp"
#include "bicorpus/ingest.hpp"
#include "bicorpus/instance_io.hpp"
#include "bicorpus/parallel.hpp"
#include "bicorpus/random.hpp"
#include "bicorpus/report.hpp"
#include "bicorpus/sample.hpp"
#include "bicorpus/stats.hpp"
#include "bicorpus/unicode.hpp"
#include "bicorpus/vocabulary.hpp"

namespace bicorpus {
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDigestSeed = 0x62636f7270757331ULL;

struct StageInfo {
  Stage stage;
  std::string_view name;
};

constexpr StageInfo kStages[] = {
    {Stage::kIngest, "ingest"},
    {Stage::kFilter, "filter"},
    {Stage::kDedup, "dedup"},
    {Stage::kSample, "sample"},
    {Stage::kTrainVocab, "train-vocab"},
    {Stage::kConvertVocab, "convert-vocab"},
    {Stage::kGenerateExamples, "generate-examples"},
    {Stage::kStats, "stats"},
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::string timestamp(bool fixed_clock) {
  if (fixed_clock) return "1970-01-01T00:00:00Z";
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

fs::path docs_path(std::string_view dir, const SourceSpec& source) {
  return fs::path(dir) / (source.source_id + ".docs");
}

fs::path shard_path(const SourceSpec& source, std::uint64_t pass) {
  return fs::path("examples") / (source.source_id + ".p" + std::to_string(pass) + ".bin");
}

// Per-stage bookkeeping: resolves paths under the output directory, records
// every file written so a failure can mark them partial.
class StageContext {
 public:
  StageContext(Stage stage, fs::path root, const RunOptions& options)
      : stage_(stage), root_(std::move(root)), options_(options) {}

  Stage stage() const { return stage_; }
  unsigned threads() const { return std::max(1u, options_.threads); }
  fs::path path(const fs::path& rel) const { return root_ / rel; }
  const std::vector<fs::path>& outputs() const { return outputs_; }

  fs::path input(const fs::path& rel, std::string_view producer) const {
    const fs::path p = path(rel);
    if (!fs::is_regular_file(p)) {
      throw Error(ErrorCode::kNotFound, "missing input " + rel.generic_string() +
                                            "; run the " + std::string(producer) +
                                            " stage first");
    }
    return p;
  }

  void prepare(const fs::path& rel) const { fs::create_directories(path(rel).parent_path()); }

  void record(const fs::path& rel) { outputs_.push_back(rel); }

  void write(const fs::path& rel, std::string_view contents) {
    prepare(rel);
    write_file_atomic(path(rel), contents);
    record(rel);
  }

  void write_docs(const fs::path& rel, std::span<const Document> documents) {
    prepare(rel);
    write_document_file(path(rel), documents);
    record(rel);
  }

  // Removes a stage-owned directory so stale outputs of earlier runs cannot
  // survive into this one.
  void reset_dir(const fs::path& rel) const {
    fs::remove_all(path(rel));
    fs::create_directories(path(rel));
  }

  void log(const std::string& message) const {
    if (options_.log != nullptr) *options_.log << "[" << stage_name(stage_) << "] " << message << "\n";
  }

  void mark_partial() const {
    for (const auto& rel : outputs_) {
      std::error_code ec;
      const fs::path p = path(rel);
      if (fs::exists(p, ec)) fs::rename(p, fs::path(p.string() + ".partial"), ec);
    }
  }

 private:
  Stage stage_;
  fs::path root_;
  const RunOptions& options_;
  std::vector<fs::path> outputs_;
};

// --- Digests ---------------------------------------------------------------

class Digest {
 public:
  void add(std::string_view label, std::string_view bytes) {
    state_ = hash64(label, state_);
    state_ = hash64(bytes, state_ ^ kDigestSeed);
  }
  void add_file(std::string_view label, const fs::path& path) {
    add(label, fs::is_regular_file(path) ? read_bytes(path) : std::string("<missing>"));
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = kDigestSeed;
};

std::string masking_text(const MaskingConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << c.masked_lm_prob << ' ' << c.mask_token_share << ' ' << c.random_share << ' '
      << c.keep_share << ' ' << c.max_predictions << ' ' << c.max_seq_len << ' '
      << c.short_seq_prob << ' ' << c.random_next_prob << ' ' << c.max_word_chars;
  return out.str();
}

fs::path vocab_input(const Manifest& m, const fs::path& root) {
  return m.examples.vocab ? *m.examples.vocab : root / "vocab" / "vocab.txt";
}

std::uint64_t stage_digest(Stage stage, const Manifest& m, const fs::path& root) {
  Digest d;
  d.add("stage", stage_name(stage));
  std::ostringstream cfg;
  cfg.precision(17);
  switch (stage) {
    case Stage::kIngest:
      for (const auto& s : m.sources) {
        cfg << s.source_id << ' ' << s.language << ' ' << source_format_name(s.format) << ' '
            << s.segment << ' ' << s.paths.size() << ';';
        for (std::size_t i = 0; i < s.paths.size(); ++i) {
          d.add_file(s.source_id + "/" + std::to_string(i), s.paths[i]);
        }
      }
      break;
    case Stage::kFilter: {
      const auto& f = m.filter;
      cfg << f.min_tokens << ' ' << f.max_uppercase_ratio << ' ' << f.max_digit_ratio << ' '
          << f.max_foreign_ratio << ' ' << f.min_lang_confidence << ' '
          << f.min_document_sentences << ' ' << f.max_rejected_share << ' ' << f.language_check;
      for (const auto& [lang, letters] : f.alphabets) cfg << ' ' << lang << '=' << unicode::to_utf8(letters);
      for (const auto& s : m.sources) {
        cfg << ';' << s.source_id << ' ' << s.book;
        d.add_file(s.source_id, root / docs_path("ingest", s));
      }
      break;
    }
    case Stage::kDedup:
      cfg << m.dedup.n << ' ' << m.dedup.threshold << ' ' << static_cast<int>(m.dedup.granularity);
      for (const auto& s : m.sources) d.add_file(s.source_id, root / docs_path("filter", s));
      break;
    case Stage::kSample:
      cfg << m.seed << ' ' << m.vocab.sample_total;
      for (const auto& s : m.sources) {
        cfg << ';' << s.source_id << ' ' << s.language;
        d.add_file(s.source_id, root / docs_path("dedup", s));
      }
      break;
    case Stage::kTrainVocab:
      cfg << m.vocab.target_size << ' ' << m.vocab.min_char_count;
      d.add_file("sample", root / "vocab" / "sample.txt");
      break;
    case Stage::kConvertVocab:
      d.add_file("merges", root / "vocab" / "merges.txt");
      d.add_file("pieces", root / "vocab" / "bpe_pieces.txt");
      if (m.vocab.coverage_reference) d.add_file("reference", *m.vocab.coverage_reference);
      break;
    case Stage::kGenerateExamples:
      cfg << m.seed << ' ' << masking_text(m.examples.masking) << ' '
          << m.examples.duplication_tolerance;
      for (const auto& l : m.examples.balance_languages) cfg << ' ' << l;
      d.add_file("vocab", vocab_input(m, root));
      for (const auto& s : m.sources) {
        cfg << ';' << s.source_id << ' ' << s.language;
        d.add_file(s.source_id, root / docs_path("dedup", s));
      }
      break;
    case Stage::kStats: {
      cfg << m.examples.masking.max_word_chars;
      d.add_file("vocab", vocab_input(m, root));
      for (const auto& s : m.sources) d.add_file(s.source_id, root / docs_path("dedup", s));
      const fs::path examples = root / "examples";
      if (fs::is_directory(examples)) {
        std::vector<fs::path> shards;
        for (const auto& e : fs::directory_iterator(examples)) shards.push_back(e.path());
        std::sort(shards.begin(), shards.end());
        for (const auto& p : shards) d.add_file(p.filename().string(), p);
      }
      break;
    }
  }
  d.add("config", cfg.str());
  return d.value();
}

fs::path stamp_path(Stage stage) {
  return fs::path("stamps") / (std::string(stage_name(stage)) + ".stamp");
}

std::string stamp_text(Stage stage, std::uint64_t digest, const std::vector<fs::path>& outputs) {
  std::string text = "stage=" + std::string(stage_name(stage)) + "\ndigest=" + hex64(digest) + "\n";
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    text += "output." + std::to_string(i) + "=" + outputs[i].generic_string() + "\n";
  }
  return text;
}

// Outputs listed by a stamp whose digest matches, when all of them exist.
std::optional<std::vector<fs::path>> reusable_outputs(Stage stage, std::uint64_t digest,
                                                      const fs::path& root) {
  const fs::path p = root / stamp_path(stage);
  if (!fs::is_regular_file(p)) return std::nullopt;
  const auto kv = KeyValueReport::read(p);
  if (kv.get("digest") != hex64(digest)) return std::nullopt;
  std::vector<fs::path> outputs;
  for (const auto& [key, value] : kv.entries()) {
    if (key.rfind("output.", 0) != 0) continue;
    if (!fs::is_regular_file(root / value)) return std::nullopt;
    outputs.emplace_back(value);
  }
  return outputs;
}

// --- Stages ----------------------------------------------------------------

void run_ingest(const Manifest& m, StageContext& ctx) {
  ctx.reset_dir("ingest");
  KeyValueReport kv;
  for (const auto& source : m.sources) {
    IngestReport report;
    const auto documents = read_corpus(source, &report, ctx.threads());
    ctx.write_docs(docs_path("ingest", source), documents);
    const std::string prefix = "source." + source.source_id;
    kv.set(prefix + ".language", source.language);
    kv.set(prefix + ".files", report.files);
    kv.set(prefix + ".documents", report.documents);
    kv.set(prefix + ".sentences", report.sentences);
    kv.set(prefix + ".decode_repairs", report.decode_repairs);
    for (std::size_t i = 0; i < report.warnings.size(); ++i) {
      kv.set(prefix + ".warning." + std::to_string(i), report.warnings[i]);
      ctx.log("warning: " + report.warnings[i]);
    }
    ctx.log(source.source_id + ": " + std::to_string(report.documents) + " documents, " +
            std::to_string(report.sentences) + " sentences");
  }
  ctx.write("reports/ingest.kv", kv.to_string());
}

void run_filter(const Manifest& m, StageContext& ctx) {
  std::vector<fs::path> inputs;
  for (const auto& source : m.sources) inputs.push_back(ctx.input(docs_path("ingest", source), "ingest"));
  ctx.reset_dir("filter");
  const auto& identifier = LanguageIdentifier::builtin();
  FilterReport report;
  for (std::size_t s = 0; s < m.sources.size(); ++s) {
    const auto& source = m.sources[s];
    const auto documents = read_document_file(inputs[s], true, ctx.threads());
    std::vector<DocumentVerdict> verdicts(documents.size());
    parallel_for(documents.size(), ctx.threads(), [&](std::size_t i) {
      verdicts[i] = filter_document(documents[i], m.filter, source.book, identifier);
    });
    std::vector<Document> kept;
    auto& tally = report.sources[source.source_id];
    for (auto& v : verdicts) {
      tally += v.tally;
      if (v.keep) kept.push_back(std::move(v.document));
    }
    ctx.write_docs(docs_path("filter", source), kept);
    ctx.log(source.source_id + ": kept " + std::to_string(tally.sentences_out) + " of " +
            std::to_string(tally.sentences_in) + " sentences");
  }
  if (!report.balanced()) throw Error(ErrorCode::kCorrupt, "filter counts do not balance");
  ctx.write("reports/filter.kv", report.to_key_values().to_string());
  ctx.write("reports/filter.txt", report.to_text());
}

void run_dedup(const Manifest& m, StageContext& ctx) {
  std::vector<fs::path> inputs;
  for (const auto& source : m.sources) inputs.push_back(ctx.input(docs_path("filter", source), "filter"));
  ctx.reset_dir("dedup");
  ShingleIndex index(m.dedup.n, m.dedup.threshold);
  DedupOptions options{m.dedup.granularity, ctx.threads()};
  DedupReport total;
  KeyValueReport kv;
  kv.set("n", m.dedup.n);
  kv.set("threshold", m.dedup.threshold);
  kv.set("granularity", m.dedup.granularity == DedupGranularity::kDocument ? "document" : "paragraph");
  for (std::size_t s = 0; s < m.sources.size(); ++s) {
    const auto& source = m.sources[s];
    DedupReport report;
    auto kept = dedup_stream(read_document_file(inputs[s], true, ctx.threads()), index, report, options);
    ctx.write_docs(docs_path("dedup", source), kept);
    const auto source_kv = report.to_key_values();
    for (const auto& [key, value] : source_kv.entries()) {
      kv.set("source." + source.source_id + "." + key, value);
    }
    total += report;
    ctx.log(source.source_id + ": dropped " + std::to_string(report.dropped) + " of " +
            std::to_string(report.input));
  }
  const auto total_kv = total.to_key_values();
  for (const auto& [key, value] : total_kv.entries()) kv.set("total." + key, value);
  kv.set("index_size", index.size());
  ctx.write("reports/dedup.kv", kv.to_string());
}

std::vector<std::vector<std::string>> source_sentences(const Manifest& m, StageContext& ctx) {
  std::vector<std::vector<std::string>> out;
  for (const auto& source : m.sources) {
    const auto documents =
        read_document_file(ctx.input(docs_path("dedup", source), "dedup"), false, ctx.threads());
    auto& sentences = out.emplace_back();
    for (const auto& doc : documents) {
      for (const auto& sentence : doc.sentences) sentences.push_back(sentence.text);
    }
  }
  return out;
}

void run_sample(const Manifest& m, StageContext& ctx) {
  auto sentences = source_sentences(m, ctx);
  std::vector<SourceSize> sizes;
  for (std::size_t s = 0; s < m.sources.size(); ++s) {
    sizes.push_back({m.sources[s].source_id, m.sources[s].language, sentences[s].size()});
  }
  std::uint64_t total = m.vocab.sample_total;
  if (total == 0) {
    // Largest feasible balanced sample: the smallest language taken whole.
    std::map<std::string, std::uint64_t> per_language;
    for (const auto& size : sizes) per_language[size.language] += size.sentences;
    std::uint64_t smallest = UINT64_MAX;
    for (const auto& [_, n] : per_language) smallest = std::min(smallest, n);
    total = smallest * per_language.size();
  }
  const SampleQuota quota = plan_sample(sizes, total);
  std::map<std::string, std::vector<std::string>> streams;
  for (std::size_t s = 0; s < m.sources.size(); ++s) {
    streams.emplace(m.sources[s].source_id, std::move(sentences[s]));
  }
  const auto sample = draw_sample(quota, streams, derive_seed(m.seed, "sample"));
  std::string text;
  for (const auto& s : sample) {
    text += s;
    text += '\n';
  }
  ctx.write("vocab/sample.txt", text);
  KeyValueReport kv = quota.to_key_values();
  kv.set("requested_total", m.vocab.sample_total);
  kv.set("sampled", sample.size());
  ctx.write("reports/sample.kv", kv.to_string());
  ctx.log("sampled " + std::to_string(sample.size()) + " sentences");
}

void run_train_vocab(const Manifest& m, StageContext& ctx) {
  const auto lines = read_lines(ctx.input("vocab/sample.txt", "sample"));
  std::vector<std::vector<std::string>> tokenized(lines.size());
  parallel_for(lines.size(), ctx.threads(),
               [&](std::size_t i) { tokenized[i] = basic_tokenize(lines[i]); });
  const WordCounts words = count_words(tokenized);
  BpeOptions options;
  options.target_size = m.vocab.target_size;
  options.min_char_count = m.vocab.min_char_count;
  const BpeResult result = learn_bpe(words, options);

  ctx.prepare("vocab/merges.txt");
  result.rules.write_merges(ctx.path("vocab/merges.txt"));
  ctx.record("vocab/merges.txt");
  write_pieces(ctx.path("vocab/bpe_pieces.txt"), result.pieces);
  ctx.record("vocab/bpe_pieces.txt");

  KeyValueReport kv;
  kv.set("sentences", lines.size());
  kv.set("distinct_words", words.size());
  kv.set("target_size", m.vocab.target_size);
  kv.set("vocab_size", result.vocab_size);
  kv.set("target_reached", result.target_reached);
  kv.set("warning", !result.target_reached);
  kv.set("merges", result.rules.merges.size());
  kv.set("alphabet", result.rules.alphabet.size());
  kv.set("excluded_characters", result.excluded_characters);
  kv.set("skipped_words", result.skipped_words);
  ctx.write("reports/train_vocab.kv", kv.to_string());
  if (!result.target_reached) {
    ctx.log("warning: target " + std::to_string(m.vocab.target_size) + " not reached; vocabulary has " +
            std::to_string(result.vocab_size) + " pieces");
  } else {
    ctx.log("learned " + std::to_string(result.rules.merges.size()) + " merges");
  }
}

void run_convert_vocab(const Manifest& m, StageContext& ctx) {
  MergeRuleList rules;
  rules.merges = MergeRuleList::read_merges(ctx.input("vocab/merges.txt", "train-vocab"));
  const auto pieces = read_pieces(ctx.input("vocab/bpe_pieces.txt", "train-vocab"));
  ConversionReport conversion;
  const Vocabulary vocab = convert_to_wordpiece(rules, pieces, &conversion);
  ctx.write("vocab/vocab.txt", vocab.serialize());

  KeyValueReport kv;
  kv.set("size", vocab.size());
  kv.set("collisions", conversion.collisions);
  kv.set("checksum", hex64(vocab.checksum()));
  if (m.vocab.coverage_reference) {
    const auto reference = read_piece_lines(*m.vocab.coverage_reference);
    const auto coverage = vocab_coverage(vocab.pieces(), reference);
    char percent[32];
    std::snprintf(percent, sizeof percent, "%.1f%%", coverage.fraction * 100.0);
    kv.set("coverage.reference", m.vocab.coverage_reference->filename().string());
    kv.set("coverage.shared", coverage.shared);
    kv.set("coverage.reference_size", coverage.reference_size);
    kv.set("coverage.fraction", coverage.fraction);
    kv.set("coverage.percent", percent);
    ctx.log(std::string("coverage of reference: ") + percent);
  }
  ctx.write("reports/convert_vocab.kv", kv.to_string());
  ctx.log(std::to_string(vocab.size()) + " pieces");
}

void run_generate(const Manifest& m, StageContext& ctx) {
  const fs::path vocab_file = m.examples.vocab ? *m.examples.vocab : ctx.input("vocab/vocab.txt", "convert-vocab");
  const Vocabulary vocab = Vocabulary::load(vocab_file);
  const MaskingConfig& config = m.examples.masking;
  std::vector<fs::path> inputs;
  for (const auto& source : m.sources) inputs.push_back(ctx.input(docs_path("dedup", source), "dedup"));
  ctx.reset_dir("examples");

  const std::size_t n = m.sources.size();
  std::vector<TokenizedCorpus> corpora(n);
  std::vector<std::uint64_t> seeds(n);
  std::vector<SourceInstanceCount> counts(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto& source = m.sources[s];
    const auto documents = read_document_file(inputs[s], true, ctx.threads());
    corpora[s] = tokenize_corpus(documents, vocab, config.max_word_chars, ctx.threads());
    seeds[s] = derive_seed(m.seed, "examples/" + source.source_id);
  }
  parallel_for(n, ctx.threads(), [&](std::size_t s) {
    counts[s] = {m.sources[s].source_id, m.sources[s].language,
                 count_instances(corpora[s], vocab, config, seeds[s])};
  });
  for (const auto& c : counts) {
    if (c.instances == 0) {
      throw Error(ErrorCode::kEmpty, "source '" + c.source_id + "' yields no instances");
    }
  }
  const DuplicationPlan plan =
      plan_duplication(counts, m.examples.balance_languages, m.examples.duplication_tolerance);
  for (const auto& w : plan.warnings) ctx.log("warning: " + w);

  struct Job {
    std::size_t source;
    std::uint64_t pass;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::uint64_t k = 0; k < plan.factor_of(m.sources[s].source_id); ++k) jobs.push_back({s, k});
  }
  for (const auto& job : jobs) ctx.record(shard_path(m.sources[job.source], job.pass));
  const auto header = InstanceFileHeader::for_config(config, vocab);
  std::vector<PassStats> stats(jobs.size());
  parallel_for(jobs.size(), ctx.threads(), [&](std::size_t j) {
    const auto& job = jobs[j];
    InstanceWriter writer(ctx.path(shard_path(m.sources[job.source], job.pass)), header);
    stats[j] = build_pass(corpora[job.source], vocab, config, seeds[job.source], job.pass, true,
                          [&](PretrainingInstance&& x) { writer.write(x); });
    writer.finish();
  });

  KeyValueReport kv;
  std::map<std::string, PassStats> per_source;
  PassStats total;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& id = m.sources[jobs[j].source].source_id;
    const auto& st = stats[j];
    const std::string prefix = "source." + id + ".pass." + std::to_string(jobs[j].pass);
    kv.set(prefix + ".instances", st.instances);
    kv.set(prefix + ".random_next", st.random_next);
    kv.set(prefix + ".masked", st.masked);
    for (PassStats* acc : {&per_source[id], &total}) {
      acc->instances += st.instances;
      acc->random_next += st.random_next;
      acc->same_document_random_next += st.same_document_random_next;
      acc->unpaired_sentences += st.unpaired_sentences;
      acc->non_special_tokens += st.non_special_tokens;
      acc->masked += st.masked;
    }
  }
  auto share = [](std::uint64_t a, std::uint64_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  for (const auto& [id, st] : per_source) {
    const std::string prefix = "source." + id;
    kv.set(prefix + ".instances", st.instances);
    kv.set(prefix + ".same_document_random_next", st.same_document_random_next);
    kv.set(prefix + ".unpaired_sentences", st.unpaired_sentences);
    if (st.same_document_random_next > 0) {
      kv.set(prefix + ".warning", "random-next segments drawn from the same document");
    }
  }
  kv.set("total.instances", total.instances);
  kv.set("total.random_next_share", share(total.random_next, total.instances));
  kv.set("total.masked_fraction", share(total.masked, total.non_special_tokens));
  kv.set("max_seq_len", config.max_seq_len);
  kv.set("vocab_checksum", hex64(vocab.checksum()));
  ctx.write("reports/duplication.kv", plan.to_key_values().to_string());
  ctx.write("reports/generation.kv", kv.to_string());
  ctx.log(std::to_string(total.instances) + " instances in " + std::to_string(jobs.size()) + " shards");
}

void run_stats(const Manifest& m, StageContext& ctx) {
  std::vector<Document> documents;
  for (const auto& source : m.sources) {
    auto docs = read_document_file(ctx.input(docs_path("dedup", source), "dedup"), true, ctx.threads());
    std::move(docs.begin(), docs.end(), std::back_inserter(documents));
  }
  const CorpusStats stats = corpus_stats(documents);
  ctx.write("reports/corpus_stats.kv", stats.to_key_values().to_string());
  ctx.write("reports/corpus_stats.txt", stats.to_table());

  const fs::path vocab_file = vocab_input(m, ctx.path(""));
  if (!fs::is_regular_file(vocab_file)) {
    ctx.log("no vocabulary; fertility and audit skipped");
    return;
  }
  const Vocabulary vocab = Vocabulary::load(vocab_file);
  if (!documents.empty()) {
    const auto fert = fertility(documents, vocab, m.examples.masking.max_word_chars);
    ctx.write("reports/fertility.kv", fertility_report(fert).to_string());
  }

  std::vector<fs::path> shards;
  if (fs::is_directory(ctx.path("examples"))) {
    for (const auto& e : fs::directory_iterator(ctx.path("examples"))) {
      if (e.path().extension() == ".bin") shards.push_back(e.path());
    }
  }
  std::sort(shards.begin(), shards.end());
  std::vector<AuditReport> audits(shards.size());
  parallel_for(shards.size(), ctx.threads(),
               [&](std::size_t i) { audits[i] = audit_instances(shards[i], vocab); });
  AuditReport total;
  KeyValueReport kv;
  for (std::size_t i = 0; i < shards.size(); ++i) {
    kv.set("shard." + shards[i].filename().string() + ".instances", audits[i].instances);
    total += audits[i];
  }
  const auto total_kv = total.to_key_values();
  for (const auto& [key, value] : total_kv.entries()) kv.set(key, value);
  ctx.write("reports/audit.kv", kv.to_string());
  ctx.write("reports/audit.txt", total.to_text());
  ctx.log("audited " + std::to_string(total.instances) + " instances in " +
          std::to_string(shards.size()) + " shards");
  if (total.violations > 0) {
    throw Error(ErrorCode::kCorrupt,
                "audit found " + std::to_string(total.violations) + " invariant violations");
  }
}

void run_stage(Stage stage, const Manifest& m, StageContext& ctx) {
  switch (stage) {
    case Stage::kIngest: return run_ingest(m, ctx);
    case Stage::kFilter: return run_filter(m, ctx);
    case Stage::kDedup: return run_dedup(m, ctx);
    case Stage::kSample: return run_sample(m, ctx);
    case Stage::kTrainVocab: return run_train_vocab(m, ctx);
    case Stage::kConvertVocab: return run_convert_vocab(m, ctx);
    case Stage::kGenerateExamples: return run_generate(m, ctx);
    case Stage::kStats: return run_stats(m, ctx);
  }
}

}  // namespace

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = [] {
    std::vector<Stage> out;
    for (const auto& info : kStages) out.push_back(info.stage);
    return out;
  }();
  return stages;
}

std::string_view stage_name(Stage stage) {
  for (const auto& info : kStages) {
    if (info.stage == stage) return info.name;
  }
  return "unknown";
}

Stage parse_stage(std::string_view name) {
  for (const auto& info : kStages) {
    if (info.name == name) return info.stage;
  }
  if (name == "audit") return Stage::kStats;
  throw Error(ErrorCode::kInvalidArgument, "unknown stage '" + std::string(name) + "'");
}

RunResult run_pipeline(const Manifest& manifest, const std::vector<Stage>& stages,
                       const RunOptions& options) {
  manifest.validate();
  std::vector<Stage> ordered;
  for (Stage s : all_stages()) {
    if (std::find(stages.begin(), stages.end(), s) != stages.end()) ordered.push_back(s);
  }
  const fs::path root = manifest.output_dir;
  fs::create_directories(root);

  RunResult result;
  for (Stage stage : ordered) {
    StageContext ctx(stage, root, options);
    const std::uint64_t digest = stage_digest(stage, manifest, root);
    if (options.resume) {
      if (auto outputs = reusable_outputs(stage, digest, root)) {
        ctx.log("inputs unchanged, skipped (--resume)");
        result.stages.push_back({stage, true, std::move(*outputs)});
        continue;
      }
    }
    try {
      std::error_code ec;
      fs::remove(root / stamp_path(stage), ec);
      run_stage(stage, manifest, ctx);
      const auto outputs = ctx.outputs();
      fs::create_directories(root / "stamps");
      write_file_atomic(root / stamp_path(stage), stamp_text(stage, digest, outputs));
    } catch (const StageFailure&) {
      ctx.mark_partial();
      throw;
    } catch (const std::exception& e) {
      ctx.mark_partial();
      throw StageFailure(stage, e.what());
    }
    result.stages.push_back({stage, false, ctx.outputs()});
  }

  KeyValueReport run;
  run.set("generated_at", timestamp(options.fixed_clock));
  run.set("seed", manifest.seed);
  std::string names;
  for (const auto& outcome : result.stages) {
    if (!names.empty()) names += ",";
    names += stage_name(outcome.stage);
    run.set("stage." + std::string(stage_name(outcome.stage)),
            outcome.skipped ? "skipped" : "ran");
  }
  run.set("stages", names);
  fs::create_directories(root / "reports");
  write_file_atomic(root / "reports" / "run.kv", run.to_string());
  return result;
}

}  // namespace bicorpus
