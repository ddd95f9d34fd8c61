#include "bicorpus/stats.hpp"

#include <algorithm>
#include <cstdio>

#include "bicorpus/error.hpp"
#include "bicorpus/instance_io.hpp"
#include "bicorpus/tokenizer.hpp"

namespace bicorpus {

TextCounts& TextCounts::operator+=(const TextCounts& other) {
  documents += other.documents;
  sentences += other.sentences;
  tokens += other.tokens;
  return *this;
}

CorpusStats& CorpusStats::operator+=(const CorpusStats& other) {
  for (const auto& [language, counts] : other.languages) {
    auto& mine = languages[language];
    mine.total += counts.total;
    for (const auto& [source, c] : counts.sources) mine.sources[source] += c;
  }
  return *this;
}

TextCounts CorpusStats::total() const {
  TextCounts t;
  for (const auto& [_, l] : languages) t += l.total;
  return t;
}

CorpusStats corpus_stats(std::span<const Document> documents) {
  CorpusStats stats;
  for (const auto& doc : documents) {
    TextCounts c;
    c.documents = 1;
    c.sentences = doc.sentences.size();
    c.tokens = doc.token_count();
    auto& language = stats.languages[doc.language];
    language.total += c;
    language.sources[doc.source_id] += c;
  }
  return stats;
}

std::string abbreviate_count(std::uint64_t n) {
  static constexpr std::pair<std::uint64_t, char> kUnits[] = {
      {1'000'000'000'000ULL, 'T'}, {1'000'000'000ULL, 'B'}, {1'000'000ULL, 'M'}, {1'000ULL, 'K'}};
  for (const auto& [unit, suffix] : kUnits) {
    if (n < unit) continue;
    const double scaled = static_cast<double>(n) / static_cast<double>(unit);
    char buf[32];
    if (scaled < 10.0) {
      std::snprintf(buf, sizeof buf, "%.1f%c", scaled, suffix);
    } else {
      std::snprintf(buf, sizeof buf, "%.0f%c", scaled, suffix);
    }
    return buf;
  }
  return std::to_string(n);
}

KeyValueReport CorpusStats::to_key_values() const {
  KeyValueReport kv;
  for (const auto& [language, counts] : languages) {
    kv.set("language." + language + ".documents", counts.total.documents);
    kv.set("language." + language + ".sentences", counts.total.sentences);
    kv.set("language." + language + ".tokens", counts.total.tokens);
    for (const auto& [source, c] : counts.sources) {
      const std::string prefix = "language." + language + ".source." + source;
      kv.set(prefix + ".documents", c.documents);
      kv.set(prefix + ".sentences", c.sentences);
      kv.set(prefix + ".tokens", c.tokens);
    }
  }
  const TextCounts t = total();
  kv.set("total.documents", t.documents);
  kv.set("total.sentences", t.sentences);
  kv.set("total.tokens", t.tokens);
  return kv;
}

std::string CorpusStats::to_table() const {
  TextCounts t = total();
  TextTable table({"Language / source", "Sentences", "Tokens", "Sentences (exact)", "Tokens (exact)"});
  auto row = [&](const std::string& name, const TextCounts& c) {
    table.add_row({name, abbreviate_count(c.sentences), abbreviate_count(c.tokens),
                   std::to_string(c.sentences), std::to_string(c.tokens)});
  };
  for (const auto& [language, counts] : languages) {
    row(language, counts.total);
    for (const auto& [source, c] : counts.sources) row("  " + source, c);
  }
  row("total", t);
  return table.to_string();
}

double FertilityStats::fertility() const {
  return basic_tokens == 0 ? 0.0 : static_cast<double>(pieces) / static_cast<double>(basic_tokens);
}

std::map<std::string, FertilityStats> fertility(std::span<const Document> documents,
                                                const Vocabulary& vocab,
                                                std::size_t max_word_chars) {
  std::map<std::string, FertilityStats> stats;
  std::uint64_t total = 0;
  for (const auto& doc : documents) {
    auto& s = stats[doc.language];
    for (const auto& sentence : doc.sentences) {
      for (const auto& token : sentence.tokens) {
        const auto pieces = wordpiece_tokenize(token, vocab, max_word_chars);
        ++s.basic_tokens;
        s.pieces += pieces.size();
        if (pieces.size() == 1 && pieces[0] == kSpecialTokens[1]) ++s.unknown;
      }
    }
    total += doc.token_count();
  }
  if (total == 0) throw Error(ErrorCode::kEmpty, "fertility of an empty corpus");
  return stats;
}

KeyValueReport fertility_report(const std::map<std::string, FertilityStats>& stats) {
  KeyValueReport kv;
  for (const auto& [language, s] : stats) {
    kv.set("language." + language + ".basic_tokens", s.basic_tokens);
    kv.set("language." + language + ".pieces", s.pieces);
    kv.set("language." + language + ".unknown", s.unknown);
    kv.set("language." + language + ".fertility", s.fertility());
  }
  return kv;
}

namespace {

double share(std::uint64_t part, std::uint64_t whole) {
  return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

double AuditReport::masked_fraction() const { return share(masked, non_special_tokens); }
double AuditReport::mask_share() const { return share(replaced_with_mask, masked); }
double AuditReport::random_share() const { return share(replaced_with_random, masked); }
double AuditReport::unchanged_share() const { return share(unchanged, masked); }
double AuditReport::random_next_share() const { return share(random_next, instances); }

AuditReport& AuditReport::operator+=(const AuditReport& other) {
  instances += other.instances;
  non_special_tokens += other.non_special_tokens;
  masked += other.masked;
  replaced_with_mask += other.replaced_with_mask;
  replaced_with_random += other.replaced_with_random;
  unchanged += other.unchanged;
  random_next += other.random_next;
  for (const auto& [bucket, n] : other.length_histogram) length_histogram[bucket] += n;
  violations += other.violations;
  for (const auto& v : other.violation_examples) {
    if (violation_examples.size() < 20) violation_examples.push_back(v);
  }
  return *this;
}

KeyValueReport AuditReport::to_key_values() const {
  KeyValueReport kv;
  kv.set("instances", instances);
  kv.set("non_special_tokens", non_special_tokens);
  kv.set("masked", masked);
  kv.set("masked_fraction", masked_fraction());
  kv.set("mask_share", mask_share());
  kv.set("random_share", random_share());
  kv.set("unchanged_share", unchanged_share());
  kv.set("random_next", random_next);
  kv.set("random_next_share", random_next_share());
  for (const auto& [bucket, n] : length_histogram) {
    kv.set("length." + std::to_string(bucket) + "-" + std::to_string(bucket + kLengthBucket - 1), n);
  }
  kv.set("violations", violations);
  for (std::size_t i = 0; i < violation_examples.size(); ++i) {
    kv.set("violation." + std::to_string(i), violation_examples[i]);
  }
  return kv;
}

std::string AuditReport::to_text() const {
  TextTable summary({"measure", "value"});
  summary.add_row({"instances", std::to_string(instances)});
  summary.add_row({"masked fraction", format_fraction(masked_fraction(), 4)});
  summary.add_row({"[MASK] share", format_fraction(mask_share(), 4)});
  summary.add_row({"random share", format_fraction(random_share(), 4)});
  summary.add_row({"unchanged share", format_fraction(unchanged_share(), 4)});
  summary.add_row({"random-next share", format_fraction(random_next_share(), 4)});
  summary.add_row({"invariant violations", std::to_string(violations)});
  TextTable lengths({"length", "instances"});
  for (const auto& [bucket, n] : length_histogram) {
    lengths.add_row({std::to_string(bucket) + "-" + std::to_string(bucket + kLengthBucket - 1),
                     std::to_string(n)});
  }
  return summary.to_string() + "\n" + lengths.to_string();
}

std::uint64_t check_instance(const PretrainingInstance& x, const Vocabulary& vocab,
                             const InstanceFileHeader& header, std::vector<std::string>* problems) {
  std::uint64_t violations = 0;
  auto fail = [&](const std::string& what) {
    ++violations;
    if (problems != nullptr) problems->push_back(what);
  };

  const std::size_t n = x.ids.size();
  if (x.segment_ids.size() != n) fail("ids and segment ids differ in length");
  if (header.max_seq_len != 0 && n > header.max_seq_len) fail("sequence longer than max_seq_len");
  if (x.masked_positions.size() != x.masked_labels.size()) {
    fail("masked positions and labels differ in length");
    return violations;
  }

  // Original sequence: labels restore the masked positions.
  std::vector<TokenId> original = x.ids;
  bool positions_ok = true;
  for (std::size_t k = 0; k < x.masked_positions.size(); ++k) {
    const auto p = x.masked_positions[k];
    if (p >= n || (k > 0 && x.masked_positions[k - 1] >= p)) {
      positions_ok = false;
      continue;
    }
    original[p] = x.masked_labels[k];
  }
  if (!positions_ok) {
    fail("masked positions out of range or not strictly ascending");
    return violations;
  }
  for (auto id : original) {
    if (id >= vocab.size()) {
      fail("token id outside the vocabulary");
      return violations;
    }
  }

  // [CLS] A [SEP] (B [SEP]); segment 0 through the first [SEP].
  std::vector<std::size_t> seps;
  for (std::size_t i = 0; i < n; ++i) {
    if (original[i] == vocab.sep_id()) seps.push_back(i);
  }
  const bool layout_ok = n >= 2 && original[0] == vocab.cls_id() && !seps.empty() &&
                         seps.back() == n - 1 && seps.size() <= 2;
  if (!layout_ok) {
    fail("layout is not [CLS] A [SEP] B [SEP]");
  } else if (x.segment_ids.size() == n) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t expected = i <= seps.front() ? 0 : 1;
      if (x.segment_ids[i] != expected) {
        fail("segment ids do not switch after the first [SEP]");
        break;
      }
    }
  }
  if (std::count(original.begin() + 1, original.end(), vocab.cls_id()) > 0) fail("stray [CLS]");

  std::size_t non_special = 0;
  for (auto id : original) non_special += vocab.is_special(id) ? 0 : 1;
  for (std::size_t k = 0; k < x.masked_positions.size(); ++k) {
    if (vocab.is_special(x.masked_labels[k])) {
      fail("masked position " + std::to_string(x.masked_positions[k]) + " holds a special token");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (x.ids[i] == vocab.mask_id() &&
        !std::binary_search(x.masked_positions.begin(), x.masked_positions.end(), i)) {
      fail("[MASK] at unrecorded position " + std::to_string(i));
    }
  }

  MaskingConfig budget_config;
  budget_config.masked_lm_prob = header.masked_lm_prob;
  budget_config.max_predictions = header.max_predictions == 0 ? SIZE_MAX : header.max_predictions;
  if (non_special > 0 && x.masked_positions.size() > prediction_budget(non_special, budget_config)) {
    fail("more predictions than the masking budget allows");
  }

  for (const auto& word : whole_words(original, vocab)) {
    std::size_t hit = 0;
    for (auto p : word) {
      hit += std::binary_search(x.masked_positions.begin(), x.masked_positions.end(), p) ? 1 : 0;
    }
    if (hit != 0 && hit != word.size()) {
      fail("partially masked word at position " + std::to_string(word.front()));
    }
  }
  return violations;
}

AuditReport audit_instances(const std::filesystem::path& path, const Vocabulary& vocab) {
  InstanceReader reader(path, &vocab);
  AuditReport report;
  PretrainingInstance x;
  std::vector<std::string> problems;
  while (reader.next(x)) {
    ++report.instances;
    if (x.is_random_next) ++report.random_next;
    const auto length = static_cast<std::uint32_t>(x.ids.size());
    ++report.length_histogram[length / kLengthBucket * kLengthBucket];

    problems.clear();
    report.violations += check_instance(x, vocab, reader.header(), &problems);
    for (const auto& p : problems) {
      if (report.violation_examples.size() < 20) {
        report.violation_examples.push_back("instance " + std::to_string(report.instances - 1) +
                                            ": " + p);
      }
    }

    for (std::size_t i = 0; i < x.ids.size(); ++i) {
      const bool masked =
          std::binary_search(x.masked_positions.begin(), x.masked_positions.end(), i);
      if (!masked && !vocab.is_special(x.ids[i])) ++report.non_special_tokens;
    }
    for (std::size_t k = 0; k < x.masked_positions.size() && k < x.masked_labels.size(); ++k) {
      const auto p = x.masked_positions[k];
      if (p >= x.ids.size()) continue;
      ++report.masked;
      ++report.non_special_tokens;
      if (x.ids[p] == vocab.mask_id()) {
        ++report.replaced_with_mask;
      } else if (x.ids[p] == x.masked_labels[k]) {
        ++report.unchanged;
      } else {
        ++report.replaced_with_random;
      }
    }
  }
  return report;
}

}  // namespace bicorpus
