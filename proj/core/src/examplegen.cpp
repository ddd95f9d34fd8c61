#include "bicorpus/examplegen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bicorpus/error.hpp"
#include "bicorpus/parallel.hpp"
#include "bicorpus/tokenizer.hpp"

namespace bicorpus {

// --- Duplication planning --------------------------------------------------

std::uint64_t DuplicationPlan::factor_of(std::string_view source_id) const {
  for (const auto& s : sources) {
    if (s.source_id == source_id) return s.factor;
  }
  throw Error(ErrorCode::kNotFound, "no duplication factor for source " + std::string(source_id));
}

KeyValueReport DuplicationPlan::to_key_values() const {
  KeyValueReport kv;
  for (const auto& s : sources) {
    const std::string prefix = "source." + s.source_id;
    kv.set(prefix + ".language", s.language);
    kv.set(prefix + ".one_pass", s.one_pass);
    kv.set(prefix + ".factor", s.factor);
    kv.set(prefix + ".target", s.target);
  }
  for (const auto& [language, total] : language_totals) {
    kv.set("language." + language + ".total", total);
  }
  kv.set("reference_total", reference_total);
  kv.set("tolerance", tolerance);
  kv.set("within_tolerance", within_tolerance);
  for (std::size_t i = 0; i < warnings.size(); ++i) {
    kv.set("warning." + std::to_string(i), warnings[i]);
  }
  return kv;
}

DuplicationPlan plan_duplication(const std::vector<SourceInstanceCount>& counts,
                                 const std::set<std::string>& balance_within, double tolerance) {
  DuplicationPlan plan;
  plan.tolerance = tolerance;
  std::map<std::string, std::vector<std::size_t>> by_language;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].instances < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "source " + counts[i].source_id + " yields no instances");
    }
    by_language[counts[i].language].push_back(i);
    plan.sources.push_back({counts[i].source_id, counts[i].language, counts[i].instances, 1, 0.0});
  }
  if (by_language.empty()) return plan;

  std::map<std::string, std::uint64_t> one_pass_totals;
  for (const auto& [language, members] : by_language) {
    for (auto i : members) one_pass_totals[language] += counts[i].instances;
  }
  double reference_sum = 0.0;
  std::size_t reference_languages = 0;
  for (const auto& [language, total] : one_pass_totals) {
    if (!balance_within.count(language)) {
      reference_sum += static_cast<double>(total);
      ++reference_languages;
    }
  }
  if (reference_languages > 0) {
    plan.reference_total = reference_sum / static_cast<double>(reference_languages);
  } else {
    for (const auto& [_, total] : one_pass_totals) {
      plan.reference_total = std::max(plan.reference_total, static_cast<double>(total));
    }
  }

  for (const auto& [language, members] : by_language) {
    if (!balance_within.count(language)) continue;
    const double target = plan.reference_total / static_cast<double>(members.size());
    for (auto i : members) {
      SourceFactor& s = plan.sources[i];
      s.target = target;
      const auto rounded = std::llround(target / static_cast<double>(s.one_pass));
      s.factor = static_cast<std::uint64_t>(std::max<long long>(1, rounded));
    }
  }

  for (const auto& s : plan.sources) plan.language_totals[s.language] += s.factor * s.one_pass;
  for (const auto& [language, total] : plan.language_totals) {
    if (!balance_within.count(language) || plan.reference_total <= 0.0) continue;
    const double deviation =
        std::abs(static_cast<double>(total) - plan.reference_total) / plan.reference_total;
    if (deviation > tolerance) {
      plan.within_tolerance = false;
      plan.warnings.push_back("language " + language + " total " + std::to_string(total) +
                              " deviates from reference by " + std::to_string(deviation));
    }
  }
  return plan;
}

// --- Instance generation ---------------------------------------------------

TokenizedCorpus tokenize_corpus(std::span<const Document> documents, const Vocabulary& vocab,
                                std::size_t max_word_chars, unsigned threads) {
  TokenizedCorpus corpus(documents.size());
  parallel_for(documents.size(), threads, [&](std::size_t d) {
    auto& doc = corpus[d];
    for (const auto& sentence : documents[d].sentences) {
      std::vector<TokenId> ids;
      const auto tokens = sentence.tokens.empty() && !sentence.text.empty()
                              ? basic_tokenize(sentence.text)
                              : sentence.tokens;
      for (const auto& token : tokens) {
        for (const auto& piece : wordpiece_tokenize(token, vocab, max_word_chars)) {
          ids.push_back(vocab.find(piece).value_or(vocab.unk_id()));
        }
      }
      if (!ids.empty()) doc.push_back(std::move(ids));
    }
  });
  return corpus;
}

namespace {

void append(std::vector<TokenId>& out, const std::vector<TokenId>& segment) {
  out.insert(out.end(), segment.begin(), segment.end());
}

// encode_pair truncation: drop from the tail of the longer side (B on ties).
void truncate_pair(std::vector<TokenId>& a, std::vector<TokenId>& b, std::size_t budget) {
  while (a.size() + b.size() > budget) {
    if (a.size() > b.size()) {
      a.pop_back();
    } else {
      b.pop_back();
    }
  }
}

}  // namespace

PassStats build_pass(const TokenizedCorpus& corpus, const Vocabulary& vocab,
                     const MaskingConfig& config, std::uint64_t seed, std::uint64_t pass,
                     bool mask, const std::function<void(PretrainingInstance&&)>& sink) {
  config.validate();
  PassStats stats;
  if (config.max_seq_len < 5) return stats;  // no room for two non-empty segments
  const std::size_t max_tokens = config.max_seq_len - 3;
  Rng pack_rng(derive_seed(seed, "pack", pass));
  Rng mask_rng(derive_seed(seed, "mask", pass));

  auto emit = [&](std::vector<TokenId> a, std::vector<TokenId> b, bool random_next) {
    truncate_pair(a, b, max_tokens);
    if (a.empty() || b.empty()) return;
    PretrainingInstance instance;
    instance.ids.reserve(a.size() + b.size() + 3);
    instance.ids.push_back(vocab.cls_id());
    instance.ids.insert(instance.ids.end(), a.begin(), a.end());
    instance.ids.push_back(vocab.sep_id());
    instance.segment_ids.assign(instance.ids.size(), 0);
    instance.ids.insert(instance.ids.end(), b.begin(), b.end());
    instance.ids.push_back(vocab.sep_id());
    instance.segment_ids.resize(instance.ids.size(), 1);
    instance.is_random_next = random_next;
    stats.non_special_tokens += a.size() + b.size();
    if (mask) {
      MaskedSequence masked = apply_whole_word_masking(instance.ids, vocab, config, mask_rng);
      instance.ids = std::move(masked.ids);
      instance.masked_positions = std::move(masked.positions);
      instance.masked_labels = std::move(masked.labels);
      stats.masked += instance.masked_positions.size();
    }
    ++stats.instances;
    if (random_next) ++stats.random_next;
    sink(std::move(instance));
  };

  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus[d];
    std::size_t target = max_tokens;
    if (pack_rng.uniform01() < config.short_seq_prob) {
      target = static_cast<std::size_t>(pack_rng.uniform_int(2, static_cast<std::int64_t>(max_tokens)));
    }
    std::vector<const std::vector<TokenId>*> chunk;
    std::size_t chunk_length = 0;
    std::size_t i = 0;
    while (i < doc.size()) {
      chunk.push_back(&doc[i]);
      chunk_length += doc[i].size();
      if (i + 1 == doc.size() || chunk_length >= target) {
        std::size_t a_end = 1;
        if (chunk.size() >= 2) {
          a_end = static_cast<std::size_t>(
              pack_rng.uniform_int(1, static_cast<std::int64_t>(chunk.size()) - 1));
        }
        std::vector<TokenId> a;
        for (std::size_t k = 0; k < a_end; ++k) append(a, *chunk[k]);
        std::vector<TokenId> b;
        bool random_next = pack_rng.uniform01() < config.random_next_prob;
        if (!random_next && chunk.size() == 1) {
          // The chunk is a single sentence; its actual continuation is the
          // next sentence of the document. A trailing sentence instead
          // becomes the continuation of the sentence before it.
          if (i + 1 < doc.size()) {
            ++i;
            append(b, doc[i]);
          } else if (i > 0) {
            b = std::move(a);
            a = doc[i - 1];
          } else {
            // A one-sentence document has no continuation to pair with.
            ++stats.unpaired_sentences;
            chunk.clear();
            chunk_length = 0;
            ++i;
            continue;
          }
        }
        if (random_next) {
          const std::size_t target_b = target > a.size() ? target - a.size() : 1;
          std::size_t other = d;
          if (corpus.size() > 1) {
            other = static_cast<std::size_t>(pack_rng.uniform(corpus.size() - 1));
            if (other >= d) ++other;
          } else {
            ++stats.same_document_random_next;
          }
          const auto& random_doc = corpus[other];
          if (!random_doc.empty()) {
            const std::size_t start = static_cast<std::size_t>(pack_rng.uniform(random_doc.size()));
            for (std::size_t j = start; j < random_doc.size(); ++j) {
              append(b, random_doc[j]);
              if (b.size() >= target_b) break;
            }
          }
          // Sentences of the chunk not used for A go back to the stream.
          i -= chunk.size() - a_end;
        } else if (chunk.size() >= 2) {
          for (std::size_t k = a_end; k < chunk.size(); ++k) append(b, *chunk[k]);
        }
        emit(std::move(a), std::move(b), random_next);
        chunk.clear();
        chunk_length = 0;
      }
      ++i;
    }
  }
  return stats;
}

std::uint64_t count_instances(const TokenizedCorpus& corpus, const Vocabulary& vocab,
                              const MaskingConfig& config, std::uint64_t seed) {
  return build_pass(corpus, vocab, config, seed, 0, false, [](PretrainingInstance&&) {}).instances;
}

std::uint64_t GenerationReport::instances() const { return totals().instances; }

PassStats GenerationReport::totals() const {
  PassStats t;
  for (const auto& p : passes) {
    t.instances += p.instances;
    t.random_next += p.random_next;
    t.same_document_random_next += p.same_document_random_next;
    t.unpaired_sentences += p.unpaired_sentences;
    t.non_special_tokens += p.non_special_tokens;
    t.masked += p.masked;
  }
  return t;
}

std::vector<PretrainingInstance> build_instances(std::span<const Document> documents,
                                                 const Vocabulary& vocab,
                                                 const MaskingConfig& config,
                                                 std::uint64_t factor, std::uint64_t seed,
                                                 GenerationReport* report) {
  if (factor < 1) throw Error(ErrorCode::kInvalidArgument, "duplication factor must be >= 1");
  const TokenizedCorpus corpus = tokenize_corpus(documents, vocab, config.max_word_chars);
  std::vector<PretrainingInstance> instances;
  GenerationReport local;
  for (std::uint64_t pass = 0; pass < factor; ++pass) {
    local.passes.push_back(build_pass(corpus, vocab, config, seed, pass, true,
                                      [&](PretrainingInstance&& x) { instances.push_back(std::move(x)); }));
  }
  if (report != nullptr) *report = std::move(local);
  return instances;
}

}  // namespace bicorpus
