#include "bicorpus/filter.hpp"

#include <regex>

#include "bicorpus/error.hpp"
#include "bicorpus/unicode.hpp"

namespace bicorpus {

std::string_view reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::kShort: return "short";
    case RejectReason::kUppercase: return "uppercase";
    case RejectReason::kDigits: return "digits";
    case RejectReason::kForeign: return "foreign";
    case RejectReason::kLanguage: return "language";
    case RejectReason::kBookBoilerplate: return "book-boilerplate";
    case RejectReason::kTooFewSentences: return "too-few-sentences";
    case RejectReason::kMajorityRejected: return "majority-rejected";
  }
  return "unknown";
}

std::map<std::string, std::u32string> FilterConfig::default_alphabets() {
  std::u32string latin;
  for (char32_t c = U'a'; c <= U'z'; ++c) latin.push_back(c);
  for (char32_t c = U'A'; c <= U'Z'; ++c) latin.push_back(c);
  return {
      {"en", latin},
      {"fi", latin + U"åäöÅÄÖšžŠŽ"},
  };
}

void FilterConfig::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be in [0, 1]");
    }
  };
  check(max_uppercase_ratio, "max_uppercase_ratio");
  check(max_digit_ratio, "max_digit_ratio");
  check(max_foreign_ratio, "max_foreign_ratio");
  check(min_lang_confidence, "min_lang_confidence");
  check(max_rejected_share, "max_rejected_share");
  if (min_tokens < 1) throw Error(ErrorCode::kInvalidArgument, "min_tokens must be >= 1");
}

std::size_t FilterTally::rejected_total() const {
  std::size_t n = 0;
  for (std::size_t r : rejected) n += r;
  return n;
}

bool FilterTally::balanced() const { return sentences_in == sentences_out + rejected_total(); }

FilterTally& FilterTally::operator+=(const FilterTally& other) {
  sentences_in += other.sentences_in;
  sentences_out += other.sentences_out;
  tokens_in += other.tokens_in;
  tokens_out += other.tokens_out;
  documents_in += other.documents_in;
  documents_out += other.documents_out;
  for (std::size_t i = 0; i < kRejectReasonCount; ++i) rejected[i] += other.rejected[i];
  return *this;
}

FilterTally FilterReport::total() const {
  FilterTally t;
  for (const auto& [_, tally] : sources) t += tally;
  return t;
}

bool FilterReport::balanced() const {
  for (const auto& [_, tally] : sources) {
    if (!tally.balanced()) return false;
  }
  return true;
}

void FilterReport::merge(const FilterReport& other) {
  for (const auto& [source, tally] : other.sources) sources[source] += tally;
}

KeyValueReport FilterReport::to_key_values() const {
  KeyValueReport kv;
  auto emit = [&](const std::string& prefix, const FilterTally& t) {
    kv.set(prefix + ".documents_in", t.documents_in);
    kv.set(prefix + ".documents_out", t.documents_out);
    kv.set(prefix + ".sentences_in", t.sentences_in);
    kv.set(prefix + ".sentences_out", t.sentences_out);
    kv.set(prefix + ".tokens_in", t.tokens_in);
    kv.set(prefix + ".tokens_out", t.tokens_out);
    for (std::size_t i = 0; i < kRejectReasonCount; ++i) {
      kv.set(prefix + ".rejected." +
                 std::string(reject_reason_name(static_cast<RejectReason>(i))),
             t.rejected[i]);
    }
  };
  for (const auto& [source, tally] : sources) emit("source." + source, tally);
  emit("total", total());
  kv.set("balanced", balanced());
  return kv;
}

std::string FilterReport::to_text() const {
  std::vector<std::string> header = {"source", "docs in", "docs out", "sent in", "sent out"};
  for (std::size_t i = 0; i < kRejectReasonCount; ++i) {
    header.emplace_back(reject_reason_name(static_cast<RejectReason>(i)));
  }
  TextTable table(header);
  auto row = [&](const std::string& name, const FilterTally& t) {
    std::vector<std::string> cells = {name, std::to_string(t.documents_in),
                                      std::to_string(t.documents_out),
                                      std::to_string(t.sentences_in),
                                      std::to_string(t.sentences_out)};
    for (std::size_t r : t.rejected) cells.push_back(std::to_string(r));
    table.add_row(std::move(cells));
  };
  for (const auto& [source, tally] : sources) row(source, tally);
  row("total", total());
  return table.to_string();
}

SentenceVerdict filter_sentence(const Sentence& sentence, std::string_view language,
                                const FilterConfig& config,
                                const LanguageIdentifier& identifier) {
  auto reject = [](RejectReason r) { return SentenceVerdict{false, r}; };
  if (sentence.tokens.size() < config.min_tokens) return reject(RejectReason::kShort);

  const auto alphabet_it = config.alphabets.find(std::string(language));
  const std::u32string* alphabet =
      alphabet_it == config.alphabets.end() ? nullptr : &alphabet_it->second;

  std::size_t characters = 0, letters = 0, upper = 0, digits = 0, foreign = 0;
  for (char32_t c : unicode::to_u32(sentence.text)) {
    if (unicode::is_whitespace(c)) continue;
    ++characters;
    if (unicode::is_digit(c)) ++digits;
    if (unicode::is_letter(c)) {
      ++letters;
      if (unicode::is_upper(c)) ++upper;
      if (alphabet != nullptr && alphabet->find(c) == std::u32string::npos) ++foreign;
    }
  }
  auto ratio = [](std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
  };
  if (ratio(upper, letters) > config.max_uppercase_ratio) return reject(RejectReason::kUppercase);
  if (ratio(digits, characters) > config.max_digit_ratio) return reject(RejectReason::kDigits);
  if (ratio(foreign, letters) > config.max_foreign_ratio) return reject(RejectReason::kForeign);

  if (config.language_check) {
    const auto detection = identifier.try_detect(sentence.text);
    if (!detection || detection->language != language ||
        detection->confidence < config.min_lang_confidence) {
      return reject(RejectReason::kLanguage);
    }
  }
  return {};
}

bool is_book_boilerplate(std::string_view line) {
  static const std::regex patterns(
      // table of contents headings and dotted/padded page-number entries
      R"(^\s*(table of contents|contents|sisällys(luettelo)?)\s*$)"
      R"(|^.{1,80}?(\.{3,}|\s{3,}|\t)\s*\d{1,4}\s*$)"
      R"(|^\s*(chapter|luku)\s+([0-9]+|[ivxlc]+)\b.{0,60}?\s\d{1,4}\s*$)"
      // copyright and publishing notices
      R"(|copyright|\(c\)\s*\d{4}|©|all rights reserved|kaikki oikeudet pidätetään|\bisbn\b)"
      // reference sections and entries
      R"(|^\s*(references|bibliography|works cited|lähteet|kirjallisuus)\s*$)"
      R"(|^\s*\[\d+\]\s)"
      R"(|^\s*\d+\.\s+[A-Z][^.]{0,60}\(\d{4}\))",
      std::regex::icase | std::regex::optimize);
  return std::regex_search(line.begin(), line.end(), patterns);
}

DocumentVerdict filter_document(const Document& document, const FilterConfig& config, bool book,
                                const LanguageIdentifier& identifier) {
  DocumentVerdict verdict;
  FilterTally& tally = verdict.tally;
  tally.documents_in = 1;

  Document kept;
  kept.doc_id = document.doc_id;
  kept.source_id = document.source_id;
  kept.language = document.language;

  std::size_t evaluated = 0;
  std::size_t rejected = 0;
  for (const auto& sentence : document.sentences) {
    ++tally.sentences_in;
    tally.tokens_in += sentence.tokens.size();
    if (book && is_book_boilerplate(sentence.text)) {
      ++tally.rejected[static_cast<std::size_t>(RejectReason::kBookBoilerplate)];
      continue;
    }
    ++evaluated;
    const SentenceVerdict v = filter_sentence(sentence, document.language, config, identifier);
    if (!v.keep) {
      ++rejected;
      ++tally.rejected[static_cast<std::size_t>(v.reason)];
      continue;
    }
    kept.sentences.push_back(sentence);
  }

  const bool too_few = kept.sentences.size() < config.min_document_sentences;
  const bool majority = evaluated > 0 && static_cast<double>(rejected) >
                                             config.max_rejected_share * static_cast<double>(evaluated);
  if (too_few || majority) {
    verdict.keep = false;
    verdict.reason = majority ? RejectReason::kMajorityRejected : RejectReason::kTooFewSentences;
    tally.rejected[static_cast<std::size_t>(verdict.reason)] += kept.sentences.size();
    return verdict;
  }
  tally.documents_out = 1;
  tally.sentences_out = kept.sentences.size();
  for (const auto& s : kept.sentences) tally.tokens_out += s.tokens.size();
  verdict.document = std::move(kept);
  return verdict;
}

}  // namespace bicorpus
