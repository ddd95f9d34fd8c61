#include <gtest/gtest.h>

#include "bicorpus/error.hpp"
#include "bicorpus/filter.hpp"
#include "bicorpus/ingest.hpp"
#include "bicorpus/langid.hpp"
#include "bicorpus/unicode.hpp"
#include "generators.hpp"

using namespace bicorpus;
using bicorpus::testing::Gen;

namespace {

Sentence tokenized(std::string text) {
  Sentence s;
  s.tokens = basic_tokenize(text);
  s.text = std::move(text);
  return s;
}

Document document_of(const std::vector<std::string>& lines, std::string language = "en") {
  Document d;
  d.doc_id = "s/0/0";
  d.source_id = "s";
  d.language = std::move(language);
  for (const auto& line : lines) d.sentences.push_back(tokenized(line));
  return d;
}

const std::vector<std::string>& english_lines() {
  static const std::vector<std::string> lines = {
      "This is an ordinary clean sentence.",
      "The committee published its annual report on Tuesday morning.",
      "Most visitors arrive by train and walk to the old harbour.",
      "She said that the weather would improve later in the week.",
      "The library will remain closed during the summer holidays.",
      "Researchers have studied the behaviour of these birds for years.",
      "THE MEETING HAS BEEN CANCELLED UNTIL FURTHER NOTICE.",
      "Call 555 1234 5678 9012 now.",
      "Ok.",
      "Tämä on suomenkielinen lause eikä mitään muuta.",
      "Привет мир как дела сегодня вечером.",
      "In 1999 about 4500 people lived in the 12 villages.",
  };
  return lines;
}

}  // namespace

TEST(LanguageDetection, DetectsEnglish) {
  const auto d = LanguageIdentifier::builtin().detect("the quick brown fox jumps over the lazy dog");
  EXPECT_EQ(d.language, "en");
  EXPECT_GT(d.confidence, 0.5);
}

TEST(LanguageDetection, DetectsFinnish) {
  const auto d =
      LanguageIdentifier::builtin().detect("tämä on suomenkielinen lause eikä mitään muuta");
  EXPECT_EQ(d.language, "fi");
  EXPECT_GT(d.confidence, 0.5);
}

TEST(LanguageDetection, NoLettersIsUndetectable) {
  try {
    LanguageIdentifier::builtin().detect("12345 678");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndetectable);
  }
  EXPECT_FALSE(LanguageIdentifier::builtin().try_detect("12345 678").has_value());
}

TEST(LanguageDetection, ConfidenceIsAFraction) {
  Gen gen(3);
  for (int i = 0; i < 200; ++i) {
    const auto d = LanguageIdentifier::builtin().try_detect(gen.messy_text(10));
    if (!d) continue;
    EXPECT_GE(d->confidence, 0.0);
    EXPECT_LE(d->confidence, 1.0);
  }
}

TEST(NgramKey, PacksAndUnpacks) {
  for (const std::u32string gram : {U"a", U"_ab", U"äö_", U"東京"}) {
    EXPECT_EQ(ngram_text(ngram_key(gram)), unicode::to_utf8(gram));
  }
  EXPECT_LT(ngram_key(U"ab"), ngram_key(U"b"));
  EXPECT_LT(ngram_key(U"a"), ngram_key(U"ab"));
}

TEST(NgramKey, RankedNgramsCountPaddedWords) {
  const auto ranked = ranked_ngrams("aa aa", 3);
  ASSERT_EQ(ranked.size(), 3u);
  // "_aa_" twice: a x4, then 2-grams and 3-grams x2; the bare pad is not a gram.
  EXPECT_EQ(ranked[0], (std::pair<std::string, std::size_t>{"a", 4}));
  EXPECT_EQ(ranked[1].second, 2u);
  EXPECT_EQ(ranked[2].second, 2u);
  for (const auto& [gram, _] : ranked_ngrams("aa aa", 100)) EXPECT_NE(gram, "_");
}

TEST(FilterSentence, ShortSentence) {
  FilterConfig config;
  const auto v = filter_sentence(tokenized("Hi."), "en", config);
  EXPECT_FALSE(v.keep);
  EXPECT_EQ(v.reason, RejectReason::kShort);
}

TEST(FilterSentence, Uppercase) {
  FilterConfig config;
  const auto v = filter_sentence(tokenized("SHOUTING VERY LOUDLY NOW"), "en", config);
  EXPECT_FALSE(v.keep);
  EXPECT_EQ(v.reason, RejectReason::kUppercase);
}

TEST(FilterSentence, OrdinarySentenceIsKept) {
  EXPECT_TRUE(filter_sentence(tokenized("This is an ordinary clean sentence."), "en", FilterConfig{}).keep);
}

TEST(FilterSentence, Digits) {
  const auto v = filter_sentence(tokenized("Call 555 1234 5678 9012 now."), "en", FilterConfig{});
  EXPECT_FALSE(v.keep);
  EXPECT_EQ(v.reason, RejectReason::kDigits);
}

TEST(FilterSentence, ForeignCharacters) {
  const auto v = filter_sentence(tokenized("Привет мир как дела сегодня вечером."), "en", FilterConfig{});
  EXPECT_FALSE(v.keep);
  EXPECT_EQ(v.reason, RejectReason::kForeign);
}

TEST(FilterSentence, WrongLanguage) {
  const auto v =
      filter_sentence(tokenized("Tämä on suomenkielinen lause eikä mitään muuta."), "en", FilterConfig{});
  EXPECT_FALSE(v.keep);
  // Finnish letters ä, ö are outside the English alphabet; either rule may fire first.
  EXPECT_TRUE(v.reason == RejectReason::kForeign || v.reason == RejectReason::kLanguage);
  const auto fi = filter_sentence(tokenized("The committee published its annual report on Tuesday."),
                                  "fi", FilterConfig{});
  EXPECT_FALSE(fi.keep);
  EXPECT_EQ(fi.reason, RejectReason::kLanguage);
}

TEST(FilterSentence, FirstFailingRuleWins) {
  // Short and uppercase: short is checked first.
  const auto v = filter_sentence(tokenized("NO!"), "en", FilterConfig{});
  EXPECT_EQ(v.reason, RejectReason::kShort);
}

TEST(FilterDocument, MajorityRejected) {
  const auto d = document_of({"This is an ordinary clean sentence.", "Hi.", "Ok."});
  const auto v = filter_document(d, FilterConfig{});
  EXPECT_FALSE(v.keep);
  EXPECT_EQ(v.reason, RejectReason::kMajorityRejected);
  EXPECT_TRUE(v.tally.balanced());
}

TEST(FilterDocument, CleanDocumentKept) {
  const std::vector<std::string> lines(english_lines().begin(), english_lines().begin() + 4);
  const auto v = filter_document(document_of(lines), FilterConfig{});
  ASSERT_TRUE(v.keep);
  EXPECT_EQ(v.document.sentences.size(), 4u);
}

TEST(FilterDocument, BookBoilerplateDroppedFirst) {
  const auto d = document_of({"Copyright © 2010 by the author and publisher.",
                              "The library will remain closed during the summer holidays.",
                              "Most visitors arrive by train and walk to the old harbour."});
  EXPECT_TRUE(is_book_boilerplate("Copyright © 2010 by the author and publisher."));
  const auto v = filter_document(d, FilterConfig{}, true);
  ASSERT_TRUE(v.keep);
  EXPECT_EQ(v.document.sentences.size(), 2u);
  EXPECT_EQ(v.tally.rejected[static_cast<std::size_t>(RejectReason::kBookBoilerplate)], 1u);
  // Without the book flag the line is an ordinary sentence.
  EXPECT_EQ(filter_document(d, FilterConfig{}, false).document.sentences.size(), 3u);
}

TEST(FilterDocument, BoilerplatePatterns) {
  EXPECT_TRUE(is_book_boilerplate("Table of Contents"));
  EXPECT_TRUE(is_book_boilerplate("All rights reserved."));
  EXPECT_TRUE(is_book_boilerplate("Chapter 3 ........ 45"));
  EXPECT_FALSE(is_book_boilerplate("He opened the book and began to read."));
}

TEST(FilterConfigValidation, RejectsBadRatios) {
  FilterConfig config;
  config.max_digit_ratio = 1.5;
  EXPECT_THROW(config.validate(), Error);
  config = FilterConfig{};
  config.min_tokens = 0;
  EXPECT_THROW(config.validate(), Error);
}

namespace {

Document random_document(Gen& gen) {
  std::vector<std::string> lines;
  const auto n = gen.size(1, 6);
  for (std::size_t i = 0; i < n; ++i) lines.push_back(gen.pick(english_lines()));
  return document_of(lines);
}

std::size_t kept_sentences(const std::vector<Document>& docs, const FilterConfig& config) {
  std::size_t kept = 0;
  for (const auto& d : docs) {
    const auto v = filter_document(d, config);
    if (v.keep) kept += v.document.sentences.size();
  }
  return kept;
}

}  // namespace

TEST(FilterProperties, IdempotentOnKeptDocuments) {
  Gen gen(21);
  for (int i = 0; i < 300; ++i) {
    const auto first = filter_document(random_document(gen), FilterConfig{});
    if (!first.keep) continue;
    const auto second = filter_document(first.document, FilterConfig{});
    ASSERT_TRUE(second.keep);
    EXPECT_EQ(second.document, first.document);
  }
}

TEST(FilterProperties, TallyBalances) {
  Gen gen(22);
  FilterReport report;
  for (int i = 0; i < 300; ++i) {
    const auto v = filter_document(random_document(gen), FilterConfig{}, gen.coin(0.2));
    EXPECT_TRUE(v.tally.balanced());
    report.sources["s"] += v.tally;
  }
  EXPECT_TRUE(report.balanced());
  const auto t = report.total();
  EXPECT_EQ(t.sentences_in, t.sentences_out + t.rejected_total());
}

TEST(FilterProperties, TighteningAThresholdNeverKeepsMore) {
  Gen gen(23);
  std::vector<Document> docs;
  for (int i = 0; i < 200; ++i) docs.push_back(random_document(gen));
  const FilterConfig base;
  const std::size_t baseline = kept_sentences(docs, base);
  std::vector<FilterConfig> tighter(5, base);
  tighter[0].min_tokens = 6;
  tighter[1].max_uppercase_ratio = 0.1;
  tighter[2].max_digit_ratio = 0.05;
  tighter[3].max_foreign_ratio = 0.0;
  tighter[4].min_lang_confidence = 0.4;
  for (const auto& config : tighter) EXPECT_LE(kept_sentences(docs, config), baseline);
  FilterConfig looser = base;
  looser.max_uppercase_ratio = 1.0;
  EXPECT_GE(kept_sentences(docs, looser), baseline);
}
