#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "bicorpus/error.hpp"
#include "bicorpus/examplegen.hpp"
#include "bicorpus/stats.hpp"
#include "bicorpus/tokenizer.hpp"
#include "generators.hpp"

using namespace bicorpus;
using bicorpus::testing::Gen;
using bicorpus::testing::small_vocabulary;

namespace {

using Strings = std::vector<std::string>;

std::vector<TokenId> ids_of(const Vocabulary& v, const Strings& pieces) {
  std::vector<TokenId> out;
  for (const auto& p : pieces) out.push_back(*v.find(p));
  return out;
}

const Strings kWordPool = {"the", "cat", "cats", "playing", "unaffable", "low", "he", "is", "ok",
                           "hi", "played", "zebra", "lowest", "unplayable", "ab", "abc"};

std::vector<Document> random_documents(Gen& gen, std::size_t count) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < count; ++i) {
    docs.push_back(gen.document("d" + std::to_string(i), kWordPool, 12, 14));
  }
  return docs;
}

}  // namespace

TEST(PredictionBudget, RoundsAndClamps) {
  MaskingConfig c;
  EXPECT_EQ(prediction_budget(20, c), 3u);
  EXPECT_EQ(prediction_budget(1, c), 1u);
  EXPECT_EQ(prediction_budget(10, c), 2u);  // 1.5 rounds half away from zero
  EXPECT_EQ(prediction_budget(1000, c), 20u);
}

TEST(WholeWordMasking, TwentySingles) {
  const auto v = small_vocabulary();
  std::vector<TokenId> ids = {v.cls_id()};
  for (int i = 0; i < 20; ++i) ids.push_back(*v.find("hi"));
  ids.push_back(v.sep_id());
  Rng rng(1);
  const auto m = apply_whole_word_masking(ids, v, MaskingConfig{}, rng);
  EXPECT_EQ(m.positions.size(), 3u);
  EXPECT_EQ(m.labels.size(), 3u);
}

TEST(WholeWordMasking, SingleWordFloor) {
  const auto v = small_vocabulary();
  const auto ids = ids_of(v, {"[CLS]", "hi", "[SEP]"});
  Rng rng(2);
  const auto m = apply_whole_word_masking(ids, v, MaskingConfig{}, rng);
  EXPECT_EQ(m.positions, (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(m.labels, (std::vector<TokenId>{*v.find("hi")}));
}

TEST(WholeWordMasking, SelectedWordMaskedWhole) {
  const auto v = small_vocabulary();
  const auto ids = ids_of(v, {"[CLS]", "un", "##aff", "##able", "[SEP]", "he", "is", "ok", "hi",
                              "low", "the", "cat", "he", "is", "ok", "hi", "low", "the", "cat",
                              "he", "is", "[SEP]"});
  int whole = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto m = apply_whole_word_masking(ids, v, MaskingConfig{}, rng);
    const std::set<std::uint32_t> chosen(m.positions.begin(), m.positions.end());
    const auto hits = chosen.count(1) + chosen.count(2) + chosen.count(3);
    EXPECT_TRUE(hits == 0 || hits == 3) << "seed " << seed;
    whole += hits == 3;
  }
  EXPECT_GT(whole, 0);
}

TEST(WholeWordMasking, SkipsWordsThatOverflowTheBudget) {
  const auto v = small_vocabulary();
  // Six non-special pieces, budget round(0.9) = 1: the three-piece word never fits.
  const auto ids = ids_of(v, {"[CLS]", "un", "##aff", "##able", "[SEP]", "he", "is", "ok", "[SEP]"});
  MaskingConfig c;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto m = apply_whole_word_masking(ids, v, c, rng);
    ASSERT_EQ(m.positions.size(), 1u);
    EXPECT_GE(m.positions[0], 5u);
  }
}

TEST(WholeWordMasking, PropertyInvariants) {
  const auto v = small_vocabulary();
  Gen gen(81);
  const MaskingConfig c;
  for (int i = 0; i < 2000; ++i) {
    std::vector<TokenId> ids = {v.cls_id()};
    const auto n = gen.size(1, 60);
    for (std::size_t k = 0; k < n; ++k) {
      const auto ws = tokenize_text(gen.pick(kWordPool), v);
      for (const auto& p : ws) ids.push_back(*v.find(p));
    }
    ids.push_back(v.sep_id());
    const auto m = apply_whole_word_masking(ids, v, c, gen.rng());
    ASSERT_EQ(m.ids.size(), ids.size());
    ASSERT_EQ(m.positions.size(), m.labels.size());
    ASSERT_TRUE(std::is_sorted(m.positions.begin(), m.positions.end()));
    std::size_t non_special = 0;
    for (auto id : ids) non_special += !v.is_special(id);
    EXPECT_LE(m.positions.size(), prediction_budget(non_special, c));
    for (std::size_t k = 0; k < m.positions.size(); ++k) {
      EXPECT_FALSE(v.is_special(ids[m.positions[k]]));
      EXPECT_EQ(m.labels[k], ids[m.positions[k]]);
    }
    for (std::size_t p = 0; p < ids.size(); ++p) {
      if (!std::binary_search(m.positions.begin(), m.positions.end(), p)) {
        EXPECT_EQ(m.ids[p], ids[p]);
      }
    }
    for (const auto& word : whole_words(ids, v)) {
      std::size_t hits = 0;
      for (auto p : word) hits += std::binary_search(m.positions.begin(), m.positions.end(), p);
      EXPECT_TRUE(hits == 0 || hits == word.size());
    }
  }
}

TEST(WholeWordMasking, EightyTenTenSplit) {
  const auto v = small_vocabulary();
  std::vector<TokenId> ids = {v.cls_id()};
  for (int i = 0; i < 100; ++i) ids.push_back(*v.find("hi"));
  ids.push_back(v.sep_id());
  Rng rng(5);
  std::size_t total = 0, masked = 0, kept = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto m = apply_whole_word_masking(ids, v, MaskingConfig{}, rng);
    for (std::size_t k = 0; k < m.positions.size(); ++k) {
      ++total;
      const auto id = m.ids[m.positions[k]];
      masked += id == v.mask_id();
      kept += id == m.labels[k];
    }
  }
  EXPECT_NEAR(static_cast<double>(masked) / total, 0.8, 0.01);
  EXPECT_NEAR(static_cast<double>(kept) / total, 0.1, 0.01);
}

TEST(MaskingConfigValidation, RejectsInconsistentShares) {
  MaskingConfig c;
  c.keep_share = 0.2;
  EXPECT_THROW(c.validate(), Error);
  c = MaskingConfig{};
  c.max_predictions = 0;
  EXPECT_THROW(c.validate(), Error);
  c = MaskingConfig{};
  c.max_seq_len = 2;
  EXPECT_THROW(c.validate(), Error);
}

TEST(PlanDuplication, BalancedSourcesGetRoundedFactors) {
  const auto plan = plan_duplication({{"a", "en", 1000}, {"news", "fi", 100}, {"disc", "fi", 300}, {"crawl", "fi", 200}},
                                     {"fi"}, 0.10);
  EXPECT_EQ(plan.factor_of("a"), 1u);
  EXPECT_EQ(plan.factor_of("news"), 3u);
  EXPECT_EQ(plan.factor_of("disc"), 1u);
  EXPECT_EQ(plan.factor_of("crawl"), 2u);
  EXPECT_DOUBLE_EQ(plan.reference_total, 1000.0);
  // 3 * 100 + 1 * 300 + 2 * 200
  EXPECT_EQ(plan.language_totals.at("fi"), 1000u);
  EXPECT_EQ(plan.language_totals.at("en"), 1000u);
  EXPECT_TRUE(plan.within_tolerance);
  EXPECT_TRUE(plan.warnings.empty());
}

TEST(PlanDuplication, SingleSourceFactorOne) {
  const auto plan = plan_duplication({{"a", "en", 17}}, {}, 0.1);
  EXPECT_EQ(plan.factor_of("a"), 1u);
}

TEST(PlanDuplication, TinySourceScaledUp) {
  const auto plan = plan_duplication({{"a", "en", 1000}, {"b", "fi", 1}}, {"fi"}, 0.1);
  EXPECT_EQ(plan.factor_of("b"), 1000u);
}

TEST(PlanDuplication, ToleranceViolationWarnsButSucceeds) {
  const auto plan = plan_duplication({{"a", "en", 1000}, {"b", "fi", 400}}, {"fi"}, 0.1);
  EXPECT_EQ(plan.factor_of("b"), 3u);  // round(2.5) = 3, total 1200
  EXPECT_FALSE(plan.within_tolerance);
  EXPECT_EQ(plan.warnings.size(), 1u);
}

TEST(PlanDuplication, ZeroCountIsInvalid) {
  EXPECT_THROW(plan_duplication({{"a", "en", 0}}, {}, 0.1), Error);
}

TEST(PlanDuplication, PropertyFactorsMinimizeRoundingError) {
  Gen gen(82);
  for (int round = 0; round < 500; ++round) {
    std::vector<SourceInstanceCount> counts = {{"en", "en", gen.size(100, 100000)}};
    const auto n = gen.size(1, 5);
    for (std::size_t i = 0; i < n; ++i) counts.push_back({"fi" + std::to_string(i), "fi", gen.size(1, 50000)});
    const auto plan = plan_duplication(counts, {"fi"}, 0.1);
    const double target = static_cast<double>(counts[0].instances) / static_cast<double>(n);
    std::uint64_t total = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
      const auto f = plan.factor_of(counts[i].source_id);
      EXPECT_GE(f, 1u);
      const double exact = target / static_cast<double>(counts[i].instances);
      if (exact >= 1.0) {
        EXPECT_LE(std::abs(static_cast<double>(f) - exact), 0.5 + 1e-9);
      }
      total += f * counts[i].instances;
    }
    EXPECT_EQ(plan.language_totals.at("fi"), total);
    const double deviation = std::abs(static_cast<double>(total) - static_cast<double>(counts[0].instances)) /
                             static_cast<double>(counts[0].instances);
    EXPECT_EQ(plan.within_tolerance, deviation <= 0.1);
  }
}

TEST(BuildInstances, FactorMultipliesPasses) {
  Gen gen(83);
  const auto v = small_vocabulary();
  const auto docs = random_documents(gen, 2);
  GenerationReport one, two;
  const auto a = build_instances(docs, v, MaskingConfig{}, 1, 7, &one);
  const auto b = build_instances(docs, v, MaskingConfig{}, 2, 7, &two);
  ASSERT_EQ(two.passes.size(), 2u);
  EXPECT_EQ(b.size(), two.passes[0].instances + two.passes[1].instances);
  EXPECT_EQ(one.passes[0].instances, two.passes[0].instances);
  EXPECT_EQ(std::vector<PretrainingInstance>(b.begin(), b.begin() + a.size()), a);
}

TEST(BuildInstances, NoRandomNextWhenProbabilityZero) {
  Gen gen(84);
  const auto v = small_vocabulary();
  MaskingConfig c;
  c.random_next_prob = 0.0;
  for (const auto& x : build_instances(random_documents(gen, 20), v, c, 2, 1)) EXPECT_FALSE(x.is_random_next);
}

TEST(BuildInstances, Deterministic) {
  Gen gen(85);
  const auto v = small_vocabulary();
  const auto docs = random_documents(gen, 30);
  EXPECT_EQ(build_instances(docs, v, MaskingConfig{}, 2, 99), build_instances(docs, v, MaskingConfig{}, 2, 99));
  EXPECT_NE(build_instances(docs, v, MaskingConfig{}, 1, 99), build_instances(docs, v, MaskingConfig{}, 1, 100));
}

TEST(BuildInstances, SingleDocumentCorpusFlagsSameDocumentPairs) {
  Gen gen(86);
  const auto v = small_vocabulary();
  const auto docs = random_documents(gen, 1);
  MaskingConfig c;
  c.random_next_prob = 1.0;
  GenerationReport report;
  const auto xs = build_instances(docs, v, c, 1, 3, &report);
  ASSERT_FALSE(xs.empty());
  EXPECT_EQ(report.totals().same_document_random_next, report.totals().random_next);
}

TEST(BuildInstances, CountMatchesUnmaskedPass) {
  Gen gen(87);
  const auto v = small_vocabulary();
  const auto docs = random_documents(gen, 25);
  const auto corpus = tokenize_corpus(docs, v, 100);
  GenerationReport report;
  build_instances(docs, v, MaskingConfig{}, 1, 11, &report);
  EXPECT_EQ(count_instances(corpus, v, MaskingConfig{}, 11), report.passes[0].instances);
}

TEST(BuildInstances, PropertyInstancesPassTheAudit) {
  Gen gen(88);
  const auto v = small_vocabulary();
  for (int round = 0; round < 10; ++round) {
    MaskingConfig c;
    c.max_seq_len = gen.size(8, 64);
    const auto xs = build_instances(random_documents(gen, 40), v, c, 1, gen.rng().next());
    const auto header = InstanceFileHeader::for_config(c, v);
    for (const auto& x : xs) {
      std::vector<std::string> problems;
      EXPECT_EQ(check_instance(x, v, header, &problems), 0u) << (problems.empty() ? "" : problems[0]);
      EXPECT_LE(x.ids.size(), c.max_seq_len);
    }
  }
}
