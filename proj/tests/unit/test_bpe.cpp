#include <gtest/gtest.h>

#include <set>

#include "bicorpus/bpe.hpp"
#include "bicorpus/error.hpp"
#include "bicorpus/unicode.hpp"
#include "bpe_oracle.hpp"
#include "generators.hpp"
#include "temp_dir.hpp"

using namespace bicorpus;
using bicorpus::testing::brute_force_bpe;
using bicorpus::testing::Gen;

namespace {

BpeOptions options(std::size_t target, std::size_t min_char_count = 1) {
  BpeOptions o;
  o.target_size = target;
  o.min_char_count = min_char_count;
  return o;
}

Piece initial(std::string text) { return Piece{std::move(text), true}; }
Piece cont(std::string text) { return Piece{std::move(text), false}; }

WordCounts random_table(Gen& gen, std::size_t max_words) {
  WordCounts words;
  const std::string alphabet = gen.coin() ? "abcde" : "abcdefghäö";
  const auto n = gen.size(1, max_words);
  for (std::size_t i = 0; i < n; ++i) words[gen.word(alphabet, 1, 7)] += gen.size(1, 9);
  return words;
}

}  // namespace

TEST(LearnBpe, MostFrequentPairFirst) {
  const auto r = learn_bpe({{"aa", 3}, {"ab", 1}}, options(5 + 4 + 1));
  ASSERT_EQ(r.rules.merges.size(), 1u);
  EXPECT_EQ(r.rules.merges[0], (MergeRule{initial("a"), cont("a")}));
}

TEST(LearnBpe, TiesBrokenLexicographically) {
  const auto r = learn_bpe({{"abc", 2}}, options(5 + 6 + 1));
  ASSERT_EQ(r.rules.merges.size(), 1u);
  EXPECT_EQ(r.rules.merges[0], (MergeRule{initial("a"), cont("b")}));
}

TEST(LearnBpe, TargetAtBaseSizeMeansNoMerges) {
  const auto r = learn_bpe({{"abc", 5}}, options(5 + 2 * 3));
  EXPECT_TRUE(r.rules.merges.empty());
  EXPECT_EQ(r.vocab_size, 11u);
  EXPECT_TRUE(r.target_reached);
}

TEST(LearnBpe, TargetBelowBaseIsInvalid) {
  try {
    learn_bpe({{"abc", 5}}, options(5 + 3));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(LearnBpe, UnreachableTargetSetsWarning) {
  const auto r = learn_bpe({{"ab", 2}}, options(1000));
  EXPECT_FALSE(r.target_reached);
  EXPECT_EQ(r.vocab_size, 5u + 4u + 1u);
}

TEST(LearnBpe, RareCharactersExcluded) {
  const auto r = learn_bpe({{"ab", 20}, {"xb", 2}}, options(100, 10));
  EXPECT_EQ(r.rules.alphabet, (std::vector<char32_t>{U'a', U'b'}));
  EXPECT_EQ(r.excluded_characters, 1u);
  EXPECT_EQ(r.skipped_words, 1u);
}

TEST(LearnBpe, CountsOverlappingPairs) {
  // "aaaa" holds (##a, ##a) twice, overlapping; that ties with (a, ##b) from "ab" x2.
  const auto r = learn_bpe({{"aaaa", 1}, {"ab", 2}}, options(5 + 4 + 1));
  ASSERT_EQ(r.rules.merges.size(), 1u);
  EXPECT_EQ(r.rules.merges[0], (MergeRule{cont("a"), cont("a")}));
}

TEST(LearnBpe, ApplyMergesReproducesTraining) {
  const WordCounts words = {{"lower", 5}, {"lowest", 3}, {"newer", 6}, {"wider", 2}};
  const auto r = learn_bpe(words, options(40));
  std::set<Piece> pieces(r.pieces.begin(), r.pieces.end());
  for (const auto& [word, _] : words) {
    std::string rebuilt;
    const auto segmentation = apply_merges(word, r.rules.merges);
    for (std::size_t i = 0; i < segmentation.size(); ++i) {
      EXPECT_EQ(segmentation[i].initial, i == 0);
      EXPECT_TRUE(pieces.count(segmentation[i])) << segmentation[i].surface();
      rebuilt += segmentation[i].text;
    }
    EXPECT_EQ(rebuilt, word);
  }
}

TEST(LearnBpe, MergeFileRoundTrip) {
  bicorpus::testing::TempDir dir;
  const auto r = learn_bpe({{"lower", 5}, {"lowest", 3}, {"newer", 6}}, options(30));
  r.rules.write_merges(dir / "merges.txt");
  EXPECT_EQ(MergeRuleList::read_merges(dir / "merges.txt"), r.rules.merges);
  write_pieces(dir / "pieces.txt", r.pieces);
  EXPECT_EQ(read_pieces(dir / "pieces.txt"), r.pieces);
}

TEST(LearnBpeProperties, MatchesBruteForceOracle) {
  Gen gen(51);
  for (int round = 0; round < 60; ++round) {
    const auto words = random_table(gen, 120);
    BpeOptions o;
    o.min_char_count = gen.size(1, 4);
    o.target_size = 1000;
    const auto probe = brute_force_bpe(words, o);
    o.target_size = gen.coin(0.3) ? 1000 : std::max<std::size_t>(probe.vocab_size / 2 + 8, 5 + 2 * 10);
    BpeResult r;
    try {
      r = learn_bpe(words, o);
    } catch (const Error&) {
      continue;  // target below the base size
    }
    const auto oracle = brute_force_bpe(words, o);
    ASSERT_EQ(r.rules.merges, oracle.merges) << "round " << round;
    EXPECT_EQ(r.vocab_size, oracle.vocab_size);
    EXPECT_EQ(r.target_reached, oracle.target_reached);
  }
}

TEST(LearnBpeProperties, MergeOperandsAreProducible) {
  Gen gen(52);
  for (int round = 0; round < 40; ++round) {
    const auto r = learn_bpe(random_table(gen, 200), options(200));
    std::set<Piece> producible;
    for (char32_t c : r.rules.alphabet) {
      const auto s = unicode::to_utf8(std::u32string(1, c));
      producible.insert(initial(s));
      producible.insert(cont(s));
    }
    std::set<std::pair<Piece, Piece>> seen;
    for (const auto& m : r.rules.merges) {
      EXPECT_TRUE(producible.count(m.left));
      EXPECT_TRUE(producible.count(m.right));
      EXPECT_FALSE(m.right.initial);
      EXPECT_TRUE(seen.insert({m.left, m.right}).second) << "duplicate merge";
      producible.insert(m.result());
    }
  }
}

TEST(LearnBpeProperties, SizeMatchesTargetUnlessWarned) {
  Gen gen(53);
  for (int round = 0; round < 40; ++round) {
    const auto words = random_table(gen, 200);
    const std::size_t target = gen.size(40, 120);
    const auto r = learn_bpe(words, options(target));
    EXPECT_EQ(r.vocab_size, r.pieces.size() + 5);
    if (r.target_reached) {
      EXPECT_EQ(r.vocab_size, target);
    } else {
      EXPECT_LT(r.vocab_size, target);
    }
  }
}

TEST(LearnBpeProperties, SegmentationsUseLearnedPieces) {
  Gen gen(54);
  for (int round = 0; round < 40; ++round) {
    const auto words = random_table(gen, 150);
    const auto r = learn_bpe(words, options(150));
    const std::set<Piece> pieces(r.pieces.begin(), r.pieces.end());
    for (const auto& [word, _] : words) {
      for (const auto& p : apply_merges(word, r.rules.merges)) {
        EXPECT_TRUE(pieces.count(p)) << word << " -> " << p.surface();
      }
    }
  }
}
