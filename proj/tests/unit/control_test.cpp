#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "ctrlsimp/control.hpp"
#include "ctrlsimp/error.hpp"
#include "test_support.hpp"

namespace ctrlsimp {
namespace {

const Sentence kSource("He settled in London, devoting himself chiefly to practical teaching.");
const Sentence kTarget("He teaches in London.");

FrequencyTable ranks_table(std::size_t n) {
  std::vector<std::string> words;
  for (std::size_t i = 1; i <= n; ++i) words.push_back("r" + std::to_string(i));
  return FrequencyTable::from_ranked_words(words);
}

TEST(Bucketize, Examples) {
  EXPECT_EQ(bucketize(0.3099).str(), "0.3");
  EXPECT_EQ(bucketize(2.7), Bucket::from_step(40));
  EXPECT_EQ(bucketize(1.0), Bucket::one());
  EXPECT_EQ(bucketize(0.0), Bucket::from_step(1));
}

TEST(Bucketize, RejectsNegativeAndNan) {
  EXPECT_THROW(bucketize(-0.1), DomainError);
  EXPECT_THROW(bucketize(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST(Bucketize, FortyValuesIdempotentMonotone) {
  std::mt19937 rng(7);
  std::set<int> image;
  std::vector<double> xs;
  for (int i = 0; i < 10000; ++i) xs.push_back(5.0 * (rng() / 4294967296.0));
  for (int step = 0; step <= 100; ++step) xs.push_back(step * 0.05);
  std::sort(xs.begin(), xs.end());
  int prev = 0;
  for (double x : xs) {
    const Bucket b = bucketize(x);
    image.insert(b.step());
    EXPECT_EQ(bucketize(b.value()), b);
    EXPECT_GE(b.step(), prev);
    EXPECT_LE(b.value(), 2.0 + 1e-12);
    prev = b.step();
  }
  EXPECT_EQ(image.size(), 40u);
  EXPECT_EQ(all_buckets().size(), 40u);
}

TEST(Bucket, StepRange) {
  EXPECT_THROW(Bucket::from_step(0), DomainError);
  EXPECT_THROW(Bucket::from_step(41), DomainError);
  EXPECT_EQ(Bucket::from_step(19).str(), "0.95");
  EXPECT_EQ(Bucket::from_step(40).str(), "2.0");
  EXPECT_EQ(Bucket::from_step(1).str(), "0.05");
}

TEST(Token, FormatExamples) {
  EXPECT_EQ(format_token({ControlAttribute::kNbChars, bucketize(0.30)}), "<NbChars_0.3>");
  EXPECT_EQ(format_token({ControlAttribute::kLevSim, bucketize(0.75)}), "<LevSim_0.75>");
  EXPECT_EQ(format_token({ControlAttribute::kWordRank, bucketize(1.0)}), "<WordRank_1.0>");
}

TEST(Token, ParseExamples) {
  EXPECT_EQ(parse_token("<NbChars_0.3>"), (ControlValue{ControlAttribute::kNbChars, bucketize(0.3)}));
  EXPECT_EQ(parse_token("<LevSim_0.37>"), (ControlValue{ControlAttribute::kLevSim, bucketize(0.35)}));
  EXPECT_THROW(parse_token("<Foo_0.5>"), ParseError);
  EXPECT_THROW(parse_token("<NbChars_x>"), ParseError);
  EXPECT_THROW(parse_token("NbChars_0.5"), ParseError);
}

TEST(Token, RoundTripAllPairs) {
  int n = 0;
  for (auto attr : kAllAttributes) {
    for (auto b : all_buckets()) {
      const ControlValue v{attr, b};
      EXPECT_EQ(parse_token(format_token(v)), v);
      ++n;
    }
  }
  EXPECT_EQ(n, 160);
}

TEST(ControlSpec, PrefixInCanonicalOrder) {
  ControlSpec spec;
  spec.set(ControlAttribute::kWordRank, bucketize(0.75));
  spec.set(ControlAttribute::kNbChars, bucketize(0.95));
  spec.set(ControlAttribute::kLevSim, bucketize(0.75));
  EXPECT_EQ(spec.prefix(), "<NbChars_0.95> <LevSim_0.75> <WordRank_0.75>");
  EXPECT_EQ(spec.label(), "NbChars=0.95;LevSim=0.75;WordRank=0.75");
  EXPECT_EQ(ControlSpec{}.prefix(), "");
}

TEST(ControlSpec, SplitPrefix) {
  const auto p = split_control_prefix("<LevSim_0.5> <NbChars_0.3>  a b .");
  EXPECT_EQ(p.body, "a b .");
  EXPECT_EQ(p.spec.get(ControlAttribute::kNbChars), bucketize(0.3));
  EXPECT_EQ(p.spec.get(ControlAttribute::kLevSim), bucketize(0.5));
  EXPECT_THROW(split_control_prefix("<NbChars_0.3> <NbChars_0.5> a"), ParseError);
  EXPECT_THROW(split_control_prefix("<Bogus_0.3> a"), ParseError);
  EXPECT_TRUE(split_control_prefix("plain text").spec.empty());
}

TEST(AttributeNames, ParseList) {
  EXPECT_EQ(parse_attribute_list("LevSim,NbChars").size(), 2u);
  EXPECT_THROW(parse_attribute_list("nbchars"), ConfigError);
}

TEST(NbChars, Examples) {
  EXPECT_NEAR(nbchars_ratio(kSource, kTarget), 22.0 / 71.0, 1e-12);
  EXPECT_EQ(bucketize(nbchars_ratio(kSource, kTarget)).str(), "0.3");
  EXPECT_DOUBLE_EQ(nbchars_ratio(kSource, kSource), 1.0);
  EXPECT_DOUBLE_EQ(nbchars_ratio(Sentence("abcdefghij"), Sentence("abcdefghijabcdefghij")), 2.0);
  EXPECT_THROW(nbchars_ratio(Sentence(""), kTarget), DomainError);
}

TEST(Levenshtein, Examples) {
  EXPECT_EQ(levenshtein_distance("abc", "abc"), 0u);
  EXPECT_EQ(levenshtein_distance("abc", ""), 3u);
  EXPECT_EQ(levenshtein_distance("kitten", "sitting"), 3u);
}

TEST(Levenshtein, MatchesRecursiveOracle) {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    std::string a, b;
    for (int k = testing::uniform(rng, 0, 7); k > 0; --k) a.push_back(static_cast<char>('a' + testing::uniform(rng, 0, 2)));
    for (int k = testing::uniform(rng, 0, 7); k > 0; --k) b.push_back(static_cast<char>('a' + testing::uniform(rng, 0, 2)));
    EXPECT_EQ(levenshtein_distance(a, b), testing::recursive_levenshtein(a, b)) << a << " / " << b;
  }
}

TEST(Levenshtein, SubstitutionCostTwoIsIndelDistance) {
  EXPECT_EQ(levenshtein_distance(U"kitten", U"sitting", 2), 5u);
  EXPECT_EQ(levenshtein_distance(U"ab", U"cd", 2), 4u);
}

TEST(LevSim, LondonPair) {
  const double v = levsim_ratio(kSource, kTarget);
  EXPECT_GE(v, 0.35);
  EXPECT_LE(v, 0.39);
}

TEST(LevSim, Examples) {
  EXPECT_DOUBLE_EQ(levsim_ratio(kSource, kSource), 1.0);
  EXPECT_DOUBLE_EQ(levsim("abcd", "wxyz"), 0.0);
  EXPECT_DOUBLE_EQ(levsim("ab", "ba"), levsim("ba", "ab"));
  EXPECT_THROW(levsim("", ""), DomainError);
}

TEST(WordRank, IdenticalIsOne) {
  const auto t = ranks_table(20);
  const Sentence s("r2 r4 r8 r16");
  EXPECT_DOUBLE_EQ(wordrank_ratio(s, s, t), 1.0);
}

TEST(WordRank, InterpolatedQuartileRatio) {
  const auto t = ranks_table(20);
  // Q3(ln 2, ln 4, ln 8, ln 16) = 3.25 ln 2; Q3(ln 2, ln 4) = 1.75 ln 2.
  EXPECT_NEAR(wordrank_ratio(Sentence("r2 r4 r8 r16"), Sentence("r2 r4"), t), 7.0 / 13.0, 1e-12);
}

TEST(WordRank, MoreFrequentWordsLowerRatio) {
  const auto t = ranks_table(20);
  EXPECT_LT(wordrank_ratio(Sentence("r5 r9 r12 r17"), Sentence("r4 r8 r11 r16"), t), 1.0);
}

TEST(WordRank, Errors) {
  const auto t = ranks_table(20);
  EXPECT_THROW(wordrank_ratio(Sentence("r1 r1"), Sentence("r2"), t), DegenerateSourceError);
  EXPECT_THROW(wordrank_ratio(Sentence(", ."), Sentence("r2"), t), DomainError);
  EXPECT_THROW(wordrank_ratio(Sentence("r3"), Sentence("12 ."), t), DomainError);
}

TEST(DepTreeDepth, Examples) {
  const auto chain = [](int n) {
    TokenList toks;
    std::vector<int> heads;
    for (int i = 0; i < n; ++i) {
      toks.push_back("w");
      heads.push_back(i == 0 ? DepTree::kRoot : i - 1);
    }
    return DepTree::make(toks, heads);
  };
  const std::vector<DepTree> same = {chain(4)};
  EXPECT_DOUBLE_EQ(deptreedepth_ratio(chain(4), same), 1.0);
  const std::vector<DepTree> two = {chain(2)};
  EXPECT_DOUBLE_EQ(deptreedepth_ratio(chain(4), two), 0.5);
  const std::vector<DepTree> split = {chain(2), chain(3)};
  EXPECT_DOUBLE_EQ(deptreedepth_ratio(chain(6), split), 0.5);
}

TEST(AnnotatePair, LondonPair) {
  const std::vector<ControlAttribute> nb = {ControlAttribute::kNbChars};
  EXPECT_EQ(annotate_pair(kSource, kTarget, nb, {}),
            "<NbChars_0.3> He settled in London , devoting himself chiefly to practical teaching .");
  const std::vector<ControlAttribute> both = {ControlAttribute::kLevSim, ControlAttribute::kNbChars};
  EXPECT_EQ(annotate_pair(kSource, kTarget, both, {}).substr(0, 27), "<NbChars_0.3> <LevSim_0.35>");
  EXPECT_EQ(annotate_pair(kSource, kSource, both, {}).substr(0, 26), "<NbChars_1.0> <LevSim_1.0>");
  EXPECT_EQ(annotate_pair(kSource, kTarget, {}, {}), kSource.joined());
}

TEST(AnnotatePair, MissingResourceIsConfigError) {
  const std::vector<ControlAttribute> wr = {ControlAttribute::kWordRank};
  EXPECT_THROW(annotate_pair(kSource, kTarget, wr, {}), ConfigError);
  const std::vector<ControlAttribute> dd = {ControlAttribute::kDepTreeDepth};
  EXPECT_THROW(annotate_pair(kSource, kTarget, dd, {}), ConfigError);
  PairResources heuristic;
  heuristic.allow_heuristic_depth = true;
  EXPECT_NO_THROW(annotate_pair(kSource, kTarget, dd, heuristic));
}

}  // namespace
}  // namespace ctrlsimp
