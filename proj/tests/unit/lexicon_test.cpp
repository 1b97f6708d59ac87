#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ctrlsimp/error.hpp"
#include "ctrlsimp/lexicon.hpp"

namespace ctrlsimp {
namespace {

FrequencyTable table_from(const std::string& text) {
  std::istringstream in(text);
  return load_frequency_list(in);
}

TEST(FrequencyList, LineOrderIsRank) {
  const auto t = table_from("the\nof\ncat\n");
  EXPECT_EQ(t.vocab_size(), 3u);
  EXPECT_EQ(t.rank_of("the"), 1u);
  EXPECT_EQ(t.rank_of("of"), 2u);
  EXPECT_EQ(t.rank_of("cat"), 3u);
  EXPECT_EQ(t.rank_of("dog"), std::nullopt);
}

TEST(FrequencyList, CountTiesBrokenByLineOrder) {
  const auto t = table_from("a\t100\nb\t100\n");
  EXPECT_EQ(t.rank_of("a"), 1u);
  EXPECT_EQ(t.rank_of("b"), 2u);
}

TEST(FrequencyList, CountsSortDescending) {
  const auto t = table_from("rare\t3\ncommon\t900\nmid\t40\n");
  EXPECT_EQ(t.rank_of("common"), 1u);
  EXPECT_EQ(t.rank_of("mid"), 2u);
  EXPECT_EQ(t.rank_of("rare"), 3u);
}

TEST(FrequencyList, EmptyStream) { EXPECT_EQ(table_from("").vocab_size(), 0u); }

TEST(FrequencyList, CrlfAndCaseInsensitiveLookup) {
  const auto t = table_from("The\r\nOf\r\n");
  EXPECT_EQ(t.rank_of("THE"), 1u);
  EXPECT_EQ(t.rank_of("of"), 2u);
}

TEST(FrequencyList, MalformedCountReportsLine) {
  try {
    table_from("a\t1\nb\tmany\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(FrequencyList, MixedFormatIsAnError) { EXPECT_THROW(table_from("a\nb\t5\n"), ParseError); }

TEST(FrequencyList, DuplicatesKeepFirstRank) {
  const std::vector<std::string> words = {"a", "b", "a", "c"};
  const auto t = FrequencyTable::from_ranked_words(words);
  EXPECT_EQ(t.vocab_size(), 3u);
  EXPECT_EQ(t.rank_of("c"), 3u);
}

TEST(LogRank, Examples) {
  std::vector<std::string> words;
  for (int i = 0; i < 100; ++i) words.push_back("w" + std::to_string(i));
  const auto t100 = FrequencyTable::from_ranked_words(words);
  EXPECT_DOUBLE_EQ(log_rank("w0", t100), 0.0);
  EXPECT_NEAR(log_rank("w2", t100), 1.098612, 1e-6);

  words.resize(9);
  const auto t9 = FrequencyTable::from_ranked_words(words);
  EXPECT_NEAR(log_rank("unknown", t9), 2.302585, 1e-6);
}

TEST(LogRank, EmptyTableIsResourceError) { EXPECT_THROW(log_rank("a", FrequencyTable{}), ResourceError); }

TEST(ThirdQuartile, Examples) {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {7};
  const std::vector<double> c = {1, 1, 1, 1};
  const std::vector<double> unsorted = {5, 1, 4, 2, 3};
  EXPECT_DOUBLE_EQ(third_quartile(a), 4.0);
  EXPECT_DOUBLE_EQ(third_quartile(b), 7.0);
  EXPECT_DOUBLE_EQ(third_quartile(c), 1.0);
  EXPECT_DOUBLE_EQ(third_quartile(unsorted), 4.0);
}

TEST(ThirdQuartile, Interpolates) {
  const std::vector<double> v = {0, 10};
  EXPECT_DOUBLE_EQ(third_quartile(v), 7.5);
}

TEST(ThirdQuartile, EmptyIsDomainError) { EXPECT_THROW(third_quartile(std::span<const double>{}), DomainError); }

TEST(SentenceWordRank, IgnoresPunctuationAndNumbers) {
  const auto t = table_from("the\ncat\nsat\n");
  const auto wr = sentence_word_rank(Sentence("the cat , 1999 ."), t);
  ASSERT_TRUE(wr.has_value());
  // log-ranks {0, ln 2}; Q3 at 0.75 -> 0.75 ln 2
  EXPECT_NEAR(*wr, 0.75 * std::log(2.0), 1e-12);
  EXPECT_FALSE(sentence_word_rank(Sentence(", 12 ."), t).has_value());
}

}  // namespace
}  // namespace ctrlsimp
