#include <gtest/gtest.h>

#include <set>

#include "wingit/summation.hpp"
#include "wingit/text_ingest.hpp"
#include "wingit/trajectory_io.hpp"

namespace wingit {

namespace {
using Tokens = std::vector<std::string>;

Tokens tokens_of(const Corpus& c) {
  Tokens out;
  for (Symbol s : c.tokens()) out.push_back(c.symbol_table().token(s));
  return out;
}
}  // namespace

TEST(Clean, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(clean_tokens("Mr. Lorry said, 'Yes.'"), (Tokens{"mr", "lorry", "said", "yes"}));
  EXPECT_EQ(clean_tokens("  Hello,\tWORLD!\n(again)  "), (Tokens{"hello", "world", "again"}));
  EXPECT_EQ(clean_tokens("...;;!?"), Tokens{});
}

TEST(Clean, ApostrophesAndHyphensAreDeleted) {
  EXPECT_EQ(clean_tokens("don't sea-side Ahab’s"), (Tokens{"dont", "seaside", "ahabs"}));
  EXPECT_EQ(clean_tokens("‘quoted’ word"), (Tokens{"quoted", "word"}));
}

TEST(Clean, DashRunsSeparateWords) {
  EXPECT_EQ(clean_tokens("whale--the"), (Tokens{"whale", "the"}));
  EXPECT_EQ(clean_tokens("whale\u2014the"), (Tokens{"whale", "the"}));
  EXPECT_EQ(clean_tokens("end-- "), (Tokens{"end"}));
}

TEST(Clean, UnicodeLetters) {
  EXPECT_EQ(clean_tokens("ÉTÉ ΛΟΓΟΣ ЖИЗНЬ"),
            (Tokens{"été", "λογοσ", "жизнь"}));
  EXPECT_EQ(clean_tokens("«naïve» café"), (Tokens{"naïve", "café"}));
}

TEST(Clean, InvalidUtf8Separates) {
  EXPECT_EQ(clean_tokens(std::string("ab\xFF" "cd")), (Tokens{"ab", "cd"}));
}

TEST(Tokenize, CollocationExample) {
  const Corpus c = tokenize("Mr. Lorry said, 'Yes.'", {CollocationRule{{"mr", "lorry"}, "mr_lorry"}});
  EXPECT_EQ(tokens_of(c), (Tokens{"mr_lorry", "said", "yes"}));
}

TEST(Tokenize, SingleTokenCorpus) {
  const Corpus c = tokenize("a a a");
  EXPECT_EQ(c.length(), 3U);
  EXPECT_EQ(c.vocabulary_size(), 1U);
  EXPECT_EQ(c.empirical_pi().probs()[0], 1.0);
}

TEST(Tokenize, AllPunctuationRejected) {
  EXPECT_THROW((void)tokenize("!!! ... ---"), std::invalid_argument);
  EXPECT_THROW((void)tokenize(""), std::invalid_argument);
}

TEST(Tokenize, CollocationsApplyInRuleOrderWithoutOverlap) {
  std::vector<std::string> t = {"a", "a", "a", "b", "a", "b"};
  apply_collocations(t, {CollocationRule{{"a", "a"}, "aa"}, CollocationRule{{"a", "b"}, "ab"}});
  EXPECT_EQ(t, (Tokens{"aa", "ab", "ab"}));
  t = {"a", "a", "b"};
  apply_collocations(t, {CollocationRule{{"a", "a"}, "aa"}, CollocationRule{{"a", "b"}, "ab"}});
  EXPECT_EQ(t, (Tokens{"aa", "b"}));
  t = {"a", "a", "b"};
  apply_collocations(t, {CollocationRule{{"a", "b"}, "ab"}, CollocationRule{{"a", "a"}, "aa"}});
  EXPECT_EQ(t, (Tokens{"a", "ab"}));
}

TEST(Collocations, Parse) {
  const auto rules = parse_collocations("# comment\n\nMoby Dick => moby_dick\r\nwhite  whale=>White_Whale\n");
  ASSERT_EQ(rules.size(), 2U);
  EXPECT_EQ(rules[0].phrase, (Tokens{"moby", "dick"}));
  EXPECT_EQ(rules[0].replacement, "moby_dick");
  EXPECT_EQ(rules[1].replacement, "white_whale");
  EXPECT_THROW((void)parse_collocations("moby dick\n"), std::invalid_argument);
  EXPECT_THROW((void)parse_collocations("moby => m\n"), std::invalid_argument);
  EXPECT_THROW((void)parse_collocations("moby dick => \n"), std::invalid_argument);
  EXPECT_THROW((void)parse_collocations("moby dick => two words\n"), std::invalid_argument);
}

TEST(Windows, Examples) {
  const auto starts = window_starts(100, 30);
  ASSERT_EQ(starts.size(), 36U);
  EXPECT_EQ(starts.front(), 0U);
  EXPECT_EQ(starts[1], 2U);
  EXPECT_EQ(starts.back(), 70U);
  EXPECT_EQ(window_starts(100, 100), (std::vector<std::size_t>{0}));
  EXPECT_EQ(window_stride(14), 1U);
  EXPECT_EQ(window_starts(20, 10).size(), 11U);
  EXPECT_THROW((void)window_starts(100, 101), std::invalid_argument);
  EXPECT_THROW((void)window_starts(100, 0), std::invalid_argument);
}

TEST(Windows, CountFormulaAndLengths) {
  const Corpus c = tokenize("one two three four five six seven eight nine ten eleven twelve thirteen fourteen "
                            "fifteen sixteen seventeen eighteen nineteen twenty one two three four five six seven");
  for (std::size_t n = 1; n <= c.length(); ++n) {
    const auto windows = extract_trajectories(c, n);
    const std::size_t stride = window_stride(n);
    EXPECT_EQ(windows.size(), (c.length() - n) / stride + 1);
    for (std::size_t w = 0; w < windows.size(); ++w) {
      ASSERT_EQ(windows[w].size(), n);
      EXPECT_EQ(windows[w][0], c.tokens()[w * stride]);
    }
  }
  EXPECT_THROW((void)extract_trajectories(c, c.length() + 1), std::invalid_argument);
}

TEST(BundledCorpus, Properties) {
  const std::string dir = WINGIT_CORPUS_DIR;
  const auto rules = parse_collocations(read_text_file(dir + "/collocations.txt"));
  EXPECT_EQ(rules.size(), 10U);
  const std::string text = read_text_file(dir + "/moby_dick.txt");
  const Corpus c = tokenize(text, rules);
  EXPECT_GT(c.length(), 150000U);
  EXPECT_GT(c.vocabulary_size(), 10000U);
  for (const char* merged : {"moby_dick", "white_whale", "captain_ahab", "sperm_whale"}) {
    EXPECT_TRUE(c.symbol_table().contains(merged)) << merged;
  }
  EXPECT_NEAR(compensated_sum(c.empirical_pi().probs()), 1.0, 1e-12);
  const double N = static_cast<double>(c.length());
  std::size_t total = 0;
  for (std::size_t id = 0; id < c.vocabulary_size(); ++id) {
    total += c.counts()[id];
    EXPECT_EQ(c.empirical_pi().probs()[id], static_cast<double>(c.counts()[id]) / N);
  }
  EXPECT_EQ(total, c.length());

  // Every token of every window is a cleaned word of the text or a merge result.
  std::set<std::string> vocabulary;
  for (const auto& w : clean_tokens(text)) vocabulary.insert(w);
  for (const auto& r : rules) vocabulary.insert(r.replacement);
  for (const auto& window : extract_trajectories(c, 19200)) {
    for (Symbol s : window) ASSERT_TRUE(vocabulary.count(c.symbol_table().token(s)));
  }
}

}  // namespace wingit
