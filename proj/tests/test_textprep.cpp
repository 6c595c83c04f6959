#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "skurank/error.hpp"
#include "skurank/textprep.hpp"

namespace skurank {
namespace {

using Strings = std::vector<std::string>;

TEST(Segment, SplitsOnTerminalMarks) {
  EXPECT_EQ(segment("Great taste. Gluten free!"), (Strings{"Great taste", "Gluten free"}));
  EXPECT_EQ(segment("Why? Because; yes\nno"), (Strings{"Why", "Because", "yes", "no"}));
}

TEST(Segment, EmptyInput) {
  EXPECT_TRUE(segment("").empty());
  EXPECT_TRUE(segment(" . ! ").empty());
}

TEST(Segment, PeriodBeforeLowercaseOrDigitDoesNotSplit) {
  EXPECT_EQ(segment("approx. 5 oz. Perfect for snacks"),
            (Strings{"approx. 5 oz", "Perfect for snacks"}));
  EXPECT_EQ(segment("Contains 2.5 lbs. of rice"), (Strings{"Contains 2.5 lbs. of rice"}));
}

TEST(Segment, JoiningSegmentsIsIdempotent) {
  const Strings once = segment("Fresh and crisp. Picked daily! Ships cold; keep chilled");
  std::string joined;
  for (const auto& s : once) joined += s + "\n";
  EXPECT_EQ(segment(joined), once);
}

TEST(Tokenize, LowercasesAndStripsEdgePunctuation) {
  EXPECT_EQ(tokenize("Gluten Free, Non-GMO"), (Strings{"gluten", "free", "non-gmo"}));
  EXPECT_EQ(tokenize("100% natural!"), (Strings{"100%", "natural"}));
  EXPECT_EQ(tokenize("(\"quoted\")  ...  "), (Strings{"quoted"}));
  EXPECT_TRUE(tokenize("  ").empty());
}

TEST(Vocabulary, ReservedIdsAndUnknownFallback) {
  const Vocabulary v;
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.lookup("<nonexistent>"), Vocabulary::kUnkId);
  EXPECT_EQ(v.token(Vocabulary::kPadId), "<pad>");
}

TEST(Vocabulary, FrequencyThenLexicographicRanking) {
  const std::vector<Tokens> tied{{"a", "a", "a", "a", "a", "b", "b", "b", "b", "b", "c"}};
  const auto v = build_vocab(tied, 4, 2);
  EXPECT_EQ(v.size(), 4u);
  EXPECT_EQ(v.lookup("a"), 2);
  EXPECT_EQ(v.lookup("b"), 3);
  EXPECT_EQ(v.lookup("c"), Vocabulary::kUnkId);
  EXPECT_EQ(build_vocab(tied, 3, 1).size(), 3u);
}

TEST(Vocabulary, OrderIndependent) {
  std::vector<Tokens> corpus{{"x", "y", "z", "y"}, {"z", "w", "x"}, {"y", "w"}};
  const auto a = build_vocab(corpus, 100, 1);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(corpus.begin(), corpus.end(), rng);
    for (auto& s : corpus) std::shuffle(s.begin(), s.end(), rng);
    EXPECT_EQ(build_vocab(corpus, 100, 1), a);
  }
}

TEST(Vocabulary, SaveLoadRoundTrip) {
  const auto v = Vocabulary::from_tokens(Strings{"gluten", "free", "non-gmo"});
  const auto path = std::filesystem::temp_directory_path() / "skurank_vocab_test.txt";
  v.save(path);
  const auto loaded = Vocabulary::load(path);
  EXPECT_EQ(loaded, v);
  EXPECT_EQ(loaded.hash(), v.hash());
  EXPECT_EQ(loaded.lookup("free"), 3);
  std::filesystem::remove(path);
}

TEST(Vocabulary, HashDependsOnOrder) {
  EXPECT_NE(Vocabulary::from_tokens(Strings{"a", "b"}).hash(),
            Vocabulary::from_tokens(Strings{"b", "a"}).hash());
}

TEST(Encode, PadsTruncatesAndMapsUnknowns) {
  const auto v = Vocabulary::from_tokens(Strings{"a", "b"});
  const auto e = encode(Strings{"a", "b"}, v, 4);
  EXPECT_EQ(e.ids, (std::vector<std::int32_t>{2, 3, 0, 0}));
  EXPECT_EQ(e.true_len, 2u);

  const Strings sixty(60, "a");
  EXPECT_EQ(encode(sixty, v, 50).true_len, 50u);

  const auto u = encode(Strings{"zzz-unseen"}, v, 3);
  EXPECT_EQ(u.ids, (std::vector<std::int32_t>{1, 0, 0}));
  EXPECT_EQ(u.true_len, 1u);
}

TEST(Encode, DecodeInvertsUpToUnknownsAndTruncation) {
  const auto v = Vocabulary::from_tokens(Strings{"a", "b", "c"});
  const Strings tokens{"a", "q", "c", "b", "a", "c"};
  const auto decoded = decode(encode(tokens, v, 5), v);
  EXPECT_EQ(decoded, (Strings{"a", "<unk>", "c", "b", "a"}));
}

}  // namespace
}  // namespace skurank
