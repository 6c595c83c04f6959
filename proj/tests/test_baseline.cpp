#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "skurank/baseline.hpp"
#include "skurank/error.hpp"
#include "support/fixtures.hpp"

namespace skurank {
namespace {

using Strings = std::vector<std::string>;

// N = 2; t1 appears in one document, t2 in both.
IdfTable two_doc_idf() {
  std::vector<Document> docs(2);
  docs[0].sentences = {{"t1", "t2"}};
  docs[1].sentences = {{"t2"}, {"t2", "t3"}};
  return build_idf(docs);
}

TEST(Idf, SmoothedRatio) {
  const auto idf = two_doc_idf();
  EXPECT_EQ(idf.num_docs(), 2);
  EXPECT_EQ(idf.doc_freq("t2"), 2);
  EXPECT_DOUBLE_EQ(idf.idf("t2"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(idf.idf("t1"), 1.0);
  EXPECT_DOUBLE_EQ(idf.idf("never-seen"), 2.0);

  std::vector<Document> one(1);
  one[0].sentences = {{"x"}};
  EXPECT_DOUBLE_EQ(build_idf(one).idf("x"), 0.5);
}

TEST(Idf, SaveLoadRoundTrip) {
  const auto idf = two_doc_idf();
  const auto path = std::filesystem::temp_directory_path() / "skurank_idf.tsv";
  idf.save(path);
  const auto loaded = IdfTable::load(path);
  EXPECT_EQ(loaded.num_docs(), idf.num_docs());
  EXPECT_EQ(loaded.doc_freqs(), idf.doc_freqs());
  std::filesystem::remove(path);
}

TEST(Idf, RejectsInvalidFrequencies) {
  EXPECT_THROW(IdfTable(0, {}), Error);
  EXPECT_THROW(IdfTable(2, {{"a", 3}}), Error);
  EXPECT_THROW(build_idf(std::span<const Document>()), Error);
}

TEST(Score, HandComputedExamples) {
  const auto idf = two_doc_idf();
  const Strings sentence{"t1", "t1", "t2"};
  const Strings title{"t2"};
  EXPECT_DOUBLE_EQ(score_sentence(sentence, title, idf, {BaselineMode::kUnweighted, 2.0}),
                   8.0 / 3.0);
  EXPECT_DOUBLE_EQ(score_sentence(sentence, title, idf, {BaselineMode::kWeighted, 2.0}),
                   10.0 / 3.0);
  EXPECT_DOUBLE_EQ(score_sentence(sentence, title, idf, {BaselineMode::kFiltered, 2.0}),
                   2.0 / 3.0);
}

TEST(Score, WeightOneEqualsUnweighted) {
  const auto idf = two_doc_idf();
  const Strings sentence{"t1", "t2", "t3", "t2"};
  EXPECT_EQ(score_sentence(sentence, Strings{"t2"}, idf, {BaselineMode::kWeighted, 1.0}),
            score_sentence(sentence, Strings{"t2"}, idf, {BaselineMode::kUnweighted, 1.0}));
}

TEST(Score, WeightBelowOneRejected) {
  EXPECT_THROW((BaselineConfig{BaselineMode::kWeighted, 0.5}.validate()), Error);
}

std::vector<Document> random_corpus(std::uint64_t seed, std::size_t docs) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> word(0, 40), len(1, 12), count(1, 8);
  auto sentence = [&] {
    Tokens t(static_cast<std::size_t>(len(rng)));
    for (auto& w : t) w = "w" + std::to_string(word(rng));
    return t;
  };
  std::vector<Document> out(docs);
  for (std::size_t d = 0; d < docs; ++d) {
    out[d].sku_id = "d" + std::to_string(d);
    out[d].reference.sentences.push_back(sentence());
    const int n = count(rng);
    for (int i = 0; i < n; ++i) out[d].sentences.push_back(sentence());
  }
  return out;
}

TEST(Score, ModeOrderingOnRandomCorpus) {
  const auto docs = random_corpus(17, 100);
  const auto idf = build_idf(docs);
  for (const auto& d : docs) {
    for (const auto& s : d.sentences) {
      const double w = score_sentence(s, d.title(), idf, {BaselineMode::kWeighted, 2.0});
      const double u = score_sentence(s, d.title(), idf, {BaselineMode::kUnweighted, 2.0});
      const double f = score_sentence(s, d.title(), idf, {BaselineMode::kFiltered, 2.0});
      EXPECT_GE(f, 0.0);
      EXPECT_GE(w, u);
      EXPECT_GE(u, f);
    }
  }
}

TEST(Score, TokenOrderIrrelevant) {
  const auto docs = random_corpus(18, 20);
  const auto idf = build_idf(docs);
  std::mt19937 rng(1);
  for (const auto& d : docs) {
    for (auto s : d.sentences) {
      const double before = score_sentence(s, d.title(), idf, {});
      std::shuffle(s.begin(), s.end(), rng);
      EXPECT_DOUBLE_EQ(score_sentence(s, d.title(), idf, {}), before);
    }
  }
}

TEST(Rank, IdfScalingLeavesRankingUnchanged) {
  // Doubling N with unchanged document frequencies scales every idf by 2.
  const auto docs = random_corpus(19, 30);
  const auto idf = build_idf(docs);
  const IdfTable scaled(2 * idf.num_docs(), idf.doc_freqs());
  for (auto mode : {BaselineMode::kUnweighted, BaselineMode::kWeighted, BaselineMode::kFiltered}) {
    for (const auto& d : docs) {
      EXPECT_EQ(baseline_rank(d, idf, {mode, 2.0}, 3), baseline_rank(d, scaled, {mode, 2.0}, 3));
    }
  }
}

TEST(Rank, ShortDocumentsAndTies) {
  const auto idf = two_doc_idf();
  const auto two = testing::make_document("d", {"t1", "t2"}, {"t1"});
  EXPECT_EQ(baseline_rank(two, idf, {}, 3).size(), 2u);

  const auto untitled = testing::make_document("u", {"t1 t3", "t2", "t3"}, {"zzz"});
  EXPECT_EQ(baseline_rank(untitled, idf, {BaselineMode::kFiltered, 2.0}, 3),
            (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_THROW(baseline_rank(untitled, idf, {}, 0), Error);
}

}  // namespace
}  // namespace skurank
