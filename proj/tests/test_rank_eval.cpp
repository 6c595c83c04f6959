#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "skurank/error.hpp"
#include "skurank/eval.hpp"
#include "skurank/pipeline.hpp"
#include "skurank/rank.hpp"
#include "support/fixtures.hpp"

namespace skurank {
namespace {

using Indices = std::vector<std::size_t>;

TEST(Rank, ShortDocumentsKeepEverything) {
  const std::vector<double> two{0.2, 0.7};
  const auto s = summarize_scores("d", two, 3);
  EXPECT_EQ(s.top_k_indices, (Indices{1, 0}));
}

TEST(Rank, EqualScoresKeepDocumentOrder) {
  const std::vector<double> flat(6, 0.5);
  EXPECT_EQ(rank_by_scores(flat), (Indices{0, 1, 2, 3, 4, 5}));
}

TEST(Rank, HandSortedExample) {
  const std::vector<double> scores{0.1, 0.9, 0.5};
  const auto s = summarize_scores("d", scores, 2);
  EXPECT_EQ(s.top_k_indices, (Indices{1, 2}));
  EXPECT_EQ(s.ranked_indices, (Indices{1, 2, 0}));
  EXPECT_EQ(s.scores, (std::vector<double>{0.9, 0.5, 0.1}));
}

TEST(Rank, MonotoneTransformInvariance) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(1 + trial % 12);
    for (auto& x : s) x = std::round(u(rng) * 8.0) / 8.0;  // force ties
    std::vector<double> t(s.size());
    std::transform(s.begin(), s.end(), t.begin(), [](double x) { return std::exp(3 * x) - 7; });
    EXPECT_EQ(rank_by_scores(s), rank_by_scores(t));
  }
}

TEST(Rank, KSelectionContract) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const std::vector<double> scores(n, 0.0);
    EXPECT_EQ(summarize_scores("d", scores, 3).top_k_indices.size(), std::min<std::size_t>(n, 3));
  }
}

TEST(Rank, ModelRankingIsReadOnlyAndChecksVocabulary) {
  std::mt19937_64 rng(2);
  const auto net = testing::toy_network();
  const TrainedModel model{init_params<double>(net, 3), 42};
  const auto doc = testing::random_encoded(rng, net, 5);
  const auto before = model.params.ext_weights;
  const auto a = rank_document(doc, model, 42);
  const auto b = rank_document(doc, model, 42);
  EXPECT_EQ(a.ranked_indices, b.ranked_indices);
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_EQ(a.top_k_indices.size(), 3u);
  EXPECT_EQ(model.params.ext_weights, before);
  EXPECT_THROW(rank_document(doc, model, 43), Error);
}

TEST(Rank, JsonLinesRoundTrip) {
  const auto doc = testing::make_document("sku-9", {"first one", "second", "third here"}, {"x"});
  const std::vector<double> scores{0.2, 0.9, 0.4};
  const std::vector<RankedSummary> summaries{summarize_scores("sku-9", scores, 2)};
  const auto path = std::filesystem::temp_directory_path() / "skurank_rankings.jsonl";
  write_rankings(path, summaries, std::span<const Document>(&doc, 1));
  const auto loaded = read_rankings(path);
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0].sku_id, "sku-9");
  EXPECT_EQ(loaded[0].ranked_indices, summaries[0].ranked_indices);
  EXPECT_EQ(loaded[0].top_k_indices, summaries[0].top_k_indices);
  EXPECT_EQ(loaded[0].scores, summaries[0].scores);
  const auto line = ranking_json_line(summaries[0], doc);
  EXPECT_NE(line.find("\"sentences\":[\"second\",\"third here\"]"), std::string::npos) << line;
  std::filesystem::remove(path);
}

TEST(Precision, HandCountedExample) {
  const std::vector<bool> labels{true, false, true};
  const Indices ranked{0, 1, 2};
  EXPECT_DOUBLE_EQ(precision_at_k(ranked, labels, 1), 1.0);
  EXPECT_DOUBLE_EQ(precision_at_k(ranked, labels, 2), 0.5);
  EXPECT_DOUBLE_EQ(precision_at_k(ranked, labels, 3), 2.0 / 3.0);
}

TEST(Precision, AllOrNothingAndShortDocuments) {
  const Indices ranked{2, 0, 1};
  for (std::size_t k : {1, 2, 3}) {
    EXPECT_EQ(precision_at_k(ranked, std::vector<bool>(3, true), k), 1.0);
    EXPECT_EQ(precision_at_k(ranked, std::vector<bool>(3, false), k), 0.0);
  }
  EXPECT_EQ(precision_at_k(Indices{1, 0}, std::vector<bool>{true, true}, 3), 1.0);
  EXPECT_THROW(precision_at_k(ranked, {}, 1), Error);
  EXPECT_THROW(precision_at_k(ranked, std::vector<bool>(3, true), 0), Error);
}

std::vector<Document> labelled_docs(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<Document> docs;
  for (std::size_t d = 0; d < count; ++d) {
    Document doc = testing::make_document("doc" + std::to_string(d), {}, {"title words"});
    const std::size_t n = 1 + rng() % 6;
    std::vector<bool> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      doc.sentences.push_back({"s" + std::to_string(i)});
      labels[i] = rng() % 2;
    }
    doc.relevance_labels = labels;
    docs.push_back(std::move(doc));
  }
  return docs;
}

SystemRankings random_system(const std::vector<Document>& docs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SystemRankings sys{"sys" + std::to_string(seed), {}};
  for (const auto& d : docs) {
    Indices r(d.sentences.size());
    std::iota(r.begin(), r.end(), 0);
    std::shuffle(r.begin(), r.end(), rng);
    sys.rankings.push_back(r);
  }
  return sys;
}

TEST(Evaluate, IdenticalSystemsGiveIdenticalRows) {
  const auto docs = labelled_docs(1, 1);
  const auto sys = random_system(docs, 2);
  auto twin = sys;
  twin.name = "twin";
  const std::vector<SystemRankings> systems{sys, twin};
  const auto report = evaluate_systems(docs, systems);
  EXPECT_EQ(report.rows[0].precision, report.rows[1].precision);
  ASSERT_EQ(report.deltas.size(), 1u);
}

TEST(Evaluate, DocumentOrderDoesNotMatter) {
  auto docs = labelled_docs(3, 40);
  auto sys = random_system(docs, 4);
  const auto base = evaluate_systems(docs, std::vector<SystemRankings>{sys});
  std::mt19937_64 rng(5);
  std::vector<std::size_t> perm(docs.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Document> pdocs;
  SystemRankings psys{sys.name, {}};
  for (auto i : perm) {
    pdocs.push_back(docs[i]);
    psys.rankings.push_back(sys.rankings[i]);
  }
  const auto permuted = evaluate_systems(pdocs, std::vector<SystemRankings>{psys});
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_NEAR(base.rows[0].precision[c], permuted.rows[0].precision[c], 1e-12);
  }
}

TEST(Evaluate, PrecisionAtOneIsBinaryPerDocument) {
  const auto docs = labelled_docs(6, 30);
  const auto sys = random_system(docs, 7);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const double p = precision_at_k(sys.rankings[d], *docs[d].relevance_labels, 1);
    EXPECT_TRUE(p == 0.0 || p == 1.0);
  }
}

TEST(Evaluate, DeltasAndReports) {
  const auto docs = labelled_docs(8, 20);
  const std::vector<SystemRankings> systems{random_system(docs, 9), random_system(docs, 10)};
  const auto report = evaluate_systems(docs, systems);
  for (std::size_t c = 0; c < 3; ++c) {
    const double a = report.rows[1].precision[c], b = report.rows[0].precision[c];
    if (b > 0) {
      EXPECT_NEAR(report.deltas[0].relative[c], (a - b) / b, 1e-12);
    }
  }
  std::ostringstream csv1, csv2;
  report.write_csv(csv1);
  evaluate_systems(docs, systems).write_csv(csv2);
  EXPECT_EQ(csv1.str(), csv2.str());
  EXPECT_EQ(csv1.str().rfind("system,k,precision,num_docs\n", 0), 0u);
  std::ostringstream table;
  report.write_table(table);
  EXPECT_NE(table.str().find("P@3"), std::string::npos);
}

TEST(Evaluate, MisalignedLabelsNameTheSku) {
  auto docs = labelled_docs(11, 3);
  docs[1].relevance_labels->push_back(true);
  try {
    evaluate_systems(docs, std::vector<SystemRankings>{random_system(docs, 12)});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("doc1"), std::string::npos);
  }
}

TEST(Sweep, SingleWeightAndUnweightedDegenerateCase) {
  const auto docs = labelled_docs(13, 25);
  auto titled = docs;
  for (auto& d : titled) d.reference.sentences[0] = {"s0", "s3"};
  const auto idf = build_idf(titled);
  const std::vector<double> one{2.0};
  EXPECT_EQ(sweep_title_weight(titled, idf, one).rows.size(), 1u);

  const std::vector<double> weights{1.0, 2.0};
  const auto sweep = sweep_title_weight(titled, idf, weights);
  const NamedRanker unweighted{"unweighted",
                               baseline_ranker(idf, {BaselineMode::kUnweighted, 1.0})};
  const auto report = evaluate_systems(titled, std::span<const NamedRanker>(&unweighted, 1));
  EXPECT_EQ(sweep.rows[0].precision, report.rows[0].precision);
  EXPECT_THROW(sweep_title_weight(titled, idf, std::vector<double>{}), Error);
}

}  // namespace
}  // namespace skurank
