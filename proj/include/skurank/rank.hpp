#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "skurank/checkpoint.hpp"
#include "skurank/corpus.hpp"

namespace skurank {

inline constexpr std::size_t kDefaultTopK = 3;

struct RankedSummary {
  std::string sku_id;
  std::vector<std::size_t> ranked_indices;  // permutation, best first
  std::vector<std::size_t> top_k_indices;   // prefix of ranked_indices
  std::vector<double> scores;               // aligned with ranked_indices
};

/// Stable descending argsort: equal scores keep document order.
std::vector<std::size_t> rank_by_scores(std::span<const double> scores);

RankedSummary summarize_scores(std::string sku_id, std::span<const double> scores, std::size_t K);

/// Scores the document with the model and keeps the top min(K, n) sentences.
/// Throws if the model was trained against a different vocabulary.
RankedSummary rank_document(const EncodedDocument& doc, const TrainedModel& model,
                            std::uint64_t vocab_hash, std::size_t K = kDefaultTopK);

/// One JSON object per line: sku_id, ranked_indices, top_k_indices, scores,
/// and the detokenized top-K sentences in rank order.
std::string ranking_json_line(const RankedSummary& summary, const Document& doc);

void write_rankings(const std::filesystem::path& path, std::span<const RankedSummary> summaries,
                    std::span<const Document> docs);
std::vector<RankedSummary> read_rankings(const std::filesystem::path& path);

}  // namespace skurank
