#include "skurank/rank.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "skurank/error.hpp"

namespace skurank {

std::vector<std::size_t> rank_by_scores(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

RankedSummary summarize_scores(std::string sku_id, std::span<const double> scores, std::size_t K) {
  if (K == 0) throw Error("K must be >= 1");
  RankedSummary out;
  out.sku_id = std::move(sku_id);
  out.ranked_indices = rank_by_scores(scores);
  out.top_k_indices.assign(out.ranked_indices.begin(),
                           out.ranked_indices.begin() +
                               static_cast<std::ptrdiff_t>(std::min(K, scores.size())));
  for (auto i : out.ranked_indices) out.scores.push_back(scores[i]);
  return out;
}

RankedSummary rank_document(const EncodedDocument& doc, const TrainedModel& model,
                            std::uint64_t vocab_hash, std::size_t K) {
  require_vocab_match(model, vocab_hash);
  const auto scored = score_document(model.params, doc);
  const VectorX<double> s = scored.scores();
  return summarize_scores(doc.sku_id, std::span<const double>(s.data(), static_cast<std::size_t>(s.size())), K);
}

std::string ranking_json_line(const RankedSummary& summary, const Document& doc) {
  if (summary.sku_id != doc.sku_id) throw Error("ranking/document mismatch for " + doc.sku_id);
  nlohmann::json sentences = nlohmann::json::array();
  for (auto i : summary.top_k_indices) sentences.push_back(detokenize(doc.sentences.at(i)));
  nlohmann::json obj{{"sku_id", summary.sku_id},
                     {"ranked_indices", summary.ranked_indices},
                     {"top_k_indices", summary.top_k_indices},
                     {"scores", summary.scores},
                     {"sentences", std::move(sentences)}};
  return obj.dump();
}

void write_rankings(const std::filesystem::path& path, std::span<const RankedSummary> summaries,
                    std::span<const Document> docs) {
  if (summaries.size() != docs.size()) throw Error("rankings and documents differ in length");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write rankings: " + path.string());
  for (std::size_t i = 0; i < docs.size(); ++i) out << ranking_json_line(summaries[i], docs[i]) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<RankedSummary> read_rankings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read rankings: " + path.string());
  std::vector<RankedSummary> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      RankedSummary s;
      s.sku_id = obj.at("sku_id").get<std::string>();
      s.ranked_indices = obj.at("ranked_indices").get<std::vector<std::size_t>>();
      s.top_k_indices = obj.at("top_k_indices").get<std::vector<std::size_t>>();
      if (auto it = obj.find("scores"); it != obj.end()) s.scores = it->get<std::vector<double>>();
      out.push_back(std::move(s));
    } catch (const std::exception& e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace skurank
