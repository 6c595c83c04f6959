#include "skurank/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "skurank/error.hpp"
#include "skurank/rouge.hpp"

namespace skurank {

void OracleConfig::validate() const {
  if (p == 0 || m == 0 || k == 0) throw Error("oracle p, m and k must be positive");
  if (m > p) throw Error("oracle requires m <= p");
}

bool candidate_before(const CandidateExtract& a, const CandidateExtract& b) {
  if (a.reward != b.reward) return a.reward > b.reward;
  if (a.sentence_indices.size() != b.sentence_indices.size()) {
    return a.sentence_indices.size() < b.sentence_indices.size();
  }
  return a.sentence_indices < b.sentence_indices;
}

double extract_reward(const Document& doc, std::span<const std::size_t> indices) {
  std::vector<Tokens> extract;
  extract.reserve(indices.size());
  for (auto i : indices) {
    if (i >= doc.sentences.size()) throw Error("sentence index out of range in " + doc.sku_id);
    extract.push_back(doc.sentences[i]);
  }
  return reward(extract, doc.reference.sentences).mean_f1;
}

std::vector<std::size_t> shortlist(const Document& doc, std::size_t p) {
  const auto n = doc.sentences.size();
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t one[] = {i};
    score[i] = extract_reward(doc, one);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(std::min(p, n));
  return order;
}

std::vector<CandidateExtract> enumerate_extracts(const Document& doc,
                                                 std::span<const std::size_t> pool,
                                                 std::size_t m) {
  std::vector<std::size_t> sorted_pool(pool.begin(), pool.end());
  std::sort(sorted_pool.begin(), sorted_pool.end());
  std::vector<CandidateExtract> out;
  std::vector<std::size_t> chosen;

  // Depth-first over combinations of increasing positions in the sorted pool,
  // so every subset comes out with ascending indices.
  auto recurse = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t i = from; i < sorted_pool.size(); ++i) {
      chosen.push_back(sorted_pool[i]);
      out.push_back({chosen, extract_reward(doc, chosen)});
      if (chosen.size() < m) self(self, i + 1);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0);
  return out;
}

CandidateSet build_candidate_set(const Document& doc, const OracleConfig& cfg) {
  cfg.validate();
  if (doc.sentences.empty()) throw Error("document " + doc.sku_id + " has no sentences");
  const auto pool = shortlist(doc, cfg.p);
  CandidateSet cs;
  cs.doc_id = doc.sku_id;
  cs.candidates = enumerate_extracts(doc, pool, cfg.m);
  std::sort(cs.candidates.begin(), cs.candidates.end(), candidate_before);
  if (cs.candidates.size() > cfg.k) cs.candidates.resize(cfg.k);
  return cs;
}

std::vector<int> best_extract_labels(const CandidateSet& cs, std::size_t n) {
  if (cs.candidates.empty()) throw Error("empty candidate set for " + cs.doc_id);
  std::vector<int> labels(n, 0);
  for (auto i : cs.candidates.front().sentence_indices) {
    if (i >= n) throw Error("best extract index exceeds document length for " + cs.doc_id);
    labels[i] = 1;
  }
  return labels;
}

void write_candidate_sets(const std::filesystem::path& path, std::span<const CandidateSet> sets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write candidate sets: " + path.string());
  for (const auto& cs : sets) {
    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& c : cs.candidates) {
      candidates.push_back({{"indices", c.sentence_indices}, {"reward", c.reward}});
    }
    out << nlohmann::json{{"sku_id", cs.doc_id}, {"candidates", candidates}}.dump() << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<CandidateSet> read_candidate_sets(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read candidate sets: " + path.string());
  std::vector<CandidateSet> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      CandidateSet cs;
      cs.doc_id = obj.at("sku_id").get<std::string>();
      for (const auto& c : obj.at("candidates")) {
        cs.candidates.push_back(
            {c.at("indices").get<std::vector<std::size_t>>(), c.at("reward").get<double>()});
      }
      if (cs.candidates.empty()) throw Error("empty candidate list");
      out.push_back(std::move(cs));
    } catch (const std::exception& e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace skurank
