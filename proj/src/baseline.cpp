#include "skurank/baseline.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "skurank/error.hpp"

namespace skurank {

IdfTable::IdfTable(std::int64_t num_docs,
                   std::map<std::string, std::int64_t, std::less<>> doc_freq)
    : num_docs_(num_docs), doc_freq_(std::move(doc_freq)) {
  if (num_docs_ <= 0) throw Error("idf table needs a positive document count");
  for (const auto& [token, df] : doc_freq_) {
    if (df <= 0 || df > num_docs_) {
      throw Error("document frequency of '" + token + "' outside (0, N]");
    }
  }
}

std::int64_t IdfTable::doc_freq(std::string_view token) const {
  auto it = doc_freq_.find(token);
  return it == doc_freq_.end() ? 0 : it->second;
}

double IdfTable::idf(std::string_view token) const {
  return static_cast<double>(num_docs_) / static_cast<double>(1 + doc_freq(token));
}

void IdfTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write idf table: " + path.string());
  out << "N " << num_docs_ << '\n';
  for (const auto& [token, df] : doc_freq_) out << token << '\t' << df << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

IdfTable IdfTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read idf table: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("N ", 0) != 0) {
    throw Error(path.string() + ": missing 'N <count>' header");
  }
  const std::int64_t n = std::stoll(line.substr(2));
  std::map<std::string, std::int64_t, std::less<>> df;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected token<TAB>count");
    }
    df.emplace(line.substr(0, tab), std::stoll(line.substr(tab + 1)));
  }
  return IdfTable(n, std::move(df));
}

IdfTable build_idf(std::span<const Document> corpus) {
  if (corpus.empty()) throw Error("cannot build idf from an empty corpus");
  std::map<std::string, std::int64_t, std::less<>> df;
  for (const auto& doc : corpus) {
    std::set<std::string_view> seen;
    for (const auto& s : doc.sentences) seen.insert(s.begin(), s.end());
    for (auto t : seen) ++df[std::string(t)];
  }
  return IdfTable(static_cast<std::int64_t>(corpus.size()), std::move(df));
}

BaselineMode parse_baseline_mode(std::string_view name) {
  if (name == "unweighted") return BaselineMode::kUnweighted;
  if (name == "weighted") return BaselineMode::kWeighted;
  if (name == "filtered") return BaselineMode::kFiltered;
  throw Error("unknown baseline mode: " + std::string(name));
}

std::string_view to_string(BaselineMode mode) {
  switch (mode) {
    case BaselineMode::kUnweighted: return "unweighted";
    case BaselineMode::kWeighted: return "weighted";
    case BaselineMode::kFiltered: return "filtered";
  }
  return "unknown";
}

void BaselineConfig::validate() const {
  if (mode == BaselineMode::kWeighted && !(title_weight >= 1.0)) {
    throw Error("weighted baseline requires title_weight >= 1");
  }
}

double score_sentence(std::span<const std::string> sentence, std::span<const std::string> title,
                      const IdfTable& idf, const BaselineConfig& cfg) {
  std::map<std::string_view, int> tf;
  for (const auto& t : sentence) ++tf[t];
  const std::set<std::string_view> title_set(title.begin(), title.end());

  double score = 0.0;
  for (const auto& [token, count] : tf) {
    const double weight = count * idf.idf(token);
    const bool in_title = title_set.contains(token);
    switch (cfg.mode) {
      case BaselineMode::kUnweighted:
        score += weight;
        break;
      case BaselineMode::kWeighted:
        score += in_title ? cfg.title_weight * weight : weight;
        break;
      case BaselineMode::kFiltered:
        if (in_title) score += weight;
        break;
    }
  }
  return score;
}

std::vector<double> baseline_scores(const Document& doc, const IdfTable& idf,
                                    const BaselineConfig& cfg) {
  cfg.validate();
  std::vector<double> scores(doc.sentences.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = score_sentence(doc.sentences[i], doc.title(), idf, cfg);
  }
  return scores;
}

std::vector<std::size_t> baseline_rank(const Document& doc, const IdfTable& idf,
                                       const BaselineConfig& cfg, std::size_t K) {
  if (K == 0) throw Error("K must be >= 1");
  const auto scores = baseline_scores(doc, idf, cfg);
  const auto n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(K, n));
  return order;
}

}  // namespace skurank
