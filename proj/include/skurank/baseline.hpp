#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skurank/corpus.hpp"

namespace skurank {

/// Document frequencies over SKUs. idf(t) = N / (1 + df(t)), with no
/// logarithm, so unseen tokens get idf N.
class IdfTable {
 public:
  IdfTable(std::int64_t num_docs, std::map<std::string, std::int64_t, std::less<>> doc_freq);

  std::int64_t num_docs() const { return num_docs_; }
  std::int64_t doc_freq(std::string_view token) const;
  double idf(std::string_view token) const;
  const auto& doc_freqs() const { return doc_freq_; }

  /// Header line "N <num_docs>" followed by "token<TAB>doc_freq" lines.
  void save(const std::filesystem::path& path) const;
  static IdfTable load(const std::filesystem::path& path);

 private:
  std::int64_t num_docs_;
  std::map<std::string, std::int64_t, std::less<>> doc_freq_;
};

IdfTable build_idf(std::span<const Document> corpus);

enum class BaselineMode { kUnweighted, kWeighted, kFiltered };

BaselineMode parse_baseline_mode(std::string_view name);
std::string_view to_string(BaselineMode mode);

struct BaselineConfig {
  BaselineMode mode = BaselineMode::kWeighted;
  double title_weight = 2.0;

  void validate() const;
};

/// Sum over distinct tokens of tf * idf, tf counted within the sentence.
/// Weighted mode multiplies title tokens by title_weight; filtered mode keeps
/// only title tokens.
double score_sentence(std::span<const std::string> sentence, std::span<const std::string> title,
                      const IdfTable& idf, const BaselineConfig& cfg);

/// score_sentence for every sentence of the document against its title.
std::vector<double> baseline_scores(const Document& doc, const IdfTable& idf,
                                    const BaselineConfig& cfg);

/// Top min(K, n) sentence indices by score, ties by earlier position.
std::vector<std::size_t> baseline_rank(const Document& doc, const IdfTable& idf,
                                       const BaselineConfig& cfg, std::size_t K);

}  // namespace skurank
