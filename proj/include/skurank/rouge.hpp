#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "skurank/error.hpp"

namespace skurank {

struct RougeScores {
  double rouge1_f1 = 0.0;
  double rouge2_f1 = 0.0;
  double rougeL_f1 = 0.0;
  double mean_f1 = 0.0;
};

namespace detail {

inline double f1_from_counts(std::size_t overlap, std::size_t candidate_total,
                             std::size_t reference_total) {
  if (overlap == 0 || candidate_total == 0 || reference_total == 0) return 0.0;
  // 2PR/(P+R) with P = o/c and R = o/r reduces to 2o/(c+r).
  return 2.0 * static_cast<double>(overlap) /
         static_cast<double>(candidate_total + reference_total);
}

template <typename Token>
std::vector<std::span<const Token>> sorted_ngrams(std::span<const Token> seq, std::size_t n) {
  std::vector<std::span<const Token>> grams;
  if (seq.size() < n) return grams;
  grams.reserve(seq.size() - n + 1);
  for (std::size_t i = 0; i + n <= seq.size(); ++i) grams.push_back(seq.subspan(i, n));
  std::sort(grams.begin(), grams.end(), [](auto a, auto b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return grams;
}

}  // namespace detail

/// Clipped n-gram overlap F1 (n = 1 or 2).
template <typename Token>
double ngram_f1(std::span<const Token> candidate, std::span<const Token> reference, int n) {
  if (n != 1 && n != 2) throw Error("ngram_f1 supports n = 1 or 2");
  const auto un = static_cast<std::size_t>(n);
  const auto a = detail::sorted_ngrams(candidate, un);
  const auto b = detail::sorted_ngrams(reference, un);
  auto less = [](auto x, auto y) {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  };
  // Merge walk over two sorted multisets counts min(count_a, count_b) per gram.
  std::size_t overlap = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (less(a[i], b[j])) {
      ++i;
    } else if (less(b[j], a[i])) {
      ++j;
    } else {
      ++overlap;
      ++i;
      ++j;
    }
  }
  return detail::f1_from_counts(overlap, a.size(), b.size());
}

template <typename Token>
std::size_t lcs_length(std::span<const Token> a, std::span<const Token> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

template <typename Token>
double lcs_f1(std::span<const Token> candidate, std::span<const Token> reference) {
  return detail::f1_from_counts(lcs_length(candidate, reference), candidate.size(),
                                reference.size());
}

template <typename Token>
RougeScores rouge_scores(std::span<const Token> candidate, std::span<const Token> reference) {
  RougeScores s;
  s.rouge1_f1 = ngram_f1(candidate, reference, 1);
  s.rouge2_f1 = ngram_f1(candidate, reference, 2);
  s.rougeL_f1 = lcs_f1(candidate, reference);
  s.mean_f1 = (s.rouge1_f1 + s.rouge2_f1 + s.rougeL_f1) / 3.0;
  return s;
}

template <typename Token>
std::vector<Token> concatenate(std::span<const std::vector<Token>> sentences) {
  std::vector<Token> out;
  for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
  return out;
}

/// Summary-level scores: extract sentences (already in document order) and
/// reference sentences (title first) are each concatenated, then compared.
/// mean_f1 is the training reward.
template <typename Token>
RougeScores reward(std::span<const std::vector<Token>> extract,
                   std::span<const std::vector<Token>> reference) {
  if (extract.empty()) throw Error("reward: extract has no sentences");
  if (reference.empty()) throw Error("reward: reference has no sentences");
  const auto c = concatenate(extract);
  const auto r = concatenate(reference);
  return rouge_scores(std::span<const Token>(c), std::span<const Token>(r));
}

inline RougeScores reward(std::span<const std::vector<std::string>> extract,
                          std::span<const std::vector<std::string>> reference) {
  return reward<std::string>(extract, reference);
}

}  // namespace skurank
