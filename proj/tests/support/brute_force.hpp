#pragma once

// Slow, obviously-correct reference implementations used as test oracles.
// Nothing here shares code with the library.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace skurank::testing {

using Seq = std::vector<std::string>;

inline std::map<Seq, std::size_t> ngram_counts(const Seq& s, std::size_t n) {
  std::map<Seq, std::size_t> counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    ++counts[Seq(s.begin() + static_cast<long>(i), s.begin() + static_cast<long>(i + n))];
  }
  return counts;
}

inline double f1(std::size_t overlap, std::size_t cand_total, std::size_t ref_total) {
  if (overlap == 0) return 0.0;
  return 2.0 * static_cast<double>(overlap) / static_cast<double>(cand_total + ref_total);
}

/// Multiset intersection of n-gram bags.
inline double brute_ngram_f1(const Seq& cand, const Seq& ref, std::size_t n) {
  const auto a = ngram_counts(cand, n);
  const auto b = ngram_counts(ref, n);
  std::size_t overlap = 0, ta = 0, tb = 0;
  for (const auto& [g, c] : a) {
    ta += c;
    auto it = b.find(g);
    if (it != b.end()) overlap += std::min(c, it->second);
  }
  for (const auto& [g, c] : b) tb += c;
  return f1(overlap, ta, tb);
}

/// Memoized recursion on suffixes.
inline std::size_t brute_lcs(const Seq& a, const Seq& b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size() || j == b.size()) return 0;
    int& m = memo[i][j];
    if (m >= 0) return static_cast<std::size_t>(m);
    std::size_t r = a[i] == b[j] ? 1 + self(self, i + 1, j + 1)
                                 : std::max(self(self, i + 1, j), self(self, i, j + 1));
    m = static_cast<int>(r);
    return r;
  };
  return rec(rec, 0, 0);
}

inline double brute_lcs_f1(const Seq& cand, const Seq& ref) {
  return f1(brute_lcs(cand, ref), cand.size(), ref.size());
}

inline double brute_mean_f1(const Seq& cand, const Seq& ref) {
  return (brute_ngram_f1(cand, ref, 1) + brute_ngram_f1(cand, ref, 2) + brute_lcs_f1(cand, ref)) /
         3.0;
}

struct BruteCandidate {
  std::vector<std::size_t> indices;
  double reward = 0.0;
};

/// Every non-empty subset of {0..n-1} with at most m members, scored against
/// the concatenated reference and sorted by reward desc, size asc, then
/// lexicographic index tuple.
inline std::vector<BruteCandidate> brute_candidates(const std::vector<Seq>& sentences,
                                                    const std::vector<Seq>& reference,
                                                    std::size_t m) {
  Seq ref;
  for (const auto& r : reference) ref.insert(ref.end(), r.begin(), r.end());
  const std::size_t n = sentences.size();
  std::vector<BruteCandidate> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    BruteCandidate c;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) c.indices.push_back(i);
    }
    if (c.indices.size() > m) continue;
    Seq cand;
    for (auto i : c.indices) cand.insert(cand.end(), sentences[i].begin(), sentences[i].end());
    c.reward = brute_mean_f1(cand, ref);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const BruteCandidate& a, const BruteCandidate& b) {
    if (a.reward != b.reward) return a.reward > b.reward;
    if (a.indices.size() != b.indices.size()) return a.indices.size() < b.indices.size();
    return a.indices < b.indices;
  });
  return out;
}

}  // namespace skurank::testing
