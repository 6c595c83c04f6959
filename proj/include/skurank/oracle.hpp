#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "skurank/corpus.hpp"

namespace skurank {

struct OracleConfig {
  std::size_t p = 8;   // sentences shortlisted by their own ROUGE
  std::size_t m = 3;   // maximum extract length
  std::size_t k = 10;  // candidate set size cap

  void validate() const;
};

struct CandidateExtract {
  std::vector<std::size_t> sentence_indices;  // ascending
  double reward = 0.0;

  friend bool operator==(const CandidateExtract&, const CandidateExtract&) = default;
};

struct CandidateSet {
  std::string doc_id;
  std::vector<CandidateExtract> candidates;  // best first
};

/// Candidate order: higher reward, then fewer sentences, then the
/// lexicographically smaller index tuple.
bool candidate_before(const CandidateExtract& a, const CandidateExtract& b);

/// Mean ROUGE F1 of the given sentences (ascending indices) against the
/// document's reference.
double extract_reward(const Document& doc, std::span<const std::size_t> indices);

/// Top min(p, n) sentence indices by individual reward, ties by position.
std::vector<std::size_t> shortlist(const Document& doc, std::size_t p);

/// Every non-empty subset of `pool` with at most `m` members, scored, in
/// enumeration order.
std::vector<CandidateExtract> enumerate_extracts(const Document& doc,
                                                 std::span<const std::size_t> pool,
                                                 std::size_t m);

CandidateSet build_candidate_set(const Document& doc, const OracleConfig& cfg);

/// 1 for members of the best candidate, 0 elsewhere.
std::vector<int> best_extract_labels(const CandidateSet& cs, std::size_t n);

void write_candidate_sets(const std::filesystem::path& path, std::span<const CandidateSet> sets);
std::vector<CandidateSet> read_candidate_sets(const std::filesystem::path& path);

}  // namespace skurank
