#pragma once

#include <cstdint>
#include <vector>

#include "skurank/corpus.hpp"

namespace skurank {

/// Shape of a generated catalog. Every document gets a title drawn from the
/// product pool and `planted_per_doc` relevant sentences that contain one or
/// two consecutive title tokens plus attribute-pool words. The other sentences
/// are distractors: boilerplate (sometimes mentioning one title token once) or
/// keyword-stuffed spam that repeats one title token. Distractors are always
/// longer than planted sentences, so planted sentences score strictly higher
/// ROUGE against the title. Queries are built from the planted attribute words.
struct SyntheticSpec {
  std::size_t sentences_per_doc = 10;
  std::size_t planted_per_doc = 3;
  std::size_t title_len = 4;

  std::size_t product_vocab = 300;
  std::size_t attribute_vocab = 1000;
  std::size_t boilerplate_vocab = 100;
  std::size_t spam_vocab = 3000;

  std::size_t planted_len_min = 5;
  std::size_t planted_len_max = 8;
  std::size_t distractor_len_min = 9;
  std::size_t distractor_len_max = 14;

  std::size_t stuffed_max_per_doc = 2;
  std::size_t stuff_repeats = 3;
  double mention_prob = 0.3;

  std::size_t queries_min = 3;
  std::size_t queries_max = 8;
  std::size_t query_len_max = 2;
  std::int64_t max_clicks = 50;

  void validate() const;
};

/// Deterministic in (seed, num_docs, spec). Word pools depend only on the
/// spec, so corpora drawn with different seeds share a vocabulary.
std::vector<RawSku> generate_synthetic_corpus(std::uint64_t seed, std::size_t num_docs,
                                              const SyntheticSpec& spec);

}  // namespace skurank
