#pragma once

#include <random>
#include <string>
#include <vector>

#include "skurank/corpus.hpp"
#include "skurank/network.hpp"

namespace skurank::testing {

inline Tokens words(std::string_view text) { return tokenize(text); }

inline Document make_document(std::string id, std::vector<std::string> sentences,
                              std::vector<std::string> reference) {
  Document d;
  d.sku_id = std::move(id);
  for (const auto& s : sentences) d.sentences.push_back(words(s));
  for (const auto& r : reference) d.reference.sentences.push_back(words(r));
  return d;
}

/// Embed 4, 3 filters per width, widths {2,4}, hidden 5, sentences of 6.
inline NetworkConfig toy_network(std::size_t vocab_size = 12) {
  NetworkConfig cfg;
  cfg.vocab_size = vocab_size;
  cfg.embed_dim = 4;
  cfg.filters_per_width = 3;
  cfg.kernel_widths = {2, 4};
  cfg.doc_hidden = 5;
  cfg.ext_hidden = 5;
  cfg.max_sentence_len = 6;
  return cfg;
}

/// `n` sentences of random non-reserved ids; `true_lens` defaults to full.
inline EncodedDocument random_encoded(std::mt19937_64& rng, const NetworkConfig& cfg,
                                      std::size_t n, std::vector<std::size_t> true_lens = {}) {
  std::uniform_int_distribution<std::int32_t> id(2, static_cast<std::int32_t>(cfg.vocab_size) - 1);
  EncodedDocument doc;
  doc.sku_id = "toy";
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = true_lens.empty() ? cfg.max_sentence_len : true_lens[i];
    EncodedSentence s;
    s.ids.assign(cfg.max_sentence_len, Vocabulary::kPadId);
    for (std::size_t j = 0; j < len; ++j) s.ids[j] = id(rng);
    s.true_len = len;
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

}  // namespace skurank::testing
