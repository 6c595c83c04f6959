#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skurank/textprep.hpp"

namespace skurank {

struct Query {
  std::string text;
  std::int64_t clicks = 0;

  friend bool operator==(const Query&, const Query&) = default;
};

/// One catalog record as it appears on disk.
struct RawSku {
  std::string sku_id;
  std::string title;
  std::string description;
  std::vector<std::string> bullets;
  std::vector<Query> queries;
  std::optional<std::vector<bool>> relevance_labels;

  friend bool operator==(const RawSku&, const RawSku&) = default;
};

enum class ReferenceMode { kTitleOnly, kTitlePlusQueries };

ReferenceMode parse_reference_mode(std::string_view name);
std::string_view to_string(ReferenceMode mode);

/// Gold summary: title first, then the selected queries, one token list each.
struct ReferenceSummary {
  std::vector<Tokens> sentences;
};

struct Document {
  std::string sku_id;
  std::vector<Tokens> sentences;  // description sentences, then bullets
  ReferenceSummary reference;
  std::optional<std::vector<bool>> relevance_labels;

  const Tokens& title() const { return reference.sentences.front(); }
};

struct CorpusConfig {
  std::size_t max_queries = 5;
  // A SKU qualifies for title+queries references when at least one query has
  // this many clicks.
  std::int64_t min_query_clicks = 1;
};

struct LoadStats {
  std::size_t records = 0;
  std::size_t skipped_empty_title = 0;
  std::size_t skipped_low_engagement = 0;
  std::size_t skipped_no_sentences = 0;
};

struct LoadResult {
  std::vector<Document> documents;
  LoadStats stats;
};

/// Parses one JSON Lines record. Throws on schema violations.
RawSku parse_sku(std::string_view json_line);
std::string serialize_sku(const RawSku& sku);

/// Reads a JSON Lines catalog. Malformed lines fail with their 1-based line
/// number; repeated sku_ids fail naming the id. Blank lines are ignored.
std::vector<RawSku> read_catalog(const std::filesystem::path& path);
void write_catalog(const std::filesystem::path& path, std::span<const RawSku> skus);

/// Segmented and tokenized sentences of a SKU: description sentences followed
/// by one sentence per bullet. Sentences with no tokens are dropped; relevance
/// labels align with this list.
std::vector<Tokens> sku_sentences(const RawSku& sku);

/// Queries ordered by clicks descending, ties by text ascending. Texts are
/// normalized through the tokenizer and duplicates merged by summing clicks.
std::vector<std::string> select_top_queries(std::span<const Query> queries, std::size_t limit);

ReferenceSummary build_reference(const RawSku& sku, ReferenceMode mode,
                                 const CorpusConfig& cfg);

LoadResult to_documents(std::span<const RawSku> skus, ReferenceMode mode,
                        const CorpusConfig& corpus_cfg, const TextConfig& text_cfg);

LoadResult load_catalog(const std::filesystem::path& path, ReferenceMode mode,
                        const CorpusConfig& corpus_cfg, const TextConfig& text_cfg);

Vocabulary build_vocab(std::span<const Document> docs, const TextConfig& cfg);

EncodedDocument encode_document(const Document& doc, const Vocabulary& vocab,
                                const TextConfig& cfg);

}  // namespace skurank
