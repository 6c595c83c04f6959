#include "skurank/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "skurank/error.hpp"

namespace skurank {

using nlohmann::json;

ReferenceMode parse_reference_mode(std::string_view name) {
  if (name == "title_only") return ReferenceMode::kTitleOnly;
  if (name == "title_plus_queries") return ReferenceMode::kTitlePlusQueries;
  throw Error("unknown reference mode: " + std::string(name));
}

std::string_view to_string(ReferenceMode mode) {
  return mode == ReferenceMode::kTitleOnly ? "title_only" : "title_plus_queries";
}

namespace {

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_string()) throw Error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

RawSku parse_sku(std::string_view json_line) {
  json obj;
  try {
    obj = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw Error("record is not a JSON object");

  RawSku sku;
  sku.sku_id = require_string(obj, "sku_id");
  if (sku.sku_id.empty()) throw Error("empty sku_id");
  sku.title = require_string(obj, "title");
  sku.description = obj.contains("description") ? require_string(obj, "description") : "";

  if (auto it = obj.find("bullets"); it != obj.end()) {
    if (!it->is_array()) throw Error("field 'bullets' must be an array");
    for (const auto& b : *it) {
      if (!b.is_string()) throw Error("bullets must be strings");
      sku.bullets.push_back(b.get<std::string>());
    }
  }
  if (auto it = obj.find("queries"); it != obj.end()) {
    if (!it->is_array()) throw Error("field 'queries' must be an array");
    for (const auto& q : *it) {
      if (!q.is_object()) throw Error("queries must be objects");
      Query query;
      query.text = require_string(q, "text");
      const auto& clicks = require(q, "clicks");
      if (!clicks.is_number_integer() || clicks.get<std::int64_t>() < 0) {
        throw Error("query clicks must be a nonnegative integer");
      }
      query.clicks = clicks.get<std::int64_t>();
      sku.queries.push_back(std::move(query));
    }
  }
  if (auto it = obj.find("relevance_labels"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw Error("field 'relevance_labels' must be an array");
    std::vector<bool> labels;
    for (const auto& l : *it) {
      if (!l.is_boolean()) throw Error("relevance_labels must be booleans");
      labels.push_back(l.get<bool>());
    }
    sku.relevance_labels = std::move(labels);
  }
  return sku;
}

std::string serialize_sku(const RawSku& sku) {
  json obj;
  obj["sku_id"] = sku.sku_id;
  obj["title"] = sku.title;
  obj["description"] = sku.description;
  obj["bullets"] = sku.bullets;
  json queries = json::array();
  for (const auto& q : sku.queries) queries.push_back({{"text", q.text}, {"clicks", q.clicks}});
  obj["queries"] = std::move(queries);
  if (sku.relevance_labels) obj["relevance_labels"] = *sku.relevance_labels;
  return obj.dump();
}

std::vector<RawSku> read_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read catalog: " + path.string());
  std::vector<RawSku> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    RawSku sku;
    try {
      sku = parse_sku(line);
    } catch (const Error& e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(sku.sku_id).second) throw Error("duplicate sku_id: " + sku.sku_id);
    out.push_back(std::move(sku));
  }
  return out;
}

void write_catalog(const std::filesystem::path& path, std::span<const RawSku> skus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write catalog: " + path.string());
  for (const auto& sku : skus) out << serialize_sku(sku) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<Tokens> sku_sentences(const RawSku& sku) {
  std::vector<Tokens> out;
  for (const auto& s : segment(sku.description)) {
    auto tokens = tokenize(s);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  for (const auto& bullet : sku.bullets) {
    auto tokens = tokenize(bullet);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

std::vector<std::string> select_top_queries(std::span<const Query> queries, std::size_t limit) {
  if (limit == 0) throw Error("query limit must be >= 1");
  std::map<std::string, std::int64_t> merged;
  for (const auto& q : queries) {
    auto normalized = detokenize(tokenize(q.text));
    if (!normalized.empty()) merged[normalized] += q.clicks;
  }
  std::vector<std::pair<std::string, std::int64_t>> ranked(merged.begin(), merged.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < limit; ++i) out.push_back(ranked[i].first);
  return out;
}

ReferenceSummary build_reference(const RawSku& sku, ReferenceMode mode, const CorpusConfig& cfg) {
  ReferenceSummary ref;
  auto title = tokenize(sku.title);
  if (title.empty()) throw Error("empty title for sku " + sku.sku_id);
  ref.sentences.push_back(std::move(title));
  if (mode == ReferenceMode::kTitlePlusQueries) {
    for (const auto& q : select_top_queries(sku.queries, cfg.max_queries)) {
      ref.sentences.push_back(tokenize(q));
    }
  }
  return ref;
}

namespace {

bool qualifies(const RawSku& sku, const CorpusConfig& cfg) {
  return std::any_of(sku.queries.begin(), sku.queries.end(), [&](const Query& q) {
    return q.clicks >= cfg.min_query_clicks && !tokenize(q.text).empty();
  });
}

}  // namespace

LoadResult to_documents(std::span<const RawSku> skus, ReferenceMode mode,
                        const CorpusConfig& corpus_cfg, const TextConfig& text_cfg) {
  LoadResult result;
  result.stats.records = skus.size();
  for (const auto& sku : skus) {
    if (tokenize(sku.title).empty()) {
      ++result.stats.skipped_empty_title;
      continue;
    }
    auto sentences = sku_sentences(sku);
    if (sku.relevance_labels && sku.relevance_labels->size() != sentences.size()) {
      throw Error("relevance_labels for sku " + sku.sku_id + " has " +
                  std::to_string(sku.relevance_labels->size()) + " entries but " +
                  std::to_string(sentences.size()) + " sentences were segmented");
    }
    if (sentences.empty()) {
      ++result.stats.skipped_no_sentences;
      continue;
    }
    if (mode == ReferenceMode::kTitlePlusQueries && !qualifies(sku, corpus_cfg)) {
      ++result.stats.skipped_low_engagement;
      continue;
    }

    Document doc;
    doc.sku_id = sku.sku_id;
    doc.reference = build_reference(sku, mode, corpus_cfg);
    doc.relevance_labels = sku.relevance_labels;
    if (sentences.size() > text_cfg.max_doc_sentences) {
      sentences.resize(text_cfg.max_doc_sentences);
      if (doc.relevance_labels) doc.relevance_labels->resize(text_cfg.max_doc_sentences);
    }
    doc.sentences = std::move(sentences);
    result.documents.push_back(std::move(doc));
  }
  return result;
}

LoadResult load_catalog(const std::filesystem::path& path, ReferenceMode mode,
                        const CorpusConfig& corpus_cfg, const TextConfig& text_cfg) {
  const auto skus = read_catalog(path);
  return to_documents(skus, mode, corpus_cfg, text_cfg);
}

Vocabulary build_vocab(std::span<const Document> docs, const TextConfig& cfg) {
  std::vector<Tokens> sentences;
  for (const auto& d : docs) sentences.insert(sentences.end(), d.sentences.begin(), d.sentences.end());
  return build_vocab(sentences, cfg.vocab_max_size, cfg.vocab_min_freq);
}

EncodedDocument encode_document(const Document& doc, const Vocabulary& vocab, const TextConfig& cfg) {
  if (doc.sentences.empty()) throw Error("document " + doc.sku_id + " has no sentences");
  EncodedDocument out;
  out.sku_id = doc.sku_id;
  const auto n = std::min(doc.sentences.size(), cfg.max_doc_sentences);
  for (std::size_t i = 0; i < n; ++i) {
    out.sentences.push_back(encode(doc.sentences[i], vocab, cfg.max_sentence_len));
  }
  for (const auto& r : doc.reference.sentences) {
    out.reference.push_back(encode(r, vocab, cfg.max_sentence_len));
  }
  return out;
}

}  // namespace skurank
