#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skurank {

using Tokens = std::vector<std::string>;

struct TextConfig {
  std::size_t max_sentence_len = 50;
  std::size_t max_doc_sentences = 30;
  std::size_t vocab_max_size = 30000;
  std::size_t vocab_min_freq = 2;
};

/// Splits free text into sentences. Terminators are '!', '?', ';' and newline.
/// A '.' terminates a sentence unless the next non-blank character is a
/// lowercase ASCII letter or a digit ("approx. 5 oz", "2.5"). Terminators are
/// not kept; segments are trimmed and blank segments dropped.
std::vector<std::string> segment(std::string_view text);

/// Lowercases, splits on whitespace and strips leading/trailing punctuation
/// from each token. Internal punctuation ("non-gmo") and the symbols % $ # & +
/// / @ = are kept.
Tokens tokenize(std::string_view sentence);

/// Joins tokens with single spaces.
std::string detokenize(std::span<const std::string> tokens);

class Vocabulary {
 public:
  static constexpr std::int32_t kPadId = 0;
  static constexpr std::int32_t kUnkId = 1;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";

  /// Reserved ids only.
  Vocabulary();

  /// Assigns ids 2, 3, ... to `tokens` in the given order.
  static Vocabulary from_tokens(std::span<const std::string> tokens);

  std::int32_t lookup(std::string_view token) const;
  const std::string& token(std::int32_t id) const;
  std::size_t size() const { return id_to_token_.size(); }

  /// FNV-1a over the id-ordered token list. Checkpoints record it so a model
  /// is never paired with a different vocabulary.
  std::uint64_t hash() const;

  /// One token per line; the token on line `i` (0-based) has id `i + 2`.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.id_to_token_ == b.id_to_token_;
  }

 private:
  void add(std::string token);

  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, std::int32_t> token_to_id_;
};

/// Ranks tokens by frequency (descending, ties lexicographic) and admits the
/// first `max_size - 2` with frequency >= `min_freq`.
Vocabulary build_vocab(std::span<const Tokens> sentences, std::size_t max_size,
                       std::size_t min_freq);

struct EncodedSentence {
  std::vector<std::int32_t> ids;  // fixed length, pad-filled past true_len
  std::size_t true_len = 0;

  friend bool operator==(const EncodedSentence&, const EncodedSentence&) = default;
};

EncodedSentence encode(std::span<const std::string> tokens, const Vocabulary& vocab,
                       std::size_t max_sentence_len);

/// Inverse of encode up to unknown-token replacement and truncation.
Tokens decode(const EncodedSentence& sentence, const Vocabulary& vocab);

struct EncodedDocument {
  std::string sku_id;
  std::vector<EncodedSentence> sentences;
  std::vector<EncodedSentence> reference;
};

}  // namespace skurank
