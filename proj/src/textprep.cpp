#include "skurank/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include "skurank/error.hpp"

namespace skurank {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool period_splits(std::string_view text, std::size_t pos) {
  std::size_t next = pos + 1;
  while (next < text.size() && is_space(text[next]) && text[next] != '\n') ++next;
  if (next >= text.size()) return true;
  const auto c = static_cast<unsigned char>(text[next]);
  return !(std::islower(c) || std::isdigit(c));
}

constexpr std::string_view kStripChars = ".,;:!?\"'`()[]{}<>*-_~|";

bool strippable(char c) { return kStripChars.find(c) != std::string_view::npos; }

}  // namespace

std::vector<std::string> segment(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    const auto piece = trim(text.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end + 1;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '!':
      case '?':
      case ';':
      case '\n':
        emit(i);
        break;
      case '.':
        if (period_splits(text, i)) emit(i);
        break;
      default:
        break;
    }
  }
  if (start < text.size()) emit(text.size());
  return out;
}

Tokens tokenize(std::string_view sentence) {
  Tokens out;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j])) ++j;
    std::string_view word = sentence.substr(i, j - i);
    while (!word.empty() && strippable(word.front())) word.remove_prefix(1);
    while (!word.empty() && strippable(word.back())) word.remove_suffix(1);
    if (!word.empty()) {
      std::string token(word);
      std::transform(token.begin(), token.end(), token.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
      });
      out.push_back(std::move(token));
    }
    i = j;
  }
  return out;
}

std::string detokenize(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

Vocabulary::Vocabulary() {
  add(std::string(kPadToken));
  add(std::string(kUnkToken));
}

void Vocabulary::add(std::string token) {
  const auto id = static_cast<std::int32_t>(id_to_token_.size());
  token_to_id_.emplace(token, id);
  id_to_token_.push_back(std::move(token));
}

Vocabulary Vocabulary::from_tokens(std::span<const std::string> tokens) {
  Vocabulary v;
  for (const auto& t : tokens) {
    if (t.empty() || std::any_of(t.begin(), t.end(), is_space)) {
      throw Error("vocabulary token is empty or contains whitespace: '" + t + "'");
    }
    if (v.token_to_id_.contains(t)) throw Error("duplicate vocabulary token: " + t);
    v.add(t);
  }
  return v;
}

std::int32_t Vocabulary::lookup(std::string_view token) const {
  // Reserved markers are not corpus tokens; a literal "<pad>" in text is unknown.
  if (auto it = token_to_id_.find(std::string(token)); it != token_to_id_.end() && it->second > kUnkId) {
    return it->second;
  }
  return kUnkId;
}

const std::string& Vocabulary::token(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw Error("token id out of range: " + std::to_string(id));
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& t : id_to_token_) {
    for (unsigned char c : t) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;  // separator byte never produced by tokenize
    h *= 0x100000001b3ULL;
  }
  return h;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write vocabulary: " + path.string());
  for (std::size_t i = 2; i < id_to_token_.size(); ++i) out << id_to_token_[i] << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read vocabulary: " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return from_tokens(tokens);
}

Vocabulary build_vocab(std::span<const Tokens> sentences, std::size_t max_size,
                       std::size_t min_freq) {
  if (max_size < 3) throw Error("vocabulary max_size must be >= 3");
  std::map<std::string, std::size_t> freq;
  for (const auto& s : sentences) {
    for (const auto& t : s) ++freq[t];
  }
  if (freq.empty()) throw Error("cannot build a vocabulary from an empty corpus");

  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  // freq is already lexicographic, so a stable sort on count keeps the tie-break.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::string> admitted;
  for (const auto& [token, count] : ranked) {
    if (admitted.size() >= max_size - 2 || count < min_freq) break;
    admitted.push_back(token);
  }
  return Vocabulary::from_tokens(admitted);
}

EncodedSentence encode(std::span<const std::string> tokens, const Vocabulary& vocab,
                       std::size_t max_sentence_len) {
  if (tokens.empty()) throw Error("cannot encode an empty sentence");
  if (max_sentence_len == 0) throw Error("max_sentence_len must be positive");
  EncodedSentence out;
  out.true_len = std::min(tokens.size(), max_sentence_len);
  out.ids.assign(max_sentence_len, Vocabulary::kPadId);
  for (std::size_t i = 0; i < out.true_len; ++i) out.ids[i] = vocab.lookup(tokens[i]);
  return out;
}

Tokens decode(const EncodedSentence& sentence, const Vocabulary& vocab) {
  Tokens out;
  out.reserve(sentence.true_len);
  for (std::size_t i = 0; i < sentence.true_len; ++i) out.push_back(vocab.token(sentence.ids[i]));
  return out;
}

}  // namespace skurank
