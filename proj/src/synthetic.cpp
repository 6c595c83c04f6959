#include "skurank/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <random>
#include <unordered_set>

#include "skurank/error.hpp"

namespace skurank {

void SyntheticSpec::validate() const {
  if (sentences_per_doc == 0) throw Error("synthetic documents need at least one sentence");
  if (planted_per_doc > sentences_per_doc) {
    throw Error("planted sentences per document exceed sentences per document");
  }
  if (title_len < 2) throw Error("synthetic titles need at least two tokens");
  if (product_vocab < title_len || attribute_vocab == 0 || boilerplate_vocab == 0 ||
      spam_vocab == 0) {
    throw Error("synthetic word pools are too small");
  }
  if (planted_len_min < 3 || planted_len_min > planted_len_max) {
    throw Error("planted sentence length range is invalid");
  }
  if (distractor_len_min <= planted_len_max || distractor_len_min > distractor_len_max) {
    throw Error("distractor sentences must be strictly longer than planted sentences");
  }
  if (stuff_repeats == 0 || stuff_repeats > distractor_len_min) {
    throw Error("stuff_repeats must be in [1, distractor_len_min]");
  }
  if (!(mention_prob >= 0.0 && mention_prob <= 1.0)) throw Error("mention_prob outside [0, 1]");
  if (queries_min > queries_max || query_len_max == 0 || max_clicks < 1) {
    throw Error("synthetic query settings are invalid");
  }
}

namespace {

using Rng = std::mt19937_64;

struct WordPools {
  std::vector<std::string> product, attribute, boilerplate, spam;
};

WordPools make_pools(const SyntheticSpec& spec) {
  static constexpr std::string_view kOnsets = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  Rng rng(0x5eedf00dULL);
  std::uniform_int_distribution<std::size_t> onset(0, kOnsets.size() - 1);
  std::uniform_int_distribution<std::size_t> vowel(0, kVowels.size() - 1);
  std::unordered_set<std::string> used;
  auto fresh = [&] {
    for (;;) {
      std::string w;
      for (int s = 0; s < 3; ++s) {
        w += kOnsets[onset(rng)];
        w += kVowels[vowel(rng)];
      }
      if (used.insert(w).second) return w;
    }
  };
  auto fill = [&](std::size_t n) {
    std::vector<std::string> pool;
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool.push_back(fresh());
    return pool;
  };
  WordPools p;
  p.product = fill(spec.product_vocab);
  p.attribute = fill(spec.attribute_vocab);
  p.boilerplate = fill(spec.boilerplate_vocab);
  p.spam = fill(spec.spam_vocab);
  return p;
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

const std::string& pick(Rng& rng, const std::vector<std::string>& pool) {
  return pool[uniform(rng, 0, pool.size() - 1)];
}

std::vector<std::size_t> sample_positions(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

std::string render(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) {
    if (!s.empty()) s += ' ';
    s += t;
  }
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

std::vector<RawSku> generate_synthetic_corpus(std::uint64_t seed, std::size_t num_docs,
                                              const SyntheticSpec& spec) {
  spec.validate();
  if (num_docs == 0) throw Error("num_docs must be positive");
  const WordPools pools = make_pools(spec);
  Rng rng(seed);
  std::vector<RawSku> out;
  out.reserve(num_docs);

  const std::size_t n = spec.sentences_per_doc;
  for (std::size_t d = 0; d < num_docs; ++d) {
    RawSku sku;
    char id[64];
    std::snprintf(id, sizeof id, "syn-%llu-%06zu", static_cast<unsigned long long>(seed), d);
    sku.sku_id = id;

    std::vector<std::string> title;
    for (auto i : sample_positions(rng, pools.product.size(), spec.title_len)) {
      title.push_back(pools.product[i]);
    }
    std::shuffle(title.begin(), title.end(), rng);
    sku.title = render(title);

    const auto planted = sample_positions(rng, n, spec.planted_per_doc);
    std::vector<bool> is_planted(n, false);
    for (auto p : planted) is_planted[p] = true;
    std::vector<std::size_t> distractors;
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_planted[i]) distractors.push_back(i);
    }
    std::vector<bool> stuffed(n, false);
    {
      const std::size_t count =
          uniform(rng, 0, std::min(spec.stuffed_max_per_doc, distractors.size()));
      std::shuffle(distractors.begin(), distractors.end(), rng);
      for (std::size_t i = 0; i < count; ++i) stuffed[distractors[i]] = true;
    }

    std::vector<std::vector<std::string>> sentences(n);
    std::vector<std::string> attribute_words;
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sentences[i];
      if (is_planted[i]) {
        const std::size_t len = uniform(rng, spec.planted_len_min, spec.planted_len_max);
        const std::size_t chunk = uniform(rng, 1, 2);
        const std::size_t from = uniform(rng, 0, title.size() - chunk);
        for (std::size_t j = 0; j < len - chunk; ++j) {
          s.push_back(pick(rng, pools.attribute));
          attribute_words.push_back(s.back());
        }
        const std::size_t at = uniform(rng, 0, s.size());
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(at),
                 title.begin() + static_cast<std::ptrdiff_t>(from),
                 title.begin() + static_cast<std::ptrdiff_t>(from + chunk));
      } else {
        const std::size_t len = uniform(rng, spec.distractor_len_min, spec.distractor_len_max);
        const auto& pool = stuffed[i] ? pools.spam : pools.boilerplate;
        for (std::size_t j = 0; j < len; ++j) s.push_back(pick(rng, pool));
        const auto& keyword = title[uniform(rng, 0, title.size() - 1)];
        if (stuffed[i]) {
          for (auto p : sample_positions(rng, len, spec.stuff_repeats)) s[p] = keyword;
        } else if (std::bernoulli_distribution(spec.mention_prob)(rng)) {
          s[uniform(rng, 0, len - 1)] = keyword;
        }
      }
    }

    const std::size_t in_description = (n + 1) / 2;
    for (std::size_t i = 0; i < n; ++i) {
      if (i < in_description) {
        if (!sku.description.empty()) sku.description += ' ';
        sku.description += render(sentences[i]) + '.';
      } else {
        sku.bullets.push_back(render(sentences[i]));
      }
    }
    sku.relevance_labels = is_planted;

    if (!attribute_words.empty()) {
      const std::size_t nq = uniform(rng, spec.queries_min, spec.queries_max);
      for (std::size_t q = 0; q < nq; ++q) {
        const std::size_t len = uniform(rng, 1, spec.query_len_max);
        std::vector<std::string> words;
        for (std::size_t j = 0; j < len; ++j) words.push_back(pick(rng, attribute_words));
        Query query;
        for (const auto& w : words) query.text += (query.text.empty() ? "" : " ") + w;
        query.clicks = static_cast<std::int64_t>(
            uniform(rng, 1, static_cast<std::size_t>(spec.max_clicks)));
        sku.queries.push_back(std::move(query));
      }
    }
    out.push_back(std::move(sku));
  }
  return out;
}

}  // namespace skurank
