#include "skurank/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

#include "skurank/error.hpp"

namespace skurank {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw Error("config key " + std::string(key) + ": cannot parse '" + std::string(v) + "'");
  }
  return out;
}

template <class T>
T parse_value(std::string_view key, std::string_view v) {
  if constexpr (std::is_same_v<T, bool>) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error("config key " + std::string(key) + ": expected true or false");
  } else if constexpr (std::is_arithmetic_v<T>) {
    return parse_number<T>(key, v);
  } else {
    using Elem = typename T::value_type;
    T out;
    while (true) {
      const auto comma = v.find(',');
      out.push_back(parse_number<Elem>(key, trim(v.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      v.remove_prefix(comma + 1);
    }
    return out;
  }
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <class T>
std::string format_value(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    return format_number(v);
  } else if constexpr (std::is_arithmetic_v<T>) {
    return std::to_string(v);
  } else {
    std::string out;
    for (const auto& x : v) {
      if (!out.empty()) out += ',';
      out += format_value(x);
    }
    return out;
  }
}

struct Entry {
  std::string_view key;
  std::function<void(Config&, std::string_view)> set;
  std::function<std::string(const Config&)> get;
};

template <class Access>
Entry field(std::string_view key, Access access) {
  using T = std::remove_cvref_t<decltype(access(std::declval<Config&>()))>;
  return {key, [key, access](Config& c, std::string_view v) { access(c) = parse_value<T>(key, v); },
          [access](const Config& c) { return format_value(access(c)); }};
}

#define SKURANK_FIELD(key, expr) field(key, [](auto& c) -> auto& { return c.expr; })

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back({"max_sentence_len",
                 [](Config& c, std::string_view v) {
                   c.text.max_sentence_len = parse_value<std::size_t>("max_sentence_len", v);
                   c.network.max_sentence_len = c.text.max_sentence_len;
                 },
                 [](const Config& c) { return format_value(c.text.max_sentence_len); }});
    t.push_back(SKURANK_FIELD("max_doc_sentences", text.max_doc_sentences));
    t.push_back(SKURANK_FIELD("vocab_max_size", text.vocab_max_size));
    t.push_back(SKURANK_FIELD("vocab_min_freq", text.vocab_min_freq));

    t.push_back({"reference_mode",
                 [](Config& c, std::string_view v) { c.reference_mode = parse_reference_mode(v); },
                 [](const Config& c) { return std::string(to_string(c.reference_mode)); }});
    t.push_back(SKURANK_FIELD("max_queries", corpus.max_queries));
    t.push_back(SKURANK_FIELD("min_query_clicks", corpus.min_query_clicks));

    t.push_back(SKURANK_FIELD("oracle_p", oracle.p));
    t.push_back(SKURANK_FIELD("oracle_m", oracle.m));
    t.push_back(SKURANK_FIELD("oracle_k", oracle.k));

    t.push_back({"baseline_mode",
                 [](Config& c, std::string_view v) { c.baseline.mode = parse_baseline_mode(v); },
                 [](const Config& c) { return std::string(to_string(c.baseline.mode)); }});
    t.push_back(SKURANK_FIELD("title_weight", baseline.title_weight));
    t.push_back(SKURANK_FIELD("sweep_weights", sweep_weights));

    t.push_back(SKURANK_FIELD("embed_dim", network.embed_dim));
    t.push_back(SKURANK_FIELD("filters_per_width", network.filters_per_width));
    t.push_back(SKURANK_FIELD("kernel_widths", network.kernel_widths));
    t.push_back(SKURANK_FIELD("doc_hidden", network.doc_hidden));
    t.push_back(SKURANK_FIELD("ext_hidden", network.ext_hidden));
    t.push_back(SKURANK_FIELD("hard_feedback", network.hard_feedback));

    t.push_back(SKURANK_FIELD("epochs", train.epochs));
    t.push_back(SKURANK_FIELD("warmstart_epochs", train.warmstart_epochs));
    t.push_back(SKURANK_FIELD("batch_size", train.batch_size));
    t.push_back(SKURANK_FIELD("learning_rate", train.learning_rate));
    t.push_back({"optimizer",
                 [](Config& c, std::string_view v) { c.train.optimizer = parse_optimizer(v); },
                 [](const Config& c) { return std::string(to_string(c.train.optimizer)); }});
    t.push_back(SKURANK_FIELD("momentum", train.momentum));
    t.push_back(SKURANK_FIELD("grad_clip", train.grad_clip));
    t.push_back(SKURANK_FIELD("seed", train.seed));
    t.push_back(SKURANK_FIELD("reward_extract_len", train.reward_extract_len));

    t.push_back(SKURANK_FIELD("top_k", top_k));

    t.push_back(SKURANK_FIELD("synth_docs", synth_docs));
    t.push_back(SKURANK_FIELD("synth_sentences_per_doc", synth.sentences_per_doc));
    t.push_back(SKURANK_FIELD("synth_planted_per_doc", synth.planted_per_doc));
    t.push_back(SKURANK_FIELD("synth_title_len", synth.title_len));
    t.push_back(SKURANK_FIELD("synth_product_vocab", synth.product_vocab));
    t.push_back(SKURANK_FIELD("synth_attribute_vocab", synth.attribute_vocab));
    t.push_back(SKURANK_FIELD("synth_boilerplate_vocab", synth.boilerplate_vocab));
    t.push_back(SKURANK_FIELD("synth_spam_vocab", synth.spam_vocab));
    t.push_back(SKURANK_FIELD("synth_planted_len_min", synth.planted_len_min));
    t.push_back(SKURANK_FIELD("synth_planted_len_max", synth.planted_len_max));
    t.push_back(SKURANK_FIELD("synth_distractor_len_min", synth.distractor_len_min));
    t.push_back(SKURANK_FIELD("synth_distractor_len_max", synth.distractor_len_max));
    t.push_back(SKURANK_FIELD("synth_stuffed_max_per_doc", synth.stuffed_max_per_doc));
    t.push_back(SKURANK_FIELD("synth_stuff_repeats", synth.stuff_repeats));
    t.push_back(SKURANK_FIELD("synth_mention_prob", synth.mention_prob));
    t.push_back(SKURANK_FIELD("synth_queries_min", synth.queries_min));
    t.push_back(SKURANK_FIELD("synth_queries_max", synth.queries_max));
    t.push_back(SKURANK_FIELD("synth_query_len_max", synth.query_len_max));
    t.push_back(SKURANK_FIELD("synth_max_clicks", synth.max_clicks));
    return t;
  }();
  return table;
}

#undef SKURANK_FIELD

const Entry& find_entry(std::string_view key) {
  for (const auto& e : entries()) {
    if (e.key == key) return e;
  }
  throw Error("unknown config key: " + std::string(key));
}

}  // namespace

void Config::set(std::string_view key, std::string_view value) {
  find_entry(key).set(*this, trim(value));
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& e : entries()) out.emplace_back(e.key);
  return out;
}

std::string Config::get(std::string_view key) const { return find_entry(key).get(*this); }

void Config::validate() const {
  if (text.max_sentence_len == 0 || text.max_doc_sentences == 0) {
    throw Error("max_sentence_len and max_doc_sentences must be positive");
  }
  if (text.max_sentence_len != network.max_sentence_len) {
    throw Error("text and network max_sentence_len disagree");
  }
  if (top_k == 0) throw Error("top_k must be positive");
  if (sweep_weights.empty()) throw Error("sweep_weights must not be empty");
  oracle.validate();
  baseline.validate();
  train.validate();
  synth.validate();
  for (double w : sweep_weights) BaselineConfig{BaselineMode::kWeighted, w}.validate();
}

Config Config::parse(std::istream& in, std::string_view source) {
  Config cfg;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    const auto where = std::string(source) + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string_view::npos) throw Error(where + "expected key = value");
    try {
      cfg.set(trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse(in, path.string());
}

void Config::write(std::ostream& out) const {
  for (const auto& e : entries()) out << e.key << " = " << e.get(*this) << '\n';
}

}  // namespace skurank
