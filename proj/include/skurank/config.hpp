#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "skurank/baseline.hpp"
#include "skurank/corpus.hpp"
#include "skurank/network.hpp"
#include "skurank/oracle.hpp"
#include "skurank/synthetic.hpp"
#include "skurank/textprep.hpp"
#include "skurank/train.hpp"

namespace skurank {

/// Every tunable of the pipeline. Loaded from a flat `key = value` file;
/// '#' starts a comment, blank lines are ignored and unknown keys are errors.
/// Lists are comma separated. `max_sentence_len` feeds both the tokenizer and
/// the network.
struct Config {
  TextConfig text;
  CorpusConfig corpus;
  ReferenceMode reference_mode = ReferenceMode::kTitleOnly;
  OracleConfig oracle;
  BaselineConfig baseline;
  std::vector<double> sweep_weights{1.0, 1.5, 2.0, 2.5, 3.0};
  NetworkConfig network;
  TrainConfig train;
  std::size_t top_k = 3;
  SyntheticSpec synth;
  std::size_t synth_docs = 2200;

  void set(std::string_view key, std::string_view value);
  std::vector<std::string> keys() const;
  std::string get(std::string_view key) const;

  void validate() const;

  static Config parse(std::istream& in, std::string_view source = "<config>");
  static Config load(const std::filesystem::path& path);
  void write(std::ostream& out) const;
};

}  // namespace skurank
