#include "skurank/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "skurank/error.hpp"

namespace skurank {

namespace {

constexpr std::string_view kMagic = "SKURANK-CHECKPOINT";
constexpr int kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is written in host order and assumes little-endian");

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string join_widths(const std::vector<std::size_t>& widths) {
  std::string s;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(widths[i]);
  }
  return s;
}

std::vector<std::size_t> parse_widths(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stoul(part));
  return out;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const TrainedModel& model) {
  const auto& p = model.params;
  const auto& c = p.config;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint: " + path.string());

  const auto tensors = p.tensors();
  out << kMagic << ' ' << kVersion << '\n'
      << "vocab_hash " << hex(model.vocab_hash) << '\n'
      << "vocab_size " << c.vocab_size << '\n'
      << "embed_dim " << c.embed_dim << '\n'
      << "filters_per_width " << c.filters_per_width << '\n'
      << "kernel_widths " << join_widths(c.kernel_widths) << '\n'
      << "doc_hidden " << c.doc_hidden << '\n'
      << "ext_hidden " << c.ext_hidden << '\n'
      << "max_sentence_len " << c.max_sentence_len << '\n'
      << "hard_feedback " << (c.hard_feedback ? 1 : 0) << '\n'
      << "tensors " << tensors.size() << '\n';
  for (const auto& t : tensors) out << t.name << ' ' << t.value.rows() << ' ' << t.value.cols() << '\n';
  out << "end\n";
  for (const auto& t : tensors) {
    out.write(reinterpret_cast<const char*>(t.value.data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(t.value.size())));
  }
  if (!out) throw Error("write failed: " + path.string());
}

TrainedModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read checkpoint: " + path.string());
  auto fail = [&](const std::string& what) -> Error {
    return Error(path.string() + ": " + what);
  };

  std::string line;
  std::getline(in, line);
  {
    std::istringstream ls(line);
    std::string magic;
    int version = 0;
    ls >> magic >> version;
    if (magic != kMagic) throw fail("not a checkpoint file");
    if (version != kVersion) throw fail("unsupported checkpoint version " + std::to_string(version));
  }

  TrainedModel model;
  NetworkConfig cfg;
  std::size_t tensor_count = 0;
  std::vector<std::tuple<std::string, Eigen::Index, Eigen::Index>> shapes;
  while (std::getline(in, line) && line != "end") {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (tensor_count > 0 && shapes.size() < tensor_count) {
      Eigen::Index rows = 0, cols = 0;
      ls >> rows >> cols;
      shapes.emplace_back(key, rows, cols);
      continue;
    }
    std::string value;
    ls >> value;
    if (key == "vocab_hash") model.vocab_hash = std::stoull(value, nullptr, 16);
    else if (key == "vocab_size") cfg.vocab_size = std::stoul(value);
    else if (key == "embed_dim") cfg.embed_dim = std::stoul(value);
    else if (key == "filters_per_width") cfg.filters_per_width = std::stoul(value);
    else if (key == "kernel_widths") cfg.kernel_widths = parse_widths(value);
    else if (key == "doc_hidden") cfg.doc_hidden = std::stoul(value);
    else if (key == "ext_hidden") cfg.ext_hidden = std::stoul(value);
    else if (key == "max_sentence_len") cfg.max_sentence_len = std::stoul(value);
    else if (key == "hard_feedback") cfg.hard_feedback = value == "1";
    else if (key == "tensors") tensor_count = std::stoul(value);
    else throw fail("unknown header key '" + key + "'");
  }
  if (line != "end") throw fail("truncated header");

  model.params = ModelParams<double>::zeros(cfg);
  auto tensors = model.params.tensors();
  if (tensors.size() != shapes.size()) throw fail("tensor count does not match the config");
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const auto& [name, rows, cols] = shapes[i];
    auto& t = tensors[i];
    if (t.name != name || t.value.rows() != rows || t.value.cols() != cols) {
      throw fail("tensor '" + name + "' does not match the declared layout");
    }
    in.read(reinterpret_cast<char*>(t.value.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(t.value.size())));
    if (!in) throw fail("truncated payload in tensor '" + name + "'");
    if (!t.value.allFinite()) throw fail("non-finite values in tensor '" + name + "'");
  }
  return model;
}

void require_vocab_match(const TrainedModel& model, std::uint64_t vocab_hash) {
  if (model.vocab_hash != vocab_hash) {
    throw Error("vocabulary mismatch: model was trained with vocabulary " + hex(model.vocab_hash) +
                " but " + hex(vocab_hash) + " was supplied");
  }
}

}  // namespace skurank
