#include "skurank/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "skurank/error.hpp"

namespace skurank {

void NetworkConfig::validate() const {
  if (vocab_size < 2) throw Error("network vocab_size must cover the reserved ids");
  if (embed_dim == 0 || filters_per_width == 0 || doc_hidden == 0 || ext_hidden == 0) {
    throw Error("network dimensions must be positive");
  }
  if (kernel_widths.empty()) throw Error("network needs at least one kernel width");
  for (auto w : kernel_widths) {
    if (w == 0 || w > max_sentence_len) {
      throw Error("kernel width " + std::to_string(w) + " outside [1, max_sentence_len]");
    }
  }
}

namespace {

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

template <typename Scalar>
LstmStep<Scalar> lstm_step(const MatrixX<Scalar>& weights, const VectorX<Scalar>& bias,
                           VectorX<Scalar> input, const VectorX<Scalar>& cell_prev) {
  const Index h = cell_prev.size();
  LstmStep<Scalar> s;
  s.gates.noalias() = weights * input;
  s.gates += bias;
  for (Index j = 0; j < 3 * h; ++j) s.gates(j) = sigmoid(s.gates(j));
  s.gates.segment(3 * h, h) = s.gates.segment(3 * h, h).array().tanh();
  s.cell = s.gates.segment(h, h).cwiseProduct(cell_prev) +
           s.gates.segment(0, h).cwiseProduct(s.gates.segment(3 * h, h));
  s.tanh_cell = s.cell.array().tanh();
  s.hidden = s.gates.segment(2 * h, h).cwiseProduct(s.tanh_cell);
  s.input = std::move(input);
  s.cell_prev = cell_prev;
  return s;
}

// Accumulates weight/bias gradients and returns d(input) and d(cell_prev).
template <typename Scalar>
std::pair<VectorX<Scalar>, VectorX<Scalar>> lstm_step_backward(
    const MatrixX<Scalar>& weights, const LstmStep<Scalar>& s, const VectorX<Scalar>& dhidden,
    const VectorX<Scalar>& dcell, MatrixX<Scalar>& dweights, VectorX<Scalar>& dbias) {
  const Index h = s.cell.size();
  const auto i = s.gates.segment(0, h).array();
  const auto f = s.gates.segment(h, h).array();
  const auto o = s.gates.segment(2 * h, h).array();
  const auto g = s.gates.segment(3 * h, h).array();
  const auto tc = s.tanh_cell.array();

  const VectorX<Scalar> dc_total =
      dcell.array() + dhidden.array() * o * (Scalar(1) - tc.square());
  VectorX<Scalar> dgates(4 * h);
  dgates.segment(0, h) = dc_total.array() * g * i * (Scalar(1) - i);
  dgates.segment(h, h) = dc_total.array() * s.cell_prev.array() * f * (Scalar(1) - f);
  dgates.segment(2 * h, h) = dhidden.array() * tc * o * (Scalar(1) - o);
  dgates.segment(3 * h, h) = dc_total.array() * i * (Scalar(1) - g.square());

  dweights.noalias() += dgates * s.input.transpose();
  dbias += dgates;
  VectorX<Scalar> dinput = weights.transpose() * dgates;
  VectorX<Scalar> dcell_prev = dc_total.cwiseProduct(s.gates.segment(h, h));
  return {std::move(dinput), std::move(dcell_prev)};
}

template <typename Scalar>
VectorX<Scalar> softmax_row(const Eigen::Matrix<Scalar, 1, 2>& logits) {
  const Scalar mx = logits.maxCoeff();
  VectorX<Scalar> e = (logits.array() - mx).exp().transpose();
  return e / e.sum();
}

template <typename Scalar>
Scalar feedback_weight(const NetworkConfig& cfg, Scalar p_include) {
  if (cfg.hard_feedback) return p_include > Scalar(0.5) ? Scalar(1) : Scalar(0);
  return p_include;
}

template <typename Scalar>
void check_finite(ModelParams<Scalar>& grads) {
  for (const auto& t : grads.tensors()) {
    if (!t.value.allFinite()) throw Error("non-finite gradient in parameter '" + t.name + "'");
  }
}

}  // namespace

template <typename Scalar>
ModelParams<Scalar> ModelParams<Scalar>::zeros(const NetworkConfig& config) {
  config.validate();
  ModelParams p;
  p.config = config;
  const Index d = idx(config.embed_dim);
  const Index sdim = idx(config.sentence_dim());
  const Index hd = idx(config.doc_hidden);
  const Index he = idx(config.ext_hidden);
  p.embeddings = MatrixX<Scalar>::Zero(idx(config.vocab_size), d);
  for (auto w : config.kernel_widths) {
    p.conv_weights.push_back(MatrixX<Scalar>::Zero(idx(config.filters_per_width), idx(w) * d));
    p.conv_bias.push_back(VectorX<Scalar>::Zero(idx(config.filters_per_width)));
  }
  p.doc_weights = MatrixX<Scalar>::Zero(4 * hd, sdim + hd);
  p.doc_bias = VectorX<Scalar>::Zero(4 * hd);
  p.ext_weights = MatrixX<Scalar>::Zero(4 * he, 2 * sdim + he);
  p.ext_bias = VectorX<Scalar>::Zero(4 * he);
  if (hd != he) {
    p.init_hidden = MatrixX<Scalar>::Zero(he, hd);
    p.init_cell = MatrixX<Scalar>::Zero(he, hd);
  }
  p.out_weights = MatrixX<Scalar>::Zero(2, he);
  p.out_bias = VectorX<Scalar>::Zero(2);
  return p;
}

namespace {

template <typename Scalar, typename Self, typename Out>
void collect_tensors(Self& p, Out& out) {
  auto add = [&](std::string name, auto& m) {
    out.push_back({std::move(name), {m.data(), m.rows(), m.cols()}});
  };
  add("embeddings", p.embeddings);
  for (std::size_t w = 0; w < p.conv_weights.size(); ++w) {
    const auto width = std::to_string(p.config.kernel_widths[w]);
    add("conv_weights_w" + width, p.conv_weights[w]);
    add("conv_bias_w" + width, p.conv_bias[w]);
  }
  add("doc_weights", p.doc_weights);
  add("doc_bias", p.doc_bias);
  add("ext_weights", p.ext_weights);
  add("ext_bias", p.ext_bias);
  if (p.init_hidden.size() != 0) {
    add("init_hidden", p.init_hidden);
    add("init_cell", p.init_cell);
  }
  add("out_weights", p.out_weights);
  add("out_bias", p.out_bias);
}

}  // namespace

template <typename Scalar>
std::vector<Tensor<Scalar>> ModelParams<Scalar>::tensors() {
  std::vector<Tensor<Scalar>> out;
  collect_tensors<Scalar>(*this, out);
  return out;
}

template <typename Scalar>
std::vector<ConstTensor<Scalar>> ModelParams<Scalar>::tensors() const {
  std::vector<ConstTensor<Scalar>> out;
  collect_tensors<Scalar>(*this, out);
  return out;
}

template <typename Scalar>
void ModelParams<Scalar>::set_zero() {
  for (auto& t : tensors()) t.value.setZero();
}

template <typename Scalar>
ModelParams<Scalar> init_params(const NetworkConfig& config, std::uint64_t seed) {
  auto p = ModelParams<Scalar>::zeros(config);
  std::mt19937_64 rng(seed);
  auto fill = [&](auto& m, double bound) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Index c = 0; c < m.cols(); ++c) {
      for (Index r = 0; r < m.rows(); ++r) m(r, c) = static_cast<Scalar>(dist(rng));
    }
  };
  fill(p.embeddings, 0.05);
  p.embeddings.row(Vocabulary::kPadId).setZero();
  for (std::size_t w = 0; w < p.conv_weights.size(); ++w) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(p.conv_weights[w].cols()));
    fill(p.conv_weights[w], bound);
    fill(p.conv_bias[w], bound);
  }
  const double doc_bound = 1.0 / std::sqrt(static_cast<double>(config.doc_hidden));
  const double ext_bound = 1.0 / std::sqrt(static_cast<double>(config.ext_hidden));
  fill(p.doc_weights, doc_bound);
  fill(p.doc_bias, doc_bound);
  fill(p.ext_weights, ext_bound);
  fill(p.ext_bias, ext_bound);
  p.doc_bias.segment(idx(config.doc_hidden), idx(config.doc_hidden)).setOnes();
  p.ext_bias.segment(idx(config.ext_hidden), idx(config.ext_hidden)).setOnes();
  if (p.projects_initial_state()) {
    fill(p.init_hidden, doc_bound);
    fill(p.init_cell, doc_bound);
  }
  fill(p.out_weights, ext_bound);
  fill(p.out_bias, ext_bound);
  return p;
}

template <typename Scalar>
VectorX<Scalar> encode_sentence(const ModelParams<Scalar>& params, const EncodedSentence& sentence,
                                SentenceCache<Scalar>* cache) {
  const auto& cfg = params.config;
  const std::size_t len = sentence.true_len;
  if (len == 0 || len > sentence.ids.size()) throw Error("encoded sentence has invalid true_len");
  const Index d = idx(cfg.embed_dim);
  const Index f = idx(cfg.filters_per_width);

  VectorX<Scalar> out(idx(cfg.sentence_dim()));
  if (cache) {
    cache->ids.assign(sentence.ids.begin(), sentence.ids.begin() + idx(len));
    cache->true_len = len;
    cache->widths.clear();
  }
  for (std::size_t w = 0; w < cfg.kernel_widths.size(); ++w) {
    const std::size_t width = cfg.kernel_widths[w];
    const std::size_t steps = feature_map_length(len, width);
    MatrixX<Scalar> windows = MatrixX<Scalar>::Zero(idx(width) * d, idx(steps));
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t j = 0; j < width; ++j) {
        const std::size_t pos = t + j;
        if (pos >= len) continue;  // padding embedding is zero
        const auto id = sentence.ids[pos];
        if (id < 0 || static_cast<std::size_t>(id) >= cfg.vocab_size) {
          throw Error("token id " + std::to_string(id) + " outside the model vocabulary");
        }
        windows.block(idx(j) * d, idx(t), d, 1) = params.embeddings.row(id).transpose();
      }
    }
    MatrixX<Scalar> z = params.conv_weights[w] * windows;
    z.colwise() += params.conv_bias[w];

    ConvCache<Scalar> cc;
    cc.argmax.resize(static_cast<std::size_t>(f));
    cc.pooled.resize(f);
    for (Index r = 0; r < f; ++r) {
      Index best = 0;
      z.row(r).maxCoeff(&best);
      cc.argmax[static_cast<std::size_t>(r)] = best;
      cc.pooled(r) = std::tanh(z(r, best));
    }
    out.segment(idx(w) * f, f) = cc.pooled;
    if (cache) {
      cc.windows = std::move(windows);
      cache->widths.push_back(std::move(cc));
    }
  }
  return out;
}

template <typename Scalar>
DocumentState<Scalar> encode_document(const ModelParams<Scalar>& params,
                                      const MatrixX<Scalar>& sentence_embeddings,
                                      std::vector<LstmStep<Scalar>>* steps) {
  const Index n = sentence_embeddings.cols();
  if (n == 0) throw Error("encode_document needs at least one sentence");
  const Index sdim = sentence_embeddings.rows();
  const Index h = idx(params.config.doc_hidden);
  VectorX<Scalar> hidden = VectorX<Scalar>::Zero(h);
  VectorX<Scalar> cell = VectorX<Scalar>::Zero(h);
  if (steps) steps->clear();
  for (Index t = 0; t < n; ++t) {
    VectorX<Scalar> input(sdim + h);
    input << sentence_embeddings.col(n - 1 - t), hidden;
    auto step = lstm_step(params.doc_weights, params.doc_bias, std::move(input), cell);
    hidden = step.hidden;
    cell = step.cell;
    if (steps) steps->push_back(std::move(step));
  }
  return {std::move(hidden), std::move(cell)};
}

template <typename Scalar>
ScoredDocument<Scalar> extract_scores(const ModelParams<Scalar>& params,
                                      const MatrixX<Scalar>& sentence_embeddings,
                                      const DocumentState<Scalar>& document,
                                      std::vector<LstmStep<Scalar>>* steps,
                                      MatrixX<Scalar>* feedback) {
  const Index n = sentence_embeddings.cols();
  const Index sdim = sentence_embeddings.rows();
  const Index h = idx(params.config.ext_hidden);

  VectorX<Scalar> hidden, cell;
  if (params.projects_initial_state()) {
    hidden = params.init_hidden * document.hidden;
    cell = params.init_cell * document.cell;
  } else {
    hidden = document.hidden;
    cell = document.cell;
  }

  ScoredDocument<Scalar> scored;
  scored.logits.resize(n, 2);
  scored.probs.resize(n, 2);
  MatrixX<Scalar> fb = MatrixX<Scalar>::Zero(sdim, n);
  if (steps) steps->clear();
  for (Index i = 0; i < n; ++i) {
    if (i > 0) {
      fb.col(i) = feedback_weight(params.config, scored.probs(i - 1, 1)) *
                  sentence_embeddings.col(i - 1);
    }
    VectorX<Scalar> input(2 * sdim + h);
    input << sentence_embeddings.col(i), fb.col(i), hidden;
    auto step = lstm_step(params.ext_weights, params.ext_bias, std::move(input), cell);
    hidden = step.hidden;
    cell = step.cell;
    const Eigen::Matrix<Scalar, 1, 2> logits =
        (params.out_weights * hidden + params.out_bias).transpose();
    scored.logits.row(i) = logits;
    scored.probs.row(i) = softmax_row<Scalar>(logits).transpose();
    if (steps) steps->push_back(std::move(step));
  }
  if (feedback) *feedback = std::move(fb);
  return scored;
}

template <typename Scalar>
ForwardPass<Scalar> forward(const ModelParams<Scalar>& params, const EncodedDocument& doc) {
  const std::size_t n = doc.sentences.size();
  if (n == 0) throw Error("document " + doc.sku_id + " has no sentences");
  ForwardPass<Scalar> pass;
  pass.sentences.resize(n);
  pass.sentence_embeddings.resize(idx(params.config.sentence_dim()), idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    pass.sentence_embeddings.col(idx(i)) =
        encode_sentence(params, doc.sentences[i], &pass.sentences[i]);
  }
  pass.document = encode_document(params, pass.sentence_embeddings, &pass.doc_steps);
  pass.scored = extract_scores(params, pass.sentence_embeddings, pass.document, &pass.ext_steps,
                               &pass.feedback);
  return pass;
}

template <typename Scalar>
ScoredDocument<Scalar> score_document(const ModelParams<Scalar>& params, const EncodedDocument& doc) {
  const std::size_t n = doc.sentences.size();
  if (n == 0) throw Error("document " + doc.sku_id + " has no sentences");
  MatrixX<Scalar> embeddings(idx(params.config.sentence_dim()), idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    embeddings.col(idx(i)) = encode_sentence(params, doc.sentences[i]);
  }
  const auto state = encode_document(params, embeddings);
  return extract_scores(params, embeddings, state);
}

template <typename Scalar>
void backward(const ModelParams<Scalar>& params, const ForwardPass<Scalar>& pass,
              const MatrixX<Scalar>& dlogits, ModelParams<Scalar>& grads) {
  const auto& cfg = params.config;
  const Index n = pass.sentence_embeddings.cols();
  const Index sdim = pass.sentence_embeddings.rows();
  const Index he = idx(cfg.ext_hidden);
  const Index hd = idx(cfg.doc_hidden);
  if (dlogits.rows() != n || dlogits.cols() != 2) throw Error("dlogits must be n x 2");

  MatrixX<Scalar> dlog = dlogits;
  MatrixX<Scalar> dsent = MatrixX<Scalar>::Zero(sdim, n);

  // Extractor, last step first. Feedback into step i carries gradient back to
  // step i-1's probability and sentence embedding.
  VectorX<Scalar> dh_next = VectorX<Scalar>::Zero(he);
  VectorX<Scalar> dc_next = VectorX<Scalar>::Zero(he);
  for (Index i = n - 1; i >= 0; --i) {
    const auto& step = pass.ext_steps[static_cast<std::size_t>(i)];
    const VectorX<Scalar> dl = dlog.row(i).transpose();
    grads.out_weights.noalias() += dl * step.hidden.transpose();
    grads.out_bias += dl;
    VectorX<Scalar> dh = params.out_weights.transpose() * dl + dh_next;
    auto [dinput, dcell_prev] =
        lstm_step_backward(params.ext_weights, step, dh, dc_next, grads.ext_weights, grads.ext_bias);
    dsent.col(i) += dinput.segment(0, sdim);
    if (i > 0) {
      const VectorX<Scalar> dfb = dinput.segment(sdim, sdim);
      const Scalar p = pass.scored.probs(i - 1, 1);
      dsent.col(i - 1) += feedback_weight(cfg, p) * dfb;
      if (!cfg.hard_feedback) {
        const Scalar dp = dfb.dot(pass.sentence_embeddings.col(i - 1));
        // d p1 / d z = p1 (e_1 - p)
        dlog(i - 1, 0) += dp * p * (-pass.scored.probs(i - 1, 0));
        dlog(i - 1, 1) += dp * p * (Scalar(1) - p);
      }
    }
    dh_next = dinput.segment(2 * sdim, he);
    dc_next = std::move(dcell_prev);
  }

  VectorX<Scalar> ddoc_h, ddoc_c;
  if (params.projects_initial_state()) {
    grads.init_hidden.noalias() += dh_next * pass.document.hidden.transpose();
    grads.init_cell.noalias() += dc_next * pass.document.cell.transpose();
    ddoc_h = params.init_hidden.transpose() * dh_next;
    ddoc_c = params.init_cell.transpose() * dc_next;
  } else {
    ddoc_h = dh_next;
    ddoc_c = dc_next;
  }

  // Document encoder: doc_steps[t] consumed sentence n-1-t.
  for (Index t = n - 1; t >= 0; --t) {
    const auto& step = pass.doc_steps[static_cast<std::size_t>(t)];
    auto [dinput, dcell_prev] =
        lstm_step_backward(params.doc_weights, step, ddoc_h, ddoc_c, grads.doc_weights, grads.doc_bias);
    dsent.col(n - 1 - t) += dinput.segment(0, sdim);
    ddoc_h = dinput.segment(sdim, hd);
    ddoc_c = std::move(dcell_prev);
  }

  // Convolutions: only the argmax window of each filter receives gradient.
  const Index d = idx(cfg.embed_dim);
  const Index nf = idx(cfg.filters_per_width);
  for (Index i = 0; i < n; ++i) {
    const auto& sc = pass.sentences[static_cast<std::size_t>(i)];
    for (std::size_t w = 0; w < cfg.kernel_widths.size(); ++w) {
      const auto width = idx(cfg.kernel_widths[w]);
      const auto& cc = sc.widths[w];
      for (Index r = 0; r < nf; ++r) {
        const Scalar pooled = cc.pooled(r);
        const Scalar g = dsent(idx(w) * nf + r, i) * (Scalar(1) - pooled * pooled);
        if (g == Scalar(0)) continue;
        const Index t = cc.argmax[static_cast<std::size_t>(r)];
        grads.conv_weights[w].row(r).noalias() += g * cc.windows.col(t).transpose();
        grads.conv_bias[w](r) += g;
        for (Index j = 0; j < width; ++j) {
          const auto pos = static_cast<std::size_t>(t + j);
          if (pos >= sc.true_len) continue;
          const auto id = sc.ids[pos];
          if (id == Vocabulary::kPadId) continue;
          grads.embeddings.row(id).noalias() +=
              g * params.conv_weights[w].row(r).segment(j * d, d);
        }
      }
    }
  }
  check_finite(grads);
}

template <typename Scalar>
ModelParams<Scalar> backward(const ModelParams<Scalar>& params, const ForwardPass<Scalar>& pass,
                             const MatrixX<Scalar>& dlogits) {
  auto grads = ModelParams<Scalar>::zeros(params.config);
  backward(params, pass, dlogits, grads);
  return grads;
}

#define SKURANK_INSTANTIATE_NETWORK(Scalar)                                                      \
  template struct ModelParams<Scalar>;                                                           \
  template ModelParams<Scalar> init_params<Scalar>(const NetworkConfig&, std::uint64_t);         \
  template VectorX<Scalar> encode_sentence<Scalar>(const ModelParams<Scalar>&,                   \
                                                   const EncodedSentence&, SentenceCache<Scalar>*); \
  template DocumentState<Scalar> encode_document<Scalar>(                                        \
      const ModelParams<Scalar>&, const MatrixX<Scalar>&, std::vector<LstmStep<Scalar>>*);       \
  template ScoredDocument<Scalar> extract_scores<Scalar>(                                        \
      const ModelParams<Scalar>&, const MatrixX<Scalar>&, const DocumentState<Scalar>&,          \
      std::vector<LstmStep<Scalar>>*, MatrixX<Scalar>*);                                         \
  template ForwardPass<Scalar> forward<Scalar>(const ModelParams<Scalar>&, const EncodedDocument&); \
  template ScoredDocument<Scalar> score_document<Scalar>(const ModelParams<Scalar>&,             \
                                                         const EncodedDocument&);                \
  template void backward<Scalar>(const ModelParams<Scalar>&, const ForwardPass<Scalar>&,         \
                                 const MatrixX<Scalar>&, ModelParams<Scalar>&);                  \
  template ModelParams<Scalar> backward<Scalar>(const ModelParams<Scalar>&,                      \
                                                const ForwardPass<Scalar>&, const MatrixX<Scalar>&);

SKURANK_INSTANTIATE_NETWORK(float)
SKURANK_INSTANTIATE_NETWORK(double)

#undef SKURANK_INSTANTIATE_NETWORK

}  // namespace skurank
