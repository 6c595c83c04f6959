#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "skurank/textprep.hpp"

namespace skurank {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct NetworkConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 50;
  std::size_t filters_per_width = 50;
  std::vector<std::size_t> kernel_widths{2, 4};
  std::size_t doc_hidden = 128;
  std::size_t ext_hidden = 128;
  std::size_t max_sentence_len = 50;
  // Feed back 1[p > 0.5] * s_{i-1} instead of p * s_{i-1} to the extractor.
  bool hard_feedback = false;

  std::size_t sentence_dim() const { return filters_per_width * kernel_widths.size(); }
  void validate() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Length of the convolution feature map of a width-`width` filter over a
/// sentence of `true_len` tokens. Sentences shorter than the filter are padded
/// up to it, giving a single position.
constexpr std::size_t feature_map_length(std::size_t true_len, std::size_t width) {
  return true_len >= width ? true_len - width + 1 : 1;
}

template <typename Scalar>
struct Tensor {
  std::string name;
  Eigen::Map<MatrixX<Scalar>> value;
};

template <typename Scalar>
struct ConstTensor {
  std::string name;
  Eigen::Map<const MatrixX<Scalar>> value;
};

/// All trainable tensors. LSTM gate blocks are stacked in the order
/// input, forget, output, candidate.
template <typename Scalar>
struct ModelParams {
  NetworkConfig config;
  MatrixX<Scalar> embeddings;                 // vocab_size x embed_dim, pad row fixed at 0
  std::vector<MatrixX<Scalar>> conv_weights;  // per width: filters x (width * embed_dim)
  std::vector<VectorX<Scalar>> conv_bias;
  MatrixX<Scalar> doc_weights;  // 4 doc_hidden x (sentence_dim + doc_hidden)
  VectorX<Scalar> doc_bias;
  MatrixX<Scalar> ext_weights;  // 4 ext_hidden x (2 sentence_dim + ext_hidden)
  VectorX<Scalar> ext_bias;
  MatrixX<Scalar> init_hidden;  // ext_hidden x doc_hidden, empty when the sizes agree
  MatrixX<Scalar> init_cell;
  MatrixX<Scalar> out_weights;  // 2 x ext_hidden
  VectorX<Scalar> out_bias;

  static ModelParams zeros(const NetworkConfig& config);

  /// Tensors in their declared (checkpoint) order.
  std::vector<Tensor<Scalar>> tensors();
  std::vector<ConstTensor<Scalar>> tensors() const;

  void set_zero();
  bool projects_initial_state() const { return init_hidden.size() != 0; }

  template <typename Other>
  ModelParams<Other> cast() const;
};

/// Uniform initialization: embeddings in [-0.05, 0.05], every other weight in
/// [-1/sqrt(fan), 1/sqrt(fan)], forget-gate biases at 1.
template <typename Scalar>
ModelParams<Scalar> init_params(const NetworkConfig& config, std::uint64_t seed);

template <typename Scalar>
struct ConvCache {
  MatrixX<Scalar> windows;            // (width * embed_dim) x feature_map_length
  VectorX<Scalar> pooled;             // tanh of the per-filter maximum
  std::vector<Eigen::Index> argmax;   // position of the maximum per filter
};

template <typename Scalar>
struct SentenceCache {
  std::vector<std::int32_t> ids;  // first max(true_len, max width) ids, pads beyond true_len
  std::size_t true_len = 0;
  std::vector<ConvCache<Scalar>> widths;
};

template <typename Scalar>
struct LstmStep {
  VectorX<Scalar> input;  // [x; h_prev]
  VectorX<Scalar> gates;  // activated i, f, o, g
  VectorX<Scalar> cell_prev;
  VectorX<Scalar> cell;
  VectorX<Scalar> tanh_cell;
  VectorX<Scalar> hidden;
};

template <typename Scalar>
struct DocumentState {
  VectorX<Scalar> hidden;  // the document representation
  VectorX<Scalar> cell;
};

template <typename Scalar>
struct ScoredDocument {
  MatrixX<Scalar> logits;  // n x 2, column 1 is "include"
  MatrixX<Scalar> probs;   // row-wise softmax of logits

  VectorX<Scalar> scores() const { return probs.col(1); }
  std::size_t size() const { return static_cast<std::size_t>(logits.rows()); }
};

template <typename Scalar>
struct ForwardPass {
  std::vector<SentenceCache<Scalar>> sentences;
  MatrixX<Scalar> sentence_embeddings;      // sentence_dim x n
  std::vector<LstmStep<Scalar>> doc_steps;  // doc_steps[t] consumes sentence n-1-t
  DocumentState<Scalar> document;
  std::vector<LstmStep<Scalar>> ext_steps;
  MatrixX<Scalar> feedback;  // sentence_dim x n, extractor feedback input per step
  ScoredDocument<Scalar> scored;
};

/// Max-over-time pooled tanh convolution features, one block per width.
template <typename Scalar>
VectorX<Scalar> encode_sentence(const ModelParams<Scalar>& params, const EncodedSentence& sentence,
                                SentenceCache<Scalar>* cache = nullptr);

/// LSTM over the sentence embeddings (columns) in reverse order from a zero
/// state.
template <typename Scalar>
DocumentState<Scalar> encode_document(const ModelParams<Scalar>& params,
                                      const MatrixX<Scalar>& sentence_embeddings,
                                      std::vector<LstmStep<Scalar>>* steps = nullptr);

/// Sequential labeller initialized from the document state. Step i sees
/// [s_i ; p_{i-1} s_{i-1}] and emits two logits.
template <typename Scalar>
ScoredDocument<Scalar> extract_scores(const ModelParams<Scalar>& params,
                                      const MatrixX<Scalar>& sentence_embeddings,
                                      const DocumentState<Scalar>& document,
                                      std::vector<LstmStep<Scalar>>* steps = nullptr,
                                      MatrixX<Scalar>* feedback = nullptr);

template <typename Scalar>
ForwardPass<Scalar> forward(const ModelParams<Scalar>& params, const EncodedDocument& doc);

/// Inference-only scores p(y_i = 1).
template <typename Scalar>
ScoredDocument<Scalar> score_document(const ModelParams<Scalar>& params, const EncodedDocument& doc);

/// Adds d(loss)/d(params) into `grads` given d(loss)/d(logits) (n x 2).
/// Throws if any resulting gradient entry is not finite, naming the tensor.
template <typename Scalar>
void backward(const ModelParams<Scalar>& params, const ForwardPass<Scalar>& pass,
              const MatrixX<Scalar>& dlogits, ModelParams<Scalar>& grads);

template <typename Scalar>
ModelParams<Scalar> backward(const ModelParams<Scalar>& params, const ForwardPass<Scalar>& pass,
                             const MatrixX<Scalar>& dlogits);

template <typename Scalar>
template <typename Other>
ModelParams<Other> ModelParams<Scalar>::cast() const {
  ModelParams<Other> out;
  out.config = config;
  out.embeddings = embeddings.template cast<Other>();
  for (const auto& w : conv_weights) out.conv_weights.push_back(w.template cast<Other>());
  for (const auto& b : conv_bias) out.conv_bias.push_back(b.template cast<Other>());
  out.doc_weights = doc_weights.template cast<Other>();
  out.doc_bias = doc_bias.template cast<Other>();
  out.ext_weights = ext_weights.template cast<Other>();
  out.ext_bias = ext_bias.template cast<Other>();
  out.init_hidden = init_hidden.template cast<Other>();
  out.init_cell = init_cell.template cast<Other>();
  out.out_weights = out_weights.template cast<Other>();
  out.out_bias = out_bias.template cast<Other>();
  return out;
}

extern template struct ModelParams<float>;
extern template struct ModelParams<double>;

}  // namespace skurank
