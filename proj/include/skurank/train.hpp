#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "skurank/corpus.hpp"
#include "skurank/network.hpp"
#include "skurank/oracle.hpp"

namespace skurank {

enum class OptimizerKind { kSgdMomentum, kAdaptiveMoments };

OptimizerKind parse_optimizer(std::string_view name);
std::string_view to_string(OptimizerKind kind);

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t warmstart_epochs = 2;
  std::size_t batch_size = 8;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdaptiveMoments;
  double grad_clip = 5.0;
  std::uint64_t seed = 13;
  double momentum = 0.9;
  // Size of the greedy extract whose ROUGE is logged as the epoch reward.
  std::size_t reward_extract_len = 3;

  void validate() const;
};

struct LossResult {
  double loss = 0.0;
  MatrixX<double> dlogits;  // n x 2
};

/// Probabilities below this floor are clamped inside log().
inline constexpr double kProbabilityFloor = 1e-12;

/// -r * sum_i log p(y_i = yhat_i), yhat_i = 1 iff i is in the extract.
LossResult rl_loss(const ScoredDocument<double>& scored, const CandidateExtract& extract);

/// mean_i -log p(y_i = label_i).
LossResult xe_loss(const ScoredDocument<double>& scored, std::span<const int> labels);

/// Uniform draw from the candidate set.
const CandidateExtract& sample_extract(const CandidateSet& cs, std::mt19937_64& rng);

/// Warm-start labels or a sampled extract.
using TrainingTarget = std::variant<std::vector<int>, CandidateExtract>;

struct DocumentStep {
  double loss = 0.0;
  ScoredDocument<double> scored;
};

/// Forward, loss and backward for one document; gradients are added to `grads`.
DocumentStep accumulate_document_gradient(const ModelParams<double>& params,
                                          const EncodedDocument& doc, const TrainingTarget& target,
                                          ModelParams<double>& grads);

double global_norm(const ModelParams<double>& grads);

/// Rescales `grads` so its global L2 norm is at most `max_norm`. Returns the
/// norm before clipping.
double clip_global_norm(ModelParams<double>& grads, double max_norm);

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(ModelParams<double>& params, const ModelParams<double>& grads) = 0;
};

class SgdMomentum final : public Optimizer {
 public:
  SgdMomentum(const NetworkConfig& config, double learning_rate, double momentum);
  void step(ModelParams<double>& params, const ModelParams<double>& grads) override;

 private:
  double learning_rate_;
  double momentum_;
  ModelParams<double> velocity_;
};

class AdaptiveMoments final : public Optimizer {
 public:
  AdaptiveMoments(const NetworkConfig& config, double learning_rate, double beta1 = 0.9,
                  double beta2 = 0.999, double epsilon = 1e-8);
  void step(ModelParams<double>& params, const ModelParams<double>& grads) override;

 private:
  double learning_rate_, beta1_, beta2_, epsilon_;
  std::int64_t t_ = 0;
  ModelParams<double> first_;
  ModelParams<double> second_;
};

std::unique_ptr<Optimizer> make_optimizer(const TrainConfig& cfg, const NetworkConfig& net);

/// Indices of the `len` highest-scoring sentences, returned in document order.
std::vector<std::size_t> greedy_extract(const VectorX<double>& scores, std::size_t len);

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double mean_reward = 0.0;
  double mean_loss = 0.0;
  std::optional<double> val_precision_at_3;
};

struct TrainStats {
  std::vector<EpochStats> epochs;

  /// Columns: epoch, mean_reward, mean_loss, val_precision@3.
  void write_csv(const std::filesystem::path& path) const;
};

/// Aligned views over the training documents: text (for rewards), encoded
/// input, and oracle candidate sets.
struct TrainingSet {
  std::span<const Document> documents;
  std::span<const EncodedDocument> encoded;
  std::span<const CandidateSet> candidates;
};

struct TrainHooks {
  std::function<double(const ModelParams<double>&)> validate;
  std::function<void(const EpochStats&, const ModelParams<double>&)> on_epoch_end;
};

struct TrainResult {
  ModelParams<double> params;
  TrainStats stats;
};

/// Cross-entropy on best-extract labels for the warm-start epochs, then
/// reward-weighted likelihood of extracts sampled from each candidate set.
/// Gradients are averaged per batch, clipped, and applied by the optimizer.
TrainResult train(ModelParams<double> params, const TrainingSet& data, const TrainConfig& cfg,
                  const TrainHooks& hooks = {});

}  // namespace skurank
