#include "skurank/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>

#include "skurank/error.hpp"

namespace skurank {

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd_momentum") return OptimizerKind::kSgdMomentum;
  if (name == "adaptive_moments") return OptimizerKind::kAdaptiveMoments;
  throw Error("unknown optimizer: " + std::string(name));
}

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kSgdMomentum ? "sgd_momentum" : "adaptive_moments";
}

void TrainConfig::validate() const {
  if (epochs == 0) throw Error("epochs must be positive");
  if (warmstart_epochs > epochs) throw Error("warmstart_epochs must not exceed epochs");
  if (batch_size == 0) throw Error("batch_size must be positive");
  if (!(learning_rate >= 0.0)) throw Error("learning_rate must be nonnegative");
  if (!(grad_clip > 0.0)) throw Error("grad_clip must be positive");
  if (reward_extract_len == 0) throw Error("reward_extract_len must be positive");
}

namespace {

// Accumulates -weight * log p(y_i = target_i) into `loss` and its gradient
// into row i of `dlogits`.
void add_log_likelihood_term(const ScoredDocument<double>& scored, Eigen::Index i, int target,
                             double weight, double& loss, MatrixX<double>& dlogits) {
  const double z0 = scored.logits(i, 0);
  const double z1 = scored.logits(i, 1);
  const double mx = std::max(z0, z1);
  const double lse = mx + std::log(std::exp(z0 - mx) + std::exp(z1 - mx));
  const double log_p = (target == 1 ? z1 : z0) - lse;
  static const double log_floor = std::log(kProbabilityFloor);
  if (log_p < log_floor) {
    loss -= weight * log_floor;  // clamped: flat, no gradient
    return;
  }
  loss -= weight * log_p;
  const double p0 = std::exp(z0 - lse);
  const double p1 = std::exp(z1 - lse);
  dlogits(i, 0) -= weight * ((target == 0 ? 1.0 : 0.0) - p0);
  dlogits(i, 1) -= weight * ((target == 1 ? 1.0 : 0.0) - p1);
}

}  // namespace

LossResult rl_loss(const ScoredDocument<double>& scored, const CandidateExtract& extract) {
  if (!(extract.reward >= 0.0 && extract.reward <= 1.0)) throw Error("reward outside [0, 1]");
  const auto n = static_cast<Eigen::Index>(scored.size());
  std::vector<int> target(static_cast<std::size_t>(n), 0);
  for (auto i : extract.sentence_indices) {
    if (i >= target.size()) throw Error("extract index beyond document length");
    target[i] = 1;
  }
  LossResult out{0.0, MatrixX<double>::Zero(n, 2)};
  if (extract.reward == 0.0) return out;
  for (Eigen::Index i = 0; i < n; ++i) {
    add_log_likelihood_term(scored, i, target[static_cast<std::size_t>(i)], extract.reward,
                            out.loss, out.dlogits);
  }
  return out;
}

LossResult xe_loss(const ScoredDocument<double>& scored, std::span<const int> labels) {
  const auto n = static_cast<Eigen::Index>(scored.size());
  if (labels.size() != scored.size()) throw Error("label count does not match sentence count");
  if (n == 0) throw Error("xe_loss on an empty document");
  LossResult out{0.0, MatrixX<double>::Zero(n, 2)};
  const double w = 1.0 / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    add_log_likelihood_term(scored, i, labels[static_cast<std::size_t>(i)], w, out.loss,
                            out.dlogits);
  }
  return out;
}

const CandidateExtract& sample_extract(const CandidateSet& cs, std::mt19937_64& rng) {
  if (cs.candidates.empty()) throw Error("cannot sample from an empty candidate set");
  std::uniform_int_distribution<std::size_t> pick(0, cs.candidates.size() - 1);
  return cs.candidates[pick(rng)];
}

DocumentStep accumulate_document_gradient(const ModelParams<double>& params,
                                          const EncodedDocument& doc, const TrainingTarget& target,
                                          ModelParams<double>& grads) {
  auto pass = forward(params, doc);
  const LossResult lr = std::visit(
      [&](const auto& t) -> LossResult {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, CandidateExtract>) {
          return rl_loss(pass.scored, t);
        } else {
          return xe_loss(pass.scored, t);
        }
      },
      target);
  if (!std::isfinite(lr.loss)) throw Error("non-finite loss");
  backward(params, pass, lr.dlogits, grads);
  return {lr.loss, std::move(pass.scored)};
}

double global_norm(const ModelParams<double>& grads) {
  double sq = 0.0;
  for (const auto& t : grads.tensors()) sq += t.value.squaredNorm();
  return std::sqrt(sq);
}

double clip_global_norm(ModelParams<double>& grads, double max_norm) {
  const double norm = global_norm(grads);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto& t : grads.tensors()) t.value *= scale;
  }
  return norm;
}

SgdMomentum::SgdMomentum(const NetworkConfig& config, double learning_rate, double momentum)
    : learning_rate_(learning_rate),
      momentum_(momentum),
      velocity_(ModelParams<double>::zeros(config)) {}

void SgdMomentum::step(ModelParams<double>& params, const ModelParams<double>& grads) {
  auto p = params.tensors();
  auto v = velocity_.tensors();
  const auto g = grads.tensors();
  for (std::size_t i = 0; i < p.size(); ++i) {
    v[i].value = momentum_ * v[i].value + g[i].value;
    p[i].value -= learning_rate_ * v[i].value;
  }
}

AdaptiveMoments::AdaptiveMoments(const NetworkConfig& config, double learning_rate, double beta1,
                                 double beta2, double epsilon)
    : learning_rate_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon),
      first_(ModelParams<double>::zeros(config)),
      second_(ModelParams<double>::zeros(config)) {}

void AdaptiveMoments::step(ModelParams<double>& params, const ModelParams<double>& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto p = params.tensors();
  auto m = first_.tensors();
  auto v = second_.tensors();
  const auto g = grads.tensors();
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i].value = beta1_ * m[i].value + (1.0 - beta1_) * g[i].value;
    v[i].value = beta2_ * v[i].value + (1.0 - beta2_) * g[i].value.cwiseAbs2();
    p[i].value.array() -= learning_rate_ * (m[i].value.array() / c1) /
                          ((v[i].value.array() / c2).sqrt() + epsilon_);
  }
}

std::unique_ptr<Optimizer> make_optimizer(const TrainConfig& cfg, const NetworkConfig& net) {
  if (cfg.optimizer == OptimizerKind::kSgdMomentum) {
    return std::make_unique<SgdMomentum>(net, cfg.learning_rate, cfg.momentum);
  }
  return std::make_unique<AdaptiveMoments>(net, cfg.learning_rate);
}

std::vector<std::size_t> greedy_extract(const VectorX<double>& scores, std::size_t len) {
  std::vector<std::size_t> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores(static_cast<Eigen::Index>(a)) > scores(static_cast<Eigen::Index>(b));
  });
  order.resize(std::min(len, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

void TrainStats::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write training log: " + path.string());
  out << "epoch,mean_reward,mean_loss,val_precision@3\n" << std::setprecision(10);
  for (const auto& e : epochs) {
    out << e.epoch << ',' << e.mean_reward << ',' << e.mean_loss << ',';
    if (e.val_precision_at_3) out << *e.val_precision_at_3;
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

TrainResult train(ModelParams<double> params, const TrainingSet& data, const TrainConfig& cfg,
                  const TrainHooks& hooks) {
  cfg.validate();
  const std::size_t n_docs = data.encoded.size();
  if (n_docs == 0) throw Error("training set is empty");
  if (data.documents.size() != n_docs || data.candidates.size() != n_docs) {
    throw Error("training documents, encodings and candidate sets differ in length");
  }
  std::vector<std::vector<int>> labels(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    const auto& id = data.documents[d].sku_id;
    if (data.encoded[d].sku_id != id || data.candidates[d].doc_id != id) {
      throw Error("training inputs are misaligned at document " + id);
    }
    if (data.encoded[d].sentences.size() != data.documents[d].sentences.size()) {
      throw Error("encoded sentence count differs from text for document " + id);
    }
    labels[d] = best_extract_labels(data.candidates[d], data.encoded[d].sentences.size());
  }

  std::mt19937_64 rng(cfg.seed);
  auto optimizer = make_optimizer(cfg, params.config);
  auto grads = ModelParams<double>::zeros(params.config);
  std::vector<std::size_t> order(n_docs);
  std::iota(order.begin(), order.end(), 0);

  TrainStats stats;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const bool warm = epoch <= cfg.warmstart_epochs;
    std::shuffle(order.begin(), order.end(), rng);
    double reward_sum = 0.0, loss_sum = 0.0;

    for (std::size_t start = 0; start < n_docs; start += cfg.batch_size) {
      const std::size_t end = std::min(n_docs, start + cfg.batch_size);
      grads.set_zero();
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t d = order[b];
        TrainingTarget target;
        if (warm) {
          target = labels[d];
        } else {
          target = sample_extract(data.candidates[d], rng);
        }
        DocumentStep step;
        try {
          step = accumulate_document_gradient(params, data.encoded[d], target, grads);
        } catch (const Error& e) {
          throw Error("epoch " + std::to_string(epoch) + ", document " +
                      data.documents[d].sku_id + ": " + e.what());
        }
        loss_sum += step.loss;
        const auto picked = greedy_extract(step.scored.scores(), cfg.reward_extract_len);
        reward_sum += extract_reward(data.documents[d], picked);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (auto& t : grads.tensors()) t.value *= scale;
      clip_global_norm(grads, cfg.grad_clip);
      optimizer->step(params, grads);
    }

    EpochStats es;
    es.epoch = epoch;
    es.mean_reward = reward_sum / static_cast<double>(n_docs);
    es.mean_loss = loss_sum / static_cast<double>(n_docs);
    if (hooks.validate) es.val_precision_at_3 = hooks.validate(params);
    stats.epochs.push_back(es);
    if (hooks.on_epoch_end) hooks.on_epoch_end(es, params);
  }
  return {std::move(params), std::move(stats)};
}

}  // namespace skurank
