#include "skurank/pipeline.hpp"

#include <unordered_map>

#include "skurank/error.hpp"

namespace skurank {

std::vector<EncodedDocument> encode_documents(std::span<const Document> docs,
                                              const Vocabulary& vocab, const TextConfig& cfg) {
  std::vector<EncodedDocument> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(encode_document(d, vocab, cfg));
  return out;
}

std::vector<CandidateSet> build_candidate_sets(std::span<const Document> docs,
                                               const OracleConfig& cfg) {
  std::vector<CandidateSet> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(build_candidate_set(d, cfg));
  return out;
}

std::vector<CandidateSet> align_candidate_sets(std::span<const Document> docs,
                                               std::vector<CandidateSet> sets) {
  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < sets.size(); ++i) where.emplace(sets[i].doc_id, i);
  std::vector<CandidateSet> out;
  out.reserve(docs.size());
  for (const auto& d : docs) {
    auto it = where.find(d.sku_id);
    if (it == where.end()) throw Error("no candidate set for document " + d.sku_id);
    out.push_back(std::move(sets[it->second]));
  }
  return out;
}

Ranker model_ranker(const TrainedModel& model, const Vocabulary& vocab, const TextConfig& cfg) {
  require_vocab_match(model, vocab.hash());
  return [&model, &vocab, cfg](const Document& doc) {
    const auto encoded = encode_document(doc, vocab, cfg);
    const auto scores = score_document(model.params, encoded).scores();
    return rank_by_scores(std::span<const double>(scores.data(), scores.size()));
  };
}

Ranker baseline_ranker(const IdfTable& idf, const BaselineConfig& cfg) {
  cfg.validate();
  return [&idf, cfg](const Document& doc) {
    const auto scores = baseline_scores(doc, idf, cfg);
    return rank_by_scores(scores);
  };
}

double model_precision_at_3(const ModelParams<double>& params,
                            std::span<const Document> docs,
                            std::span<const EncodedDocument> encoded) {
  if (docs.size() != encoded.size() || docs.empty()) {
    throw Error("validation documents and encodings do not align");
  }
  SystemRankings sys{"model", {}};
  for (const auto& e : encoded) {
    const auto scores = score_document(params, e).scores();
    sys.rankings.push_back(rank_by_scores(std::span<const double>(scores.data(), scores.size())));
  }
  const auto report = evaluate_systems(docs, std::span<const SystemRankings>(&sys, 1));
  return report.rows.front().precision[2];
}

TrainingRun train_from_documents(std::span<const Document> train_docs,
                                 std::span<const Document> validation, const Config& cfg,
                                 const TrainHooks& extra_hooks) {
  cfg.validate();
  TrainingRun run;
  run.vocab = build_vocab(train_docs, cfg.text);
  NetworkConfig net = cfg.network;
  net.vocab_size = run.vocab.size();
  const auto encoded = encode_documents(train_docs, run.vocab, cfg.text);
  const auto candidates = build_candidate_sets(train_docs, cfg.oracle);
  const auto val_encoded = encode_documents(validation, run.vocab, cfg.text);

  TrainHooks hooks = extra_hooks;
  if (!validation.empty() && !hooks.validate) {
    hooks.validate = [&](const ModelParams<double>& p) {
      return model_precision_at_3(p, validation, val_encoded);
    };
  }
  auto result = train(init_params<double>(net, cfg.train.seed),
                      TrainingSet{train_docs, encoded, candidates}, cfg.train, hooks);
  run.model = TrainedModel{std::move(result.params), run.vocab.hash()};
  run.stats = std::move(result.stats);
  return run;
}

}  // namespace skurank
