#pragma once

#include <span>
#include <vector>

#include "skurank/baseline.hpp"
#include "skurank/checkpoint.hpp"
#include "skurank/config.hpp"
#include "skurank/eval.hpp"
#include "skurank/oracle.hpp"
#include "skurank/rank.hpp"
#include "skurank/train.hpp"

namespace skurank {

// Glue shared by the command-line tool and the acceptance harness.

std::vector<EncodedDocument> encode_documents(std::span<const Document> docs,
                                              const Vocabulary& vocab, const TextConfig& cfg);

std::vector<CandidateSet> build_candidate_sets(std::span<const Document> docs,
                                               const OracleConfig& cfg);

/// Reorders `sets` to follow `docs`. Throws naming the first document that
/// has no candidate set.
std::vector<CandidateSet> align_candidate_sets(std::span<const Document> docs,
                                               std::vector<CandidateSet> sets);

/// Full model ranking of a text document (best first).
Ranker model_ranker(const TrainedModel& model, const Vocabulary& vocab, const TextConfig& cfg);

/// Full baseline ranking of a document (best first, ties by position).
Ranker baseline_ranker(const IdfTable& idf, const BaselineConfig& cfg);

/// Mean precision@3 of `params` on labelled documents.
double model_precision_at_3(const ModelParams<double>& params,
                            std::span<const Document> docs,
                            std::span<const EncodedDocument> encoded);

struct TrainingRun {
  Vocabulary vocab;
  TrainedModel model;
  TrainStats stats;
};

/// Builds the vocabulary, encodes, builds candidate sets and trains from a
/// fresh initialization seeded by cfg.train.seed. `validation` (optional,
/// labelled) is scored after each epoch.
TrainingRun train_from_documents(std::span<const Document> train_docs,
                                 std::span<const Document> validation, const Config& cfg,
                                 const TrainHooks& extra_hooks = {});

}  // namespace skurank
