#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "skurank/baseline.hpp"
#include "skurank/corpus.hpp"

namespace skurank {

inline constexpr std::array<std::size_t, 3> kPrecisionCutoffs{1, 2, 3};

/// Fraction of relevant sentences among the first min(k, n) ranked.
double precision_at_k(std::span<const std::size_t> ranked, const std::vector<bool>& labels,
                      std::size_t k);

/// Rankings of one system, aligned with the evaluated documents.
struct SystemRankings {
  std::string name;
  std::vector<std::vector<std::size_t>> rankings;
};

using Ranker = std::function<std::vector<std::size_t>(const Document&)>;

struct NamedRanker {
  std::string name;
  Ranker rank;
};

struct EvalRow {
  std::string system;
  std::array<double, 3> precision{};  // at k = 1, 2, 3
};

/// (system - reference) / reference at each cutoff.
struct EvalDelta {
  std::string system;
  std::string reference;
  std::array<double, 3> relative{};
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::size_t num_docs = 0;
  std::vector<EvalDelta> deltas;

  const EvalRow& row(std::string_view system) const;

  /// system,k,precision,num_docs
  void write_csv(std::ostream& out) const;
  void write_table(std::ostream& out) const;
};

/// Macro-averaged precision@{1,2,3}. Deltas are relative to the first system.
EvalReport evaluate_systems(std::span<const Document> docs, std::span<const SystemRankings> systems);
EvalReport evaluate_systems(std::span<const Document> docs, std::span<const NamedRanker> systems);

struct SweepRow {
  double weight = 0.0;
  std::array<double, 3> precision{};
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::array<std::size_t, 3> best_row{};  // argmax row per cutoff, first wins ties

  void write_csv(std::ostream& out) const;
};

/// Runs the weighted baseline once per title weight.
SweepResult sweep_title_weight(std::span<const Document> docs, const IdfTable& idf,
                               std::span<const double> weights);

}  // namespace skurank
