#include "skurank/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>

#include "skurank/error.hpp"

namespace skurank {

double precision_at_k(std::span<const std::size_t> ranked, const std::vector<bool>& labels,
                      std::size_t k) {
  if (k == 0) throw Error("precision cutoff must be >= 1");
  if (labels.empty()) throw Error("precision_at_k needs relevance labels");
  const std::size_t cut = std::min(k, labels.size());
  if (ranked.size() < cut) throw Error("ranking is shorter than the precision cutoff");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < cut; ++i) {
    if (ranked[i] >= labels.size()) throw Error("ranked index beyond labelled sentences");
    if (labels[ranked[i]]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(cut);
}

const EvalRow& EvalReport::row(std::string_view system) const {
  for (const auto& r : rows) {
    if (r.system == system) return r;
  }
  throw Error("no evaluation row for system " + std::string(system));
}

void EvalReport::write_csv(std::ostream& out) const {
  out << "system,k,precision,num_docs\n" << std::setprecision(10);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < kPrecisionCutoffs.size(); ++c) {
      out << r.system << ',' << kPrecisionCutoffs[c] << ',' << r.precision[c] << ',' << num_docs
          << '\n';
    }
  }
}

void EvalReport::write_table(std::ostream& out) const {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.system.size());
  out << std::left << std::setw(static_cast<int>(width)) << "system" << std::right;
  for (auto k : kPrecisionCutoffs) out << std::setw(10) << ("P@" + std::to_string(k));
  out << "   (" << num_docs << " docs)\n" << std::fixed << std::setprecision(4);
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.system << std::right;
    for (double p : r.precision) out << std::setw(10) << p;
    out << '\n';
  }
  for (const auto& d : deltas) {
    out << d.system << " vs " << d.reference << ':';
    for (std::size_t c = 0; c < kPrecisionCutoffs.size(); ++c) {
      out << "  P@" << kPrecisionCutoffs[c] << ' ' << std::showpos << d.relative[c] * 100.0 << '%'
          << std::noshowpos;
    }
    out << '\n';
  }
  out.unsetf(std::ios::fixed);
}

EvalReport evaluate_systems(std::span<const Document> docs, std::span<const SystemRankings> systems) {
  if (docs.empty()) throw Error("evaluation needs at least one document");
  for (const auto& doc : docs) {
    if (!doc.relevance_labels) throw Error("document " + doc.sku_id + " has no relevance labels");
    if (doc.relevance_labels->size() != doc.sentences.size()) {
      throw Error("relevance labels of " + doc.sku_id + " do not align with its sentences");
    }
  }
  EvalReport report;
  report.num_docs = docs.size();
  for (const auto& sys : systems) {
    if (sys.rankings.size() != docs.size()) {
      throw Error("system " + sys.name + " did not rank every document");
    }
    EvalRow row;
    row.system = sys.name;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (std::size_t c = 0; c < kPrecisionCutoffs.size(); ++c) {
        try {
          row.precision[c] +=
              precision_at_k(sys.rankings[d], *docs[d].relevance_labels, kPrecisionCutoffs[c]);
        } catch (const Error& e) {
          throw Error("system " + sys.name + ", document " + docs[d].sku_id + ": " + e.what());
        }
      }
    }
    for (double& p : row.precision) p /= static_cast<double>(docs.size());
    report.rows.push_back(std::move(row));
  }
  for (std::size_t s = 1; s < report.rows.size(); ++s) {
    EvalDelta delta;
    delta.system = report.rows[s].system;
    delta.reference = report.rows[0].system;
    for (std::size_t c = 0; c < kPrecisionCutoffs.size(); ++c) {
      const double b = report.rows[0].precision[c];
      delta.relative[c] = b == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                   : (report.rows[s].precision[c] - b) / b;
    }
    report.deltas.push_back(delta);
  }
  return report;
}

EvalReport evaluate_systems(std::span<const Document> docs, std::span<const NamedRanker> systems) {
  std::vector<SystemRankings> rankings;
  for (const auto& sys : systems) {
    SystemRankings r{sys.name, {}};
    r.rankings.reserve(docs.size());
    for (const auto& doc : docs) r.rankings.push_back(sys.rank(doc));
    rankings.push_back(std::move(r));
  }
  return evaluate_systems(docs, rankings);
}

void SweepResult::write_csv(std::ostream& out) const {
  out << "weight,k,precision,best\n" << std::setprecision(10);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < kPrecisionCutoffs.size(); ++c) {
      out << rows[r].weight << ',' << kPrecisionCutoffs[c] << ',' << rows[r].precision[c] << ','
          << (best_row[c] == r ? 1 : 0) << '\n';
    }
  }
}

SweepResult sweep_title_weight(std::span<const Document> docs, const IdfTable& idf,
                               std::span<const double> weights) {
  if (weights.empty()) throw Error("sweep needs at least one weight");
  SweepResult result;
  for (double w : weights) {
    const BaselineConfig cfg{BaselineMode::kWeighted, w};
    const NamedRanker ranker{"weighted", [&](const Document& d) {
                               return baseline_rank(d, idf, cfg, kPrecisionCutoffs.back());
                             }};
    const auto report = evaluate_systems(docs, std::span<const NamedRanker>(&ranker, 1));
    result.rows.push_back({w, report.rows.front().precision});
  }
  for (std::size_t c = 0; c < kPrecisionCutoffs.size(); ++c) {
    for (std::size_t r = 1; r < result.rows.size(); ++r) {
      if (result.rows[r].precision[c] > result.rows[result.best_row[c]].precision[c]) {
        result.best_row[c] = r;
      }
    }
  }
  return result;
}

}  // namespace skurank
