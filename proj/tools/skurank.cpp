// Command-line front end: data preparation, training, ranking and evaluation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "skurank/config.hpp"
#include "skurank/error.hpp"
#include "skurank/pipeline.hpp"

namespace fs = std::filesystem;
using namespace skurank;

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;

  Config load() const {
    Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error("--set expects key=value, got " + kv);
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.train.seed = *seed;
    cfg.validate();
    return cfg;
  }
};

std::vector<Document> load_documents(const std::string& path, const Config& cfg,
                                     std::optional<ReferenceMode> mode = std::nullopt) {
  auto result = load_catalog(path, mode.value_or(cfg.reference_mode), cfg.corpus, cfg.text);
  const auto& s = result.stats;
  const std::size_t skipped = s.skipped_empty_title + s.skipped_low_engagement +
                              s.skipped_no_sentences;
  if (skipped > 0) {
    std::cerr << path << ": skipped " << skipped << " of " << s.records << " records\n";
  }
  return std::move(result.documents);
}

void write_csv_file(const std::string& path, const auto& writer) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  writer(out);
}

int cmd_synth(const Config& cfg, const std::string& out, std::optional<std::size_t> docs) {
  const auto skus = generate_synthetic_corpus(cfg.train.seed, docs.value_or(cfg.synth_docs),
                                              cfg.synth);
  write_catalog(out, skus);
  std::cout << "wrote " << skus.size() << " synthetic SKUs to " << out << '\n';
  return 0;
}

int cmd_ingest(const Config& cfg, const std::string& catalog) {
  const auto result = load_catalog(catalog, cfg.reference_mode, cfg.corpus, cfg.text);
  const auto& s = result.stats;
  std::size_t sentences = 0, labelled = 0;
  for (const auto& d : result.documents) {
    sentences += d.sentences.size();
    if (d.relevance_labels) ++labelled;
  }
  std::cout << "records:               " << s.records << '\n'
            << "documents:             " << result.documents.size() << '\n'
            << "sentences:             " << sentences << '\n'
            << "labelled documents:    " << labelled << '\n'
            << "skipped empty title:   " << s.skipped_empty_title << '\n'
            << "skipped no sentences:  " << s.skipped_no_sentences << '\n'
            << "skipped low engagement:" << ' ' << s.skipped_low_engagement << '\n';
  return 0;
}

int cmd_build_vocab(const Config& cfg, const std::string& catalog, const std::string& out) {
  const auto docs = load_documents(catalog, cfg);
  const auto vocab = build_vocab(docs, cfg.text);
  vocab.save(out);
  std::cout << "vocabulary of " << vocab.size() << " ids written to " << out << '\n';
  return 0;
}

int cmd_build_idf(const Config& cfg, const std::string& catalog, const std::string& out) {
  const auto docs = load_documents(catalog, cfg);
  const auto idf = build_idf(docs);
  idf.save(out);
  std::cout << "idf over " << idf.num_docs() << " documents, " << idf.doc_freqs().size()
            << " tokens written to " << out << '\n';
  return 0;
}

int cmd_make_oracle(const Config& cfg, const std::string& catalog, const std::string& out) {
  const auto docs = load_documents(catalog, cfg);
  const auto sets = build_candidate_sets(docs, cfg.oracle);
  write_candidate_sets(out, sets);
  std::cout << "candidate sets for " << sets.size() << " documents written to " << out << '\n';
  return 0;
}

struct TrainArgs {
  std::string catalog, vocab, out, candidates, log, validation, checkpoint_dir;
};

int cmd_train(const Config& cfg, const TrainArgs& a) {
  const auto docs = load_documents(a.catalog, cfg);
  const auto vocab = Vocabulary::load(a.vocab);
  NetworkConfig net = cfg.network;
  net.vocab_size = vocab.size();
  const auto encoded = encode_documents(docs, vocab, cfg.text);
  const auto candidates = a.candidates.empty()
                              ? build_candidate_sets(docs, cfg.oracle)
                              : align_candidate_sets(docs, read_candidate_sets(a.candidates));

  std::vector<Document> val_docs;
  std::vector<EncodedDocument> val_encoded;
  TrainHooks hooks;
  if (!a.validation.empty()) {
    val_docs = load_documents(a.validation, cfg, ReferenceMode::kTitleOnly);
    val_encoded = encode_documents(val_docs, vocab, cfg.text);
    hooks.validate = [&](const ModelParams<double>& p) {
      return model_precision_at_3(p, val_docs, val_encoded);
    };
  }
  if (!a.checkpoint_dir.empty()) fs::create_directories(a.checkpoint_dir);
  hooks.on_epoch_end = [&](const EpochStats& e, const ModelParams<double>& p) {
    std::cerr << "epoch " << e.epoch << "  reward " << e.mean_reward << "  loss " << e.mean_loss;
    if (e.val_precision_at_3) std::cerr << "  val p@3 " << *e.val_precision_at_3;
    std::cerr << '\n';
    if (!a.checkpoint_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "epoch_%03zu.ckpt", e.epoch);
      save_checkpoint(fs::path(a.checkpoint_dir) / name, TrainedModel{p, vocab.hash()});
    }
  };

  auto result = train(init_params<double>(net, cfg.train.seed),
                      TrainingSet{docs, encoded, candidates}, cfg.train, hooks);
  save_checkpoint(a.out, TrainedModel{std::move(result.params), vocab.hash()});
  if (!a.log.empty()) result.stats.write_csv(a.log);
  std::cout << "model written to " << a.out << '\n';
  return 0;
}

int cmd_rank(const Config& cfg, const std::string& catalog, const std::string& vocab_path,
             const std::string& model_path, const std::string& out, std::size_t top_k) {
  const auto docs = load_documents(catalog, cfg, ReferenceMode::kTitleOnly);
  const auto vocab = Vocabulary::load(vocab_path);
  const auto model = load_checkpoint(model_path);
  require_vocab_match(model, vocab.hash());
  std::vector<RankedSummary> summaries;
  summaries.reserve(docs.size());
  for (const auto& d : docs) {
    summaries.push_back(rank_document(encode_document(d, vocab, cfg.text), model, vocab.hash(),
                                      top_k));
  }
  write_rankings(out, summaries, docs);
  std::cout << "ranked " << summaries.size() << " documents into " << out << '\n';
  return 0;
}

int cmd_baseline(const Config& cfg, const std::string& catalog, const std::string& idf_path,
                 const std::string& out, std::size_t top_k) {
  const auto docs = load_documents(catalog, cfg, ReferenceMode::kTitleOnly);
  const auto idf = IdfTable::load(idf_path);
  cfg.baseline.validate();
  std::vector<RankedSummary> summaries;
  summaries.reserve(docs.size());
  for (const auto& d : docs) {
    summaries.push_back(summarize_scores(d.sku_id, baseline_scores(d, idf, cfg.baseline), top_k));
  }
  write_rankings(out, summaries, docs);
  std::cout << to_string(cfg.baseline.mode) << " baseline rankings written to " << out << '\n';
  return 0;
}

int cmd_eval(const Config& cfg, const std::string& catalog,
             const std::vector<std::string>& systems, const std::string& csv) {
  const auto docs = load_documents(catalog, cfg, ReferenceMode::kTitleOnly);
  std::vector<SystemRankings> rankings;
  for (const auto& spec : systems) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw Error("--system expects name=rankings.jsonl, got " + spec);
    SystemRankings sys{spec.substr(0, eq), {}};
    std::unordered_map<std::string, std::vector<std::size_t>> by_id;
    for (auto& r : read_rankings(spec.substr(eq + 1))) {
      by_id.emplace(r.sku_id, std::move(r.ranked_indices));
    }
    for (const auto& d : docs) {
      auto it = by_id.find(d.sku_id);
      if (it == by_id.end()) throw Error("system " + sys.name + " has no ranking for " + d.sku_id);
      sys.rankings.push_back(it->second);
    }
    rankings.push_back(std::move(sys));
  }
  const auto report = evaluate_systems(docs, rankings);
  report.write_table(std::cout);
  if (!csv.empty()) write_csv_file(csv, [&](std::ostream& o) { report.write_csv(o); });
  return 0;
}

int cmd_sweep(const Config& cfg, const std::string& catalog, const std::string& idf_path,
              const std::string& csv) {
  const auto docs = load_documents(catalog, cfg, ReferenceMode::kTitleOnly);
  const auto idf = IdfTable::load(idf_path);
  const auto result = sweep_title_weight(docs, idf, cfg.sweep_weights);
  std::printf("%8s %10s %10s %10s\n", "weight", "P@1", "P@2", "P@3");
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    std::printf("%8.3g", result.rows[r].weight);
    for (std::size_t c = 0; c < 3; ++c) {
      std::printf(" %9.4f%s", result.rows[r].precision[c], result.best_row[c] == r ? "*" : " ");
    }
    std::printf("\n");
  }
  if (!csv.empty()) write_csv_file(csv, [&](std::ostream& o) { result.write_csv(o); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentence ranking for product descriptions"};
  app.require_subcommand(0, 1);
  Globals g;
  app.add_option("--config", g.config_path, "flat key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "random seed (overrides the config)");
  app.add_option("--set", g.overrides, "override one config entry, key=value");
  bool dump_config = false;
  app.add_flag("--print-config", dump_config, "print the effective configuration and exit");

  std::string catalog, out, vocab, idf, model, csv;
  std::optional<std::size_t> docs;
  std::size_t top_k = 0;
  TrainArgs targs;
  std::vector<std::string> systems;

  auto* synth = app.add_subcommand("synth", "generate a synthetic labelled catalog");
  synth->add_option("--out", out)->required();
  synth->add_option("--docs", docs, "number of SKUs (default: synth_docs)");

  auto* ingest = app.add_subcommand("ingest", "validate a catalog and report statistics");
  ingest->add_option("--catalog", catalog)->required()->check(CLI::ExistingFile);

  auto* bvocab = app.add_subcommand("build-vocab", "build the vocabulary file");
  bvocab->add_option("--catalog", catalog)->required()->check(CLI::ExistingFile);
  bvocab->add_option("--out", out)->required();

  auto* bidf = app.add_subcommand("build-idf", "build the document-frequency table");
  bidf->add_option("--catalog", catalog)->required()->check(CLI::ExistingFile);
  bidf->add_option("--out", out)->required();

  auto* oracle = app.add_subcommand("make-oracle", "build candidate extract sets");
  oracle->add_option("--catalog", catalog)->required()->check(CLI::ExistingFile);
  oracle->add_option("--out", out)->required();

  auto* trn = app.add_subcommand("train", "train the sentence ranker");
  trn->add_option("--catalog", targs.catalog)->required()->check(CLI::ExistingFile);
  trn->add_option("--vocab", targs.vocab)->required()->check(CLI::ExistingFile);
  trn->add_option("--out", targs.out, "final checkpoint")->required();
  trn->add_option("--candidates", targs.candidates, "precomputed candidate sets")
      ->check(CLI::ExistingFile);
  trn->add_option("--log", targs.log, "training log CSV");
  trn->add_option("--validation", targs.validation, "labelled catalog scored every epoch")
      ->check(CLI::ExistingFile);
  trn->add_option("--checkpoint-dir", targs.checkpoint_dir, "write a checkpoint every epoch");

  auto* rnk = app.add_subcommand("rank", "rank sentences with a trained model");
  rnk->add_option("--catalog", catalog)->required()->check(CLI::ExistingFile);
  rnk->add_option("--vocab", vocab)->required()->check(CLI::ExistingFile);
  rnk->add_option("--model", model)->required()->check(CLI::ExistingFile);
  rnk->add_option("--out", out)->required();
  rnk->add_option("--top-k", top_k, "summary length (default: top_k)");

  auto* base = app.add_subcommand("baseline", "rank sentences with a tf-idf baseline");
  base->add_option("--catalog", catalog)->required()->check(CLI::ExistingFile);
  base->add_option("--idf", idf)->required()->check(CLI::ExistingFile);
  base->add_option("--out", out)->required();
  base->add_option("--top-k", top_k, "summary length (default: top_k)");

  auto* evl = app.add_subcommand("eval", "precision@k of ranking files");
  evl->add_option("--catalog", catalog, "labelled catalog")->required()->check(CLI::ExistingFile);
  evl->add_option("--system", systems, "name=rankings.jsonl; the first is the reference")
      ->required();
  evl->add_option("--csv", csv);

  auto* swp = app.add_subcommand("sweep", "grid search over the title weight");
  swp->add_option("--catalog", catalog, "labelled catalog")->required()->check(CLI::ExistingFile);
  swp->add_option("--idf", idf)->required()->check(CLI::ExistingFile);
  swp->add_option("--csv", csv);

  CLI11_PARSE(app, argc, argv);
  if (!dump_config && app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 1;
  }

  try {
    const Config cfg = g.load();
    if (dump_config) {
      cfg.write(std::cout);
      return 0;
    }
    const std::size_t k = top_k > 0 ? top_k : cfg.top_k;
    if (*synth) return cmd_synth(cfg, out, docs);
    if (*ingest) return cmd_ingest(cfg, catalog);
    if (*bvocab) return cmd_build_vocab(cfg, catalog, out);
    if (*bidf) return cmd_build_idf(cfg, catalog, out);
    if (*oracle) return cmd_make_oracle(cfg, catalog, out);
    if (*trn) return cmd_train(cfg, targs);
    if (*rnk) return cmd_rank(cfg, catalog, vocab, model, out, k);
    if (*base) return cmd_baseline(cfg, catalog, idf, out, k);
    if (*evl) return cmd_eval(cfg, catalog, systems, csv);
    if (*swp) return cmd_sweep(cfg, catalog, idf, csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
