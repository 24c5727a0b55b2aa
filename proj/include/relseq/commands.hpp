#pragma once

#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relseq/config.hpp"
#include "relseq/corpus.hpp"
#include "relseq/cross_validation.hpp"
#include "relseq/features.hpp"
#include "relseq/metrics.hpp"
#include "relseq/model_io.hpp"
#include "relseq/semisupervised.hpp"
#include "relseq/synthetic.hpp"

// Pipeline commands behind the relseq CLI. Each one is a deterministic
// composition of library operations driven by a RunConfig; all outputs embed
// the configuration echo and never depend on the worker count.

namespace relseq::cmd {

using ojson = nlohmann::ordered_json;

inline const std::string& require_path(const std::string& value, const char* key, const char* command) {
  if (value.empty()) throw ConfigError(std::string("paths.") + key + " is required for '" + command + "'");
  return value;
}

inline std::string config_hash(const RunConfig& cfg) { return hex64(fnv1a64(cfg.echo().dump())); }

inline void write_json(const std::string& path, const ojson& j) { write_file(path, j.dump(2) + "\n"); }

inline std::vector<PairSequence> load_sequences(const RunConfig& cfg, const char* command) {
  const auto docs = load_documents(require_path(cfg.paths.documents, "documents", command));
  return extract_pair_sequences(docs, cfg.min_cooccur);
}

inline Dataset load_dataset(const RunConfig& cfg, const char* command) {
  auto seqs = load_sequences(cfg, command);
  return load_annotations(require_path(cfg.paths.annotations, "annotations", command), std::move(seqs));
}

inline Lexicons load_run_lexicons(const RunConfig& cfg, const char* command) {
  require_path(cfg.paths.connotation, "connotation", command);
  require_path(cfg.paths.sentiment, "sentiment", command);
  require_path(cfg.paths.prior_polarity, "prior_polarity", command);
  require_path(cfg.paths.frames, "frames", command);
  require_path(cfg.paths.stopwords, "stopwords", command);
  Lexicons lex = load_lexicons(cfg.lexicon_paths());
  for (const auto& w : lex.warnings()) std::cerr << "warning: " << w << '\n';
  return lex;
}

inline ojson polarities(const StateSeq& s) {
  ojson a = ojson::array();
  for (State v : s) a.push_back(polarity_of(v));
  return a;
}

/// Writes the extracted pair sequences (and optionally a feature dump).
inline void extract(const RunConfig& cfg) {
  const auto seqs = load_sequences(cfg, "extract");
  ojson out;
  out["config"] = cfg.echo();
  std::size_t sentences = 0;
  std::set<std::string> docs;
  ojson list = ojson::array();
  for (const auto& s : seqs) {
    ojson positions = ojson::array();
    for (std::size_t i = 0; i < s.size(); ++i) positions.push_back(s.sentence(i).doc_position);
    list.push_back({{"doc_id", s.doc_id()}, {"pair", {s.pair.first, s.pair.second}}, {"length", s.size()}, {"doc_positions", positions}});
    sentences += s.size();
    docs.insert(s.doc_id());
  }
  out["counts"] = {{"documents_with_sequences", docs.size()}, {"sequences", seqs.size()}, {"sentences", sentences}};
  out["sequences"] = std::move(list);
  write_json(require_path(cfg.paths.sequences, "sequences", "extract"), out);
  if (!cfg.paths.features.empty()) {
    std::ostringstream dump;
    write_feature_dump(dump, seqs, load_run_lexicons(cfg, "extract"));
    write_file(cfg.paths.features, dump.str());
  }
}

/// Trains on every annotated sequence and saves the averaged weights.
inline void train(const RunConfig& cfg) {
  const Dataset data = load_dataset(cfg, "train");
  const InstanceSet inst = featurize(data, load_run_lexicons(cfg, "train"));
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  const FeatureIndex index(cfg.decoder.num_states);
  SemiSupervisedStats stats;
  const ModelWeights w = semisupervised_train(inst, tc, index, cfg.decoder, &stats);

  SavedModel model;
  model.index = index;
  model.weights = w.averaged();
  model.decoder = cfg.decoder;
  model.metadata = {{"seed", cfg.seed},
                    {"config_hash", config_hash(cfg)},
                    {"config", cfg.echo()},
                    {"training",
                     {{"fully_labeled", inst.fully_labeled.size()},
                      {"partially_labeled", inst.partially_labeled.size()},
                      {"unlabeled", inst.unlabeled.size()},
                      {"outer_iterations_run", stats.iterations_run},
                      {"instance_visits", w.visits}}}};
  save_model(require_path(cfg.paths.model, "model", "train"), model);
}

/// Decodes every extracted sequence with a saved model.
inline void predict(const RunConfig& cfg) {
  const SavedModel model = load_model(require_path(cfg.paths.model, "model", "predict"));
  const auto seqs = load_sequences(cfg, "predict");
  const Lexicons lex = load_run_lexicons(cfg, "predict");
  ojson out;
  out["config"] = cfg.echo();
  out["model_config_hash"] = model.metadata.value("config_hash", "");
  out["predictions"] = ojson::array();
  for (const auto& s : seqs) {
    const Instance inst = featurize(s, lex);
    const Prediction p = viterbi_decode(inst, model.weights, model.index, model.decoder);
    out["predictions"].push_back({{"doc_id", s.doc_id()},
                                  {"pair", {s.pair.first, s.pair.second}},
                                  {"states", polarities(p.states)},
                                  {"relationship_sequence", polarities(p.relationship_sequence)},
                                  {"changed", change_detection(p)},
                                  {"score", p.score}});
  }
  write_json(require_path(cfg.paths.predictions, "predictions", "predict"), out);
}

/// Scores a saved model on the fully labeled sequences.
inline void evaluate(const RunConfig& cfg) {
  const SavedModel model = load_model(require_path(cfg.paths.model, "model", "evaluate"));
  const Dataset data = load_dataset(cfg, "evaluate");
  if (data.fully_labeled.empty()) throw InsufficientDataError("no fully labeled sequences to evaluate");
  const Lexicons lex = load_run_lexicons(cfg, "evaluate");
  std::vector<StateSeq> gold, pred;
  for (const auto& s : data.fully_labeled) {
    const Instance inst = featurize(s, lex);
    gold.push_back(gold_states(inst.labels));
    pred.push_back(viterbi_decode(inst, model.weights, model.index, model.decoder).states);
  }
  ojson out;
  out["config"] = cfg.echo();
  out["model_config_hash"] = model.metadata.value("config_hash", "");
  out["summary"] = {{"order2", to_json(evaluate_sequences(gold, pred, model.index.num_states()))}};
  write_json(require_path(cfg.paths.report, "report", "evaluate"), out);
}

/// k-fold cross validation with restarts, structured model and baseline.
inline void cv(const RunConfig& cfg) {
  const Dataset data = load_dataset(cfg, "cv");
  const InstanceSet inst = featurize(data, load_run_lexicons(cfg, "cv"));
  const CvConfig cc = cfg.cv_config();
  const CvReport report = cross_validate(inst, cc);
  ojson out;
  out["config"] = cfg.echo();
  out["data"] = {{"fully_labeled", inst.fully_labeled.size()},
                 {"partially_labeled", inst.partially_labeled.size()},
                 {"unlabeled", inst.unlabeled.size()}};
  ojson body = to_json(report, cc);
  for (auto& [k, v] : body.items())
    if (k != "config") out[k] = v;
  write_json(require_path(cfg.paths.report, "report", "cv"), out);
}

/// Generates a synthetic corpus plus a config file that points at it.
inline void synth(const RunConfig& cfg) {
  const std::filesystem::path dir = require_path(cfg.paths.output, "output", "synth");
  const SyntheticCorpus corpus = generate_synthetic(cfg.generator, cfg.seed);
  write_synthetic(corpus, dir);
  std::ostringstream ini;
  ini << "# generated by relseq synth\n"
      << "[paths]\n"
      << "documents = documents\nannotations = annotations.jsonl\n"
      << "connotation = lexicons/connotation.tsv\nsentiment = lexicons/sentiment.tsv\n"
      << "prior_polarity = lexicons/prior_polarity.tsv\nframes = lexicons/frames.tsv\nstopwords = lexicons/stopwords.txt\n"
      << "model = model.json\nreport = report.json\nsequences = sequences.json\npredictions = predictions.json\n"
      << "[corpus]\nmin_cooccur = " << std::min<std::size_t>(cfg.min_cooccur, cfg.generator.min_length) << "\n"
      << "[eval]\nfolds = " << cfg.folds << "\nrestarts = " << cfg.restarts << "\n"
      << "[run]\nseed = " << cfg.seed << "\n";
  write_file(dir / "relseq.ini", ini.str());
  ojson manifest;
  manifest["config"] = cfg.echo();
  manifest["documents"] = corpus.documents.size();
  manifest["annotations"] = corpus.annotations.size();
  manifest["dataset"] = {{"fully_labeled", corpus.dataset.fully_labeled.size()},
                         {"partially_labeled", corpus.dataset.partially_labeled.size()},
                         {"unlabeled", corpus.dataset.unlabeled.size()}};
  write_json((dir / "manifest.json").string(), manifest);
}

}  // namespace relseq::cmd
