#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "relseq/cross_validation.hpp"
#include "relseq/error.hpp"
#include "relseq/lexicons.hpp"
#include "relseq/synthetic.hpp"

namespace relseq {

/// Everything a CLI run needs. Loaded from an INI file (sections [paths],
/// [corpus], [model], [baseline], [eval], [generator], [run]); command-line
/// flags override file values, which override the defaults here. Relative
/// paths in the file are resolved against the file's directory.
struct RunConfig {
  struct Paths {
    std::string documents, annotations, model, report, sequences, predictions, output, features;
    std::string connotation, sentiment, prior_polarity, frames, stopwords;
  } paths;

  std::size_t min_cooccur = 5;
  TrainConfig train;
  DecoderConfig decoder;
  BaselineConfig baseline;
  std::size_t folds = 10;
  std::size_t restarts = 1;
  SynthSpec generator;
  std::uint64_t seed = 1;
  std::size_t workers = 0;

  LexiconPaths lexicon_paths() const {
    return {paths.connotation, paths.sentiment, paths.prior_polarity, paths.frames, paths.stopwords};
  }

  /// Applies the single run seed to every seeded component.
  CvConfig cv_config() const {
    CvConfig c;
    c.folds = folds;
    c.restarts = restarts;
    c.seed = seed;
    c.train = train;
    c.train.seed = seed;
    c.decoder = decoder;
    c.baseline = baseline;
    c.baseline.seed = seed;
    c.workers = workers;
    return c;
  }

  void validate() const {
    train.validate();
    decoder.validate();
    generator.validate();
    if (decoder.num_states != 2) throw ConfigError("model.num_states must be 2 for binary relationship annotations");
    if (min_cooccur < 1) throw ConfigError("corpus.min_cooccur must be >= 1");
    if (folds < 2) throw ConfigError("eval.folds must be >= 2");
    if (restarts < 1) throw ConfigError("eval.restarts must be >= 1");
    if (baseline.epochs < 1 || !(baseline.learning_rate > 0.0)) throw ConfigError("baseline settings out of range");
  }

  /// Echo of every setting that can influence output. Worker count is omitted.
  nlohmann::ordered_json echo() const {
    nlohmann::ordered_json j;
    j["paths"] = {{"documents", paths.documents},     {"annotations", paths.annotations}, {"connotation", paths.connotation},
                  {"sentiment", paths.sentiment},     {"prior_polarity", paths.prior_polarity},
                  {"frames", paths.frames},           {"stopwords", paths.stopwords},     {"model", paths.model}};
    j["corpus"] = {{"min_cooccur", min_cooccur}};
    j["model"] = {{"num_states", decoder.num_states},
                  {"tie_rule", decoder.preference()},
                  {"outer_iterations", train.outer_iterations},
                  {"perceptron_epochs", train.perceptron_epochs},
                  {"init_scale", train.init_scale},
                  {"use_unlabeled", train.use_unlabeled}};
    j["baseline"] = {{"epochs", baseline.epochs}, {"learning_rate", baseline.learning_rate}};
    j["eval"] = {{"folds", folds}, {"restarts", restarts}};
    j["generator"] = {{"num_sequences", generator.num_sequences},
                      {"num_partial", generator.num_partial},
                      {"num_unlabeled", generator.num_unlabeled},
                      {"partial_mask_rate", generator.partial_mask_rate},
                      {"min_length", generator.min_length},
                      {"max_length", generator.max_length},
                      {"persistence", generator.persistence},
                      {"noise", generator.noise},
                      {"min_evidence", generator.min_evidence},
                      {"max_evidence", generator.max_evidence},
                      {"third_character_rate", generator.third_character_rate},
                      {"negation_rate", generator.negation_rate}};
    j["seed"] = seed;
    return j;
  }
};

namespace detail {

template <class T>
void read_opt(const boost::property_tree::ptree& pt, const char* key, T& out) {
  const auto child = pt.get_child_optional(key);
  if (!child) return;
  const auto v = child->template get_value_optional<T>();
  if (!v) throw ConfigError(std::string("invalid value for ") + key + ": '" + child->data() + "'");
  out = *v;
}

inline void read_path(const boost::property_tree::ptree& pt, const char* key, const std::filesystem::path& base, std::string& out) {
  if (auto v = pt.get_optional<std::string>(key)) {
    std::filesystem::path p(*v);
    out = (p.is_relative() && !base.empty() ? base / p : p).lexically_normal().string();
  }
}

}  // namespace detail

inline RunConfig load_run_config(const std::filesystem::path& file) {
  RunConfig c;
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::ini_parser::read_ini(file.string(), pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  const auto base = file.parent_path();
  auto& p = c.paths;
  for (auto [key, field] : {std::pair{"paths.documents", &p.documents}, {"paths.annotations", &p.annotations},
                            {"paths.model", &p.model},                   {"paths.report", &p.report},
                            {"paths.sequences", &p.sequences},           {"paths.predictions", &p.predictions},
                            {"paths.output", &p.output},                 {"paths.features", &p.features},
                            {"paths.connotation", &p.connotation},       {"paths.sentiment", &p.sentiment},
                            {"paths.prior_polarity", &p.prior_polarity}, {"paths.frames", &p.frames},
                            {"paths.stopwords", &p.stopwords}})
    detail::read_path(pt, key, base, *field);

  using detail::read_opt;
  read_opt(pt, "corpus.min_cooccur", c.min_cooccur);
  read_opt(pt, "model.num_states", c.decoder.num_states);
  read_opt(pt, "model.outer_iterations", c.train.outer_iterations);
  read_opt(pt, "model.perceptron_epochs", c.train.perceptron_epochs);
  read_opt(pt, "model.init_scale", c.train.init_scale);
  read_opt(pt, "model.use_unlabeled", c.train.use_unlabeled);
  read_opt(pt, "baseline.epochs", c.baseline.epochs);
  read_opt(pt, "baseline.learning_rate", c.baseline.learning_rate);
  read_opt(pt, "eval.folds", c.folds);
  read_opt(pt, "eval.restarts", c.restarts);
  auto& g = c.generator;
  read_opt(pt, "generator.num_sequences", g.num_sequences);
  read_opt(pt, "generator.num_partial", g.num_partial);
  read_opt(pt, "generator.num_unlabeled", g.num_unlabeled);
  read_opt(pt, "generator.partial_mask_rate", g.partial_mask_rate);
  read_opt(pt, "generator.min_length", g.min_length);
  read_opt(pt, "generator.max_length", g.max_length);
  read_opt(pt, "generator.persistence", g.persistence);
  read_opt(pt, "generator.noise", g.noise);
  read_opt(pt, "generator.min_evidence", g.min_evidence);
  read_opt(pt, "generator.max_evidence", g.max_evidence);
  read_opt(pt, "generator.third_character_rate", g.third_character_rate);
  read_opt(pt, "generator.negation_rate", g.negation_rate);
  read_opt(pt, "run.seed", c.seed);
  read_opt(pt, "run.workers", c.workers);
  return c;
}

}  // namespace relseq
