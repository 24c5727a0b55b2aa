// relseq: command-line driver for relationship-sequence extraction, training,
// prediction, evaluation, cross validation and synthetic corpus generation.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "relseq/commands.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers, min_cooccur, folds, restarts, epochs, iterations;
  std::optional<std::string> report, documents, annotations, model, output, sequences, predictions, features;
};

void apply(const Overrides& o, relseq::RunConfig& c) {
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.min_cooccur) c.min_cooccur = *o.min_cooccur;
  if (o.folds) c.folds = *o.folds;
  if (o.restarts) c.restarts = *o.restarts;
  if (o.epochs) c.train.perceptron_epochs = *o.epochs;
  if (o.iterations) c.train.outer_iterations = *o.iterations;
  auto set = [](const std::optional<std::string>& v, std::string& dst) {
    if (v) dst = *v;
  };
  set(o.report, c.paths.report);
  set(o.documents, c.paths.documents);
  set(o.annotations, c.paths.annotations);
  set(o.model, c.paths.model);
  set(o.output, c.paths.output);
  set(o.sequences, c.paths.sequences);
  set(o.predictions, c.paths.predictions);
  set(o.features, c.paths.features);
}

int fail(const std::string& code, const std::string& message, int status = 1) {
  nlohmann::ordered_json err{{"error", code}, {"message", message}};
  std::cerr << err.dump() << std::endl;
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relseq - learn and predict relationship sequences between character pairs"};
  app.require_subcommand(1);
  Overrides o;

  // Flags shared by every subcommand; file values < flags.
  app.add_option("--config", o.config, "INI configuration file");
  app.add_option("--seed", o.seed, "Seed for every random stream");
  app.add_option("--workers", o.workers, "Parallel workers for cross validation (0 = all cores)");
  app.add_option("--min-cooccur", o.min_cooccur, "Minimum co-occurring sentences per pair sequence");
  app.add_option("--report", o.report, "Report output path");
  app.add_option("--documents", o.documents, "Directory of canonical document JSON files");
  app.add_option("--annotations", o.annotations, "Annotation JSON Lines file");
  app.add_option("--model", o.model, "Model file");
  app.add_option("--folds", o.folds, "Cross-validation folds");
  app.add_option("--restarts", o.restarts, "Random restarts");
  app.add_option("--epochs", o.epochs, "Perceptron epochs");
  app.add_option("--iterations", o.iterations, "Semi-supervised outer iterations");

  auto* extract = app.add_subcommand("extract", "Extract character-pair sentence sequences");
  extract->add_option("--sequences", o.sequences, "Sequences output path");
  extract->add_option("--features", o.features, "Optional F1-F33 TSV dump path");
  app.add_subcommand("train", "Train the second-order model (semi-supervised)");
  auto* predict = app.add_subcommand("predict", "Decode relationship sequences with a trained model");
  predict->add_option("--predictions", o.predictions, "Predictions output path");
  app.add_subcommand("evaluate", "Evaluate a trained model on fully labeled sequences");
  app.add_subcommand("cv", "Cross validation of the structured model and the per-sentence baseline");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with annotations and lexicons");
  synth->add_option("--output", o.output, "Output directory");

  // Global options may also follow the subcommand.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage_error", e.what(), 2);
  }

  try {
    relseq::RunConfig cfg;
    if (!o.config.empty()) cfg = relseq::load_run_config(o.config);
    apply(o, cfg);
    cfg.validate();

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "extract") relseq::cmd::extract(cfg);
    else if (name == "train") relseq::cmd::train(cfg);
    else if (name == "predict") relseq::cmd::predict(cfg);
    else if (name == "evaluate") relseq::cmd::evaluate(cfg);
    else if (name == "cv") relseq::cmd::cv(cfg);
    else if (name == "synth") relseq::cmd::synth(cfg);
  } catch (const relseq::Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", e.what());
  }
  return 0;
}
