#pragma once

#include <cstdint>
#include <vector>

#include "relseq/corpus.hpp"
#include "relseq/decoder.hpp"
#include "relseq/perceptron.hpp"

namespace relseq {

struct TrainConfig {
  std::size_t outer_iterations = 10;
  std::size_t perceptron_epochs = 100;
  std::uint64_t seed = 1;
  double init_scale = 0.01;
  /// Also complete unlabeled sequences (unconstrained) in the labeling step.
  bool use_unlabeled = false;

  void validate() const {
    if (outer_iterations < 1) throw InvalidParameterError("outer_iterations must be >= 1");
    if (perceptron_epochs < 1) throw InvalidParameterError("perceptron_epochs must be >= 1");
    if (!(init_scale >= 0.0)) throw InvalidParameterError("init_scale must be >= 0");
  }
};

/// Uniform random weights in [-init_scale, +init_scale].
inline std::vector<double> initial_weights(const FeatureIndex& index, const TrainConfig& config) {
  Rng rng = make_rng(config.seed, 0x1417);
  std::vector<double> w(index.size());
  for (auto& v : w) v = uniform(rng, -config.init_scale, config.init_scale);
  return w;
}

struct SemiSupervisedStats {
  std::size_t iterations_run = 0;
  /// Positions whose completed state changed relative to the previous round.
  std::vector<std::size_t> relabeled_positions;
};

/// Alternates between completing partially labeled sequences with the
/// constrained decoder under the current averaged weights and retraining the
/// perceptron on the fully labeled plus completed sequences.
///
/// Every round restarts the perceptron from the same random initialization
/// and shuffle seed, so the rounds differ only through the completed labels.
/// A round whose completions equal the previous round's would reproduce the
/// same weights, so the loop stops there.
inline ModelWeights semisupervised_train(const InstanceSet& data, const TrainConfig& config, const FeatureIndex& index,
                                         const DecoderConfig& decoder = {}, SemiSupervisedStats* stats = nullptr) {
  config.validate();
  if (data.fully_labeled.empty()) throw EmptyTrainingSetError("semi-supervised training needs at least one fully labeled sequence");
  const std::vector<double> w0 = initial_weights(index, config);

  std::vector<Instance> train(data.fully_labeled.begin(), data.fully_labeled.end());
  const std::size_t n_fixed = train.size();
  for (const auto& p : data.partially_labeled) train.push_back(p);
  if (config.use_unlabeled)
    for (const auto& u : data.unlabeled) train.push_back(u);

  std::vector<double> current = w0;
  std::vector<StateSeq> previous;
  ModelWeights result(w0);
  if (stats) *stats = {};

  for (std::size_t round = 0; round < config.outer_iterations; ++round) {
    std::vector<StateSeq> completed;
    completed.reserve(train.size() - n_fixed);
    std::size_t changed = 0;
    for (std::size_t i = n_fixed; i < train.size(); ++i) {
      const Instance& src = i - n_fixed < data.partially_labeled.size()
                                ? data.partially_labeled[i - n_fixed]
                                : data.unlabeled[i - n_fixed - data.partially_labeled.size()];
      StateSeq y = detail::decode_states(src.x, current, index, decoder, &src.labels);
      if (!previous.empty()) {
        const StateSeq& old = previous[completed.size()];
        for (std::size_t t = 0; t < y.size(); ++t) changed += (y[t] != old[t]);
      }
      train[i].labels = as_partial(y);
      completed.push_back(std::move(y));
    }
    if (round > 0 && completed == previous) break;
    if (stats) {
      ++stats->iterations_run;
      stats->relabeled_positions.push_back(changed);
    }
    result = perceptron_train(train, config.perceptron_epochs, config.seed, index, w0, decoder);
    current = result.averaged();
    previous = std::move(completed);
  }
  return result;
}

}  // namespace relseq
