#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "relseq/decoder.hpp"
#include "relseq/features.hpp"
#include "relseq/random.hpp"

namespace relseq {

struct BaselineConfig {
  std::size_t epochs = 30;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
};

/// Unstructured per-sentence classifier: binary logistic regression over the
/// 33 content features. Sentences are classified independently.
struct LogisticBaseline {
  std::array<double, kNumContentFeatures> w{};
  double bias = 0.0;

  double score(const ContentVector& x) const {
    double s = bias;
    for (std::size_t a = 0; a < kNumContentFeatures; ++a) s += w[a] * x[a];
    return s;
  }

  /// Positive score means cooperative; an exact zero goes to cooperative,
  /// the first state of the default tie rule.
  State predict(const ContentVector& x) const { return score(x) < 0.0 ? kNonCooperative : kCooperative; }

  StateSeq predict(std::span<const ContentVector> xs) const {
    StateSeq out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(predict(x));
    return out;
  }
};

/// Seeded SGD on the log loss; target 1 for cooperative sentences.
inline LogisticBaseline baseline_train(std::span<const ContentVector> x, std::span<const State> y, const BaselineConfig& config) {
  if (x.size() != y.size()) throw LengthMismatchError("baseline features and labels differ in length");
  if (x.empty()) throw EmptyTrainingSetError("baseline needs at least one labeled sentence");
  LogisticBaseline model;
  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = make_rng(config.seed, 0xB45E);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t i : order) {
      const double p = 1.0 / (1.0 + std::exp(-model.score(x[i])));
      const double target = y[i] == kCooperative ? 1.0 : 0.0;
      const double g = config.learning_rate * (target - p);
      for (std::size_t a = 0; a < kNumContentFeatures; ++a)
        if (x[i][a] != 0.0) model.w[a] += g * x[i][a];
      model.bias += g;
    }
  }
  return model;
}

/// Trains on every labeled sentence of the given sequences, including the
/// labeled positions of partially labeled ones.
inline LogisticBaseline baseline_train(const InstanceSet& data, const BaselineConfig& config) {
  std::vector<ContentVector> xs;
  StateSeq ys;
  for (const auto* group : {&data.fully_labeled, &data.partially_labeled})
    for (const auto& inst : *group)
      for (std::size_t t = 0; t < inst.size(); ++t)
        if (inst.labels[t]) {
          xs.push_back(inst.x[t]);
          ys.push_back(*inst.labels[t]);
        }
  return baseline_train(xs, ys, config);
}

}  // namespace relseq
