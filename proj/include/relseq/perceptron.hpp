#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "relseq/decoder.hpp"
#include "relseq/feature_index.hpp"
#include "relseq/random.hpp"

namespace relseq {

/// Perceptron weights with averaging state.
///
/// The average over all instance visits is kept in closed form: if update
/// Delta_u happens at visit u (1-based) and C visits have been made, then
///   (1/C) sum_v w_v = w - (1/C) sum_u (u - 1) Delta_u
/// so only `weighted_updates` = sum_u (u - 1) Delta_u needs maintaining.
struct ModelWeights {
  std::vector<double> w;
  std::vector<double> weighted_updates;
  std::uint64_t visits = 0;

  ModelWeights() = default;
  explicit ModelWeights(std::vector<double> initial)
      : w(std::move(initial)), weighted_updates(w.size(), 0.0) {}

  std::size_t size() const { return w.size(); }

  /// Average of w over every instance visit; w itself before any visit.
  std::vector<double> averaged() const {
    std::vector<double> avg = w;
    if (visits == 0) return avg;
    const double c = static_cast<double>(visits);
    for (std::size_t i = 0; i < avg.size(); ++i)
      if (weighted_updates[i] != 0.0) avg[i] -= weighted_updates[i] / c;
    return avg;
  }

  /// w += Delta for the update made during the visit about to be counted.
  void apply_update(const SparseVector& delta_plus, const SparseVector& delta_minus) {
    const double age = static_cast<double>(visits);  // (u - 1) for visit u = visits + 1
    delta_plus.add_to(w, 1.0);
    delta_minus.add_to(w, -1.0);
    if (age != 0.0) {
      delta_plus.add_to(weighted_updates, age);
      delta_minus.add_to(weighted_updates, -age);
    }
  }

  void count_visit() { ++visits; }
};

struct PerceptronStats {
  std::vector<std::size_t> epoch_mistakes;  ///< sequences updated per epoch
  std::size_t total_updates = 0;
};

/// Averaged structured perceptron (learning rate 1) starting from `initial`.
/// Each epoch visits the sequences in a freshly shuffled order; the decode
/// uses the current weights and a mistake adds Phi(gold) - Phi(predicted).
inline ModelWeights perceptron_train(std::span<const Instance> train, std::size_t epochs, std::uint64_t seed,
                                     const FeatureIndex& index, std::vector<double> initial, const DecoderConfig& config = {},
                                     PerceptronStats* stats = nullptr) {
  if (initial.size() != index.size()) throw LengthMismatchError("initial weights do not match the feature index");
  std::vector<StateSeq> gold;
  gold.reserve(train.size());
  for (const auto& inst : train) gold.push_back(gold_states(inst.labels));

  ModelWeights model(std::move(initial));
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = make_rng(seed, 0x5EED);
  if (stats) *stats = {};

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    std::size_t mistakes = 0;
    for (std::size_t i : order) {
      const Instance& inst = train[i];
      StateSeq pred = detail::decode_states(inst.x, model.w, index, config, nullptr);
      if (pred != gold[i]) {
        model.apply_update(joint_features(inst, gold[i], index), joint_features(inst, pred, index));
        ++mistakes;
      }
      model.count_visit();
    }
    if (stats) {
      stats->epoch_mistakes.push_back(mistakes);
      stats->total_updates += mistakes;
    }
  }
  return model;
}

}  // namespace relseq
