#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "relseq/decoder.hpp"
#include "relseq/error.hpp"
#include "relseq/state.hpp"

namespace relseq {

/// Levenshtein distance with unit costs, two-row DP.
template <class Seq>
std::size_t edit_distance(const Seq& a, const Seq& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

struct PRF {
  double p = 0.0;
  double r = 0.0;
  double f = 0.0;
};

/// Quotients with a zero denominator are 0.
inline double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

inline double f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

/// Per-state confusion counts over pooled sentences.
struct ConfusionCounts {
  std::vector<std::size_t> tp, fp, fn;

  explicit ConfusionCounts(std::size_t num_states = 2) : tp(num_states), fp(num_states), fn(num_states) {}

  void add(std::span<const State> gold, std::span<const State> pred) {
    if (gold.size() != pred.size()) throw LengthMismatchError("gold and predicted state sequences differ in length");
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (gold[i] >= tp.size() || pred[i] >= tp.size()) throw InvalidStateError("state outside the evaluated state space");
      if (gold[i] == pred[i]) {
        ++tp[gold[i]];
      } else {
        ++fp[pred[i]];
        ++fn[gold[i]];
      }
    }
  }

  PRF state(std::size_t s) const {
    PRF m;
    m.p = safe_div(static_cast<double>(tp[s]), static_cast<double>(tp[s] + fp[s]));
    m.r = safe_div(static_cast<double>(tp[s]), static_cast<double>(tp[s] + fn[s]));
    m.f = f1(m.p, m.r);
    return m;
  }

  /// Macro average of the per-state P, R and F.
  PRF averaged() const {
    PRF avg;
    const auto n = static_cast<double>(tp.size());
    for (std::size_t s = 0; s < tp.size(); ++s) {
      const PRF m = state(s);
      avg.p += m.p / n;
      avg.r += m.r / n;
      avg.f += m.f / n;
    }
    return avg;
  }
};

inline PRF state_prf(std::span<const State> gold, std::span<const State> pred, std::size_t num_states = 2) {
  ConfusionCounts c(num_states);
  c.add(gold, pred);
  return c.averaged();
}

/// A relationship changed iff its collapsed sequence has two or more states.
inline bool change_detection(const StateSeq& relationship_sequence) { return relationship_sequence.size() >= 2; }
inline bool change_detection(const Prediction& pred) { return change_detection(pred.relationship_sequence); }

/// Binary change task, P/R/F macro-averaged over the changed and unchanged classes.
inline PRF change_eval(const std::vector<bool>& gold, const std::vector<bool>& pred) {
  if (gold.size() != pred.size()) throw LengthMismatchError("gold and predicted change labels differ in length");
  StateSeq g, p;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    g.push_back(gold[i] ? 0 : 1);
    p.push_back(pred[i] ? 0 : 1);
  }
  return state_prf(g, p, 2);
}

/// Scores for one set of test sequences.
struct SequenceMetrics {
  PRF state;                         ///< averaged over the two states, pooled sentences
  double mean_edit_distance = 0.0;   ///< collapsed gold vs collapsed prediction
  double mean_edit_distance_raw = 0.0;  ///< uncollapsed label strings
  PRF change;
  std::size_t sequences = 0;
  std::size_t sentences = 0;
};

inline SequenceMetrics evaluate_sequences(const std::vector<StateSeq>& gold, const std::vector<StateSeq>& pred,
                                          std::size_t num_states = 2) {
  if (gold.size() != pred.size()) throw LengthMismatchError("gold and predicted sequence counts differ");
  SequenceMetrics m;
  ConfusionCounts counts(num_states);
  std::vector<bool> gold_change, pred_change;
  double ed = 0.0, ed_raw = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    counts.add(gold[i], pred[i]);
    const StateSeq gc = collapse(gold[i]), pc = collapse(pred[i]);
    ed += static_cast<double>(edit_distance(gc, pc));
    ed_raw += static_cast<double>(edit_distance(gold[i], pred[i]));
    gold_change.push_back(change_detection(gc));
    pred_change.push_back(change_detection(pc));
    m.sentences += gold[i].size();
  }
  m.sequences = gold.size();
  m.state = counts.averaged();
  m.mean_edit_distance = safe_div(ed, static_cast<double>(gold.size()));
  m.mean_edit_distance_raw = safe_div(ed_raw, static_cast<double>(gold.size()));
  m.change = change_eval(gold_change, pred_change);
  return m;
}

}  // namespace relseq
