#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "relseq/error.hpp"
#include "relseq/feature_index.hpp"
#include "relseq/features.hpp"
#include "relseq/state.hpp"

namespace relseq {

struct DecoderConfig {
  std::size_t num_states = 2;
  /// State preference for breaking ties; empty means ascending index, which
  /// for the binary task prefers cooperative (+1) over non-cooperative (-1).
  std::vector<State> tie_rule;

  std::vector<State> preference() const {
    if (!tie_rule.empty()) return tie_rule;
    std::vector<State> p(num_states);
    for (std::size_t s = 0; s < num_states; ++s) p[s] = static_cast<State>(s);
    return p;
  }

  void validate() const {
    if (num_states < 2) throw InvalidParameterError("num_states must be >= 2");
    if (tie_rule.empty()) return;
    std::vector<State> sorted = tie_rule;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t s = 0; s < num_states; ++s)
      if (sorted.size() != num_states || sorted[s] != s)
        throw InvalidParameterError("tie_rule must be a permutation of the state indices");
  }
};

/// w . Phi(x, y)
inline double score_sequence(std::span<const ContentVector> x, std::span<const State> y, std::span<const double> w,
                             const FeatureIndex& index) {
  if (w.size() != index.size()) throw LengthMismatchError("weight vector does not match the feature index");
  return joint_features(x, y, index).dot(w);
}

inline double score_sequence(const Instance& inst, std::span<const State> y, std::span<const double> w, const FeatureIndex& index) {
  return score_sequence(std::span<const ContentVector>(inst.x), y, w, index);
}

struct Prediction {
  StateSeq states;
  StateSeq relationship_sequence;
  double score = 0.0;
};

namespace detail {

/// Exact second-order decoding over the lattice of state pairs.
///
/// A backward pass computes, for every position t >= 1 and state pair
/// (y_{t-1}, y_t), the best score of the suffix t+1..l-1; a pair (a, b) at t
/// only continues to pairs (b, c) at t+1. The forward read-out then fixes one
/// state at a time, scanning candidates in preference order and keeping the
/// first maximum, which yields the optimum that is smallest in preference
/// order from the start of the sequence.
///
/// `allowed` is either empty or holds one optional per position; a set entry
/// pins that position's state.
inline StateSeq decode_states(std::span<const ContentVector> x, std::span<const double> w, const FeatureIndex& index,
                              const DecoderConfig& config, const PartialLabels* allowed) {
  const std::size_t n = x.size();
  if (n == 0) throw EmptySequenceError("cannot decode an empty sequence");
  const std::size_t Y = index.num_states();
  if (config.num_states != Y) throw InvalidParameterError("decoder state count does not match the feature index");
  if (w.size() != index.size()) throw LengthMismatchError("weight vector does not match the feature index");
  if (allowed && allowed->size() != n) throw LengthMismatchError("partial label count does not match the sequence length");
  if (allowed)
    for (const auto& l : *allowed)
      if (l && *l >= Y) throw InvalidStateError("partial label outside the state space");

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  auto ok = [&](std::size_t t, std::size_t s) { return !allowed || !(*allowed)[t] || *(*allowed)[t] == s; };

  std::vector<double> emit(n * Y, 0.0);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t s = 0; s < Y; ++s) {
      double e = 0.0;
      for (std::size_t a = 0; a < kNumContentFeatures; ++a)
        if (x[t][a] != 0.0) e += w[index.content(a, static_cast<State>(s))] * x[t][a];
      emit[t * Y + s] = e;
    }
  auto E = [&](std::size_t t, std::size_t s) { return emit[t * Y + s]; };
  auto W = [&](FeatureId id) { return w[id]; };
  const auto st = [](std::size_t s) { return static_cast<State>(s); };

  // beta[t][a*Y + b]: best score of positions t+1.. given y_{t-1}=a, y_t=b.
  std::vector<std::vector<double>> beta(n, std::vector<double>(Y * Y, 0.0));
  for (std::size_t t = n - 1; t-- > 1;) {
    for (std::size_t a = 0; a < Y; ++a)
      for (std::size_t b = 0; b < Y; ++b) {
        double best = kNegInf;
        for (std::size_t c = 0; c < Y; ++c) {
          if (!ok(t + 1, c)) continue;
          best = std::max(best, E(t + 1, c) + W(index.trans2(st(c), st(b), st(a))) + beta[t + 1][b * Y + c]);
        }
        beta[t][a * Y + b] = best;
      }
  }
  std::vector<double> gamma0(Y, 0.0);
  if (n > 1)
    for (std::size_t b = 0; b < Y; ++b) {
      double best = kNegInf;
      for (std::size_t c = 0; c < Y; ++c) {
        if (!ok(1, c)) continue;
        best = std::max(best, E(1, c) + W(index.trans1(st(c), st(b))) + beta[1][b * Y + c]);
      }
      gamma0[b] = best;
    }

  const std::vector<State> pref = config.preference();
  StateSeq y(n);
  auto pick = [&](std::size_t t, auto&& value) {
    double best = kNegInf;
    bool found = false;
    State chosen = 0;
    for (State c : pref) {
      if (!ok(t, c)) continue;
      const double v = value(c);
      if (!found || v > best) {
        best = v;
        chosen = c;
        found = true;
      }
    }
    return chosen;
  };
  y[0] = pick(0, [&](State c) { return E(0, c) + W(index.init(c)) + gamma0[c]; });
  if (n > 1) y[1] = pick(1, [&](State c) { return E(1, c) + W(index.trans1(c, y[0])) + beta[1][y[0] * Y + c]; });
  for (std::size_t t = 2; t < n; ++t)
    y[t] = pick(t, [&](State c) { return E(t, c) + W(index.trans2(c, y[t - 1], y[t - 2])) + beta[t][y[t - 1] * Y + c]; });
  return y;
}

inline Prediction make_prediction(std::span<const ContentVector> x, StateSeq states, std::span<const double> w,
                                  const FeatureIndex& index) {
  Prediction p;
  p.score = score_sequence(x, states, w, index);
  p.relationship_sequence = collapse(states);
  p.states = std::move(states);
  return p;
}

}  // namespace detail

/// Exact argmax of score_sequence over all |Y|^l state sequences.
inline Prediction viterbi_decode(std::span<const ContentVector> x, std::span<const double> w, const FeatureIndex& index,
                                 const DecoderConfig& config = {}) {
  return detail::make_prediction(x, detail::decode_states(x, w, index, config, nullptr), w, index);
}

inline Prediction viterbi_decode(const Instance& inst, std::span<const double> w, const FeatureIndex& index,
                                 const DecoderConfig& config = {}) {
  return viterbi_decode(std::span<const ContentVector>(inst.x), w, index, config);
}

/// Exact argmax over the state sequences that agree with every given label.
inline Prediction constrained_viterbi(std::span<const ContentVector> x, const PartialLabels& partial, std::span<const double> w,
                                      const FeatureIndex& index, const DecoderConfig& config = {}) {
  return detail::make_prediction(x, detail::decode_states(x, w, index, config, &partial), w, index);
}

inline Prediction constrained_viterbi(const Instance& inst, std::span<const double> w, const FeatureIndex& index,
                                      const DecoderConfig& config = {}) {
  return constrained_viterbi(std::span<const ContentVector>(inst.x), inst.labels, w, index, config);
}

}  // namespace relseq
