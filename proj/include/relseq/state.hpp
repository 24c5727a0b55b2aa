#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relseq/error.hpp"

namespace relseq {

/// Dense latent state index in [0, num_states). For the binary relationship
/// task index 0 is cooperative (+1) and index 1 is non-cooperative (-1).
using State = std::uint8_t;

inline constexpr State kCooperative = 0;
inline constexpr State kNonCooperative = 1;

using StateSeq = std::vector<State>;
using PartialLabels = std::vector<std::optional<State>>;

/// Converts an annotation value in {+1, -1} to a state index.
inline State state_from_polarity(int polarity) {
  if (polarity == 1) return kCooperative;
  if (polarity == -1) return kNonCooperative;
  throw InvalidStateError("relationship state must be 1 or -1, got " + std::to_string(polarity));
}

inline int polarity_of(State s) {
  if (s == kCooperative) return 1;
  if (s == kNonCooperative) return -1;
  throw InvalidStateError("state index " + std::to_string(s) + " has no binary polarity");
}

inline bool fully_labeled(const PartialLabels& labels) {
  for (const auto& l : labels)
    if (!l) return false;
  return true;
}

inline bool any_labeled(const PartialLabels& labels) {
  for (const auto& l : labels)
    if (l) return true;
  return false;
}

/// Unwraps a fully labeled sequence.
inline StateSeq gold_states(const PartialLabels& labels) {
  StateSeq out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    if (!l) throw ValidationError("sequence is not fully labeled");
    out.push_back(*l);
  }
  return out;
}

inline PartialLabels as_partial(const StateSeq& states) {
  return PartialLabels(states.begin(), states.end());
}

}  // namespace relseq

namespace relseq {

/// Merges runs of equal adjacent states into the relationship sequence.
inline StateSeq collapse(const StateSeq& states) {
  if (states.empty()) throw EmptyInputError("cannot collapse an empty state sequence");
  StateSeq out;
  for (State s : states)
    if (out.empty() || out.back() != s) out.push_back(s);
  return out;
}

}  // namespace relseq
