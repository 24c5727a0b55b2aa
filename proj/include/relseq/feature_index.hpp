#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relseq/error.hpp"
#include "relseq/features.hpp"
#include "relseq/state.hpp"

namespace relseq {

using FeatureId = std::uint32_t;

enum class Template { content, init, trans1, trans2 };

/// A feature template instance. For content keys `alpha` is the 1-based
/// content feature number; `states` holds (y_i, y_{i-1}, y_{i-2}) as far as
/// the template uses them.
struct FeatureKey {
  Template kind = Template::content;
  std::size_t alpha = 0;
  std::array<State, 3> states{};

  bool operator==(const FeatureKey&) const = default;
};

/// Dense, fixed layout of every template over a |Y|-state space:
///   content (alpha, y)          33*|Y|
///   init (y0)                   |Y|
///   trans1 (y1, y0)             |Y|^2
///   trans2 (y_i, y_i-1, y_i-2)  |Y|^3
class FeatureIndex {
 public:
  static constexpr int kFormatVersion = 1;

  explicit FeatureIndex(std::size_t num_states = 2) : y_(num_states) {
    if (num_states < 2 || num_states > 255) throw InvalidParameterError("num_states must be in [2, 255]");
  }

  std::size_t num_states() const { return y_; }
  std::size_t size() const { return kNumContentFeatures * y_ + y_ + y_ * y_ + y_ * y_ * y_; }

  FeatureId content(std::size_t alpha_index, State y) const { return static_cast<FeatureId>(alpha_index * y_ + y); }
  FeatureId init(State y0) const { return static_cast<FeatureId>(init_base() + y0); }
  FeatureId trans1(State y1, State y0) const { return static_cast<FeatureId>(trans1_base() + y1 * y_ + y0); }
  FeatureId trans2(State y, State y1, State y2) const {
    return static_cast<FeatureId>(trans2_base() + (y * y_ + y1) * y_ + y2);
  }

  FeatureId id(const FeatureKey& k) const {
    switch (k.kind) {
      case Template::content: return content(k.alpha - 1, k.states[0]);
      case Template::init: return init(k.states[0]);
      case Template::trans1: return trans1(k.states[0], k.states[1]);
      case Template::trans2: return trans2(k.states[0], k.states[1], k.states[2]);
    }
    return 0;
  }

  FeatureKey key(FeatureId id) const {
    if (id >= size()) throw IndexOutOfRangeError("feature id " + std::to_string(id) + " out of range");
    FeatureKey k;
    std::size_t r = id;
    if (r < init_base()) {
      k.kind = Template::content;
      k.alpha = r / y_ + 1;
      k.states[0] = static_cast<State>(r % y_);
    } else if (r < trans1_base()) {
      k.kind = Template::init;
      k.states[0] = static_cast<State>(r - init_base());
    } else if (r < trans2_base()) {
      r -= trans1_base();
      k.kind = Template::trans1;
      k.states[0] = static_cast<State>(r / y_);
      k.states[1] = static_cast<State>(r % y_);
    } else {
      r -= trans2_base();
      k.kind = Template::trans2;
      k.states[0] = static_cast<State>(r / (y_ * y_));
      k.states[1] = static_cast<State>((r / y_) % y_);
      k.states[2] = static_cast<State>(r % y_);
    }
    return k;
  }

  std::string key_name(FeatureId id) const {
    const FeatureKey k = key(id);
    auto s = [](State v) { return std::to_string(static_cast<int>(v)); };
    switch (k.kind) {
      case Template::content: return "content/F" + std::to_string(k.alpha) + "/" + s(k.states[0]);
      case Template::init: return "init/" + s(k.states[0]);
      case Template::trans1: return "trans1/" + s(k.states[0]) + "/" + s(k.states[1]);
      case Template::trans2: return "trans2/" + s(k.states[0]) + "/" + s(k.states[1]) + "/" + s(k.states[2]);
    }
    return {};
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j{{"version", kFormatVersion}, {"num_states", y_}, {"size", size()}};
    j["keys"] = nlohmann::ordered_json::array();
    for (FeatureId i = 0; i < size(); ++i) j["keys"].push_back(key_name(i));
    return j;
  }

  /// Rebuilds and checks that every stored key maps to the same id.
  static FeatureIndex from_json(const nlohmann::json& j) {
    try {
      if (j.at("version").get<int>() != kFormatVersion)
        throw ModelFormatError("feature index version " + j.at("version").dump() + " is not supported");
      FeatureIndex idx(j.at("num_states").get<std::size_t>());
      const auto& keys = j.at("keys");
      if (j.at("size").get<std::size_t>() != idx.size() || keys.size() != idx.size())
        throw ModelFormatError("feature index size mismatch");
      for (FeatureId i = 0; i < idx.size(); ++i)
        if (keys[i].get<std::string>() != idx.key_name(i)) throw ModelFormatError("feature index key mismatch at id " + std::to_string(i));
      return idx;
    } catch (const nlohmann::json::exception& e) {
      throw ModelFormatError(std::string("malformed feature index: ") + e.what());
    }
  }

  bool operator==(const FeatureIndex&) const = default;

 private:
  std::size_t init_base() const { return kNumContentFeatures * y_; }
  std::size_t trans1_base() const { return init_base() + y_; }
  std::size_t trans2_base() const { return trans1_base() + y_ * y_; }

  std::size_t y_;
};

/// Sorted (id, value) pairs with unique ids and no zero values.
class SparseVector {
 public:
  using Entry = std::pair<FeatureId, double>;

  SparseVector() = default;

  static SparseVector from_dense(std::span<const double> dense) {
    SparseVector v;
    for (std::size_t i = 0; i < dense.size(); ++i)
      if (dense[i] != 0.0) v.entries_.emplace_back(static_cast<FeatureId>(i), dense[i]);
    return v;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  double get(FeatureId id) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id, [](const Entry& e, FeatureId k) { return e.first < k; });
    return it != entries_.end() && it->first == id ? it->second : 0.0;
  }

  double dot(std::span<const double> w) const {
    double s = 0.0;
    for (const auto& [id, v] : entries_) s += w[id] * v;
    return s;
  }

  /// w += scale * this
  void add_to(std::span<double> w, double scale = 1.0) const {
    for (const auto& [id, v] : entries_) w[id] += scale * v;
  }

  bool operator==(const SparseVector&) const = default;

 private:
  std::vector<Entry> entries_;
};

/// Phi(x, y): content vectors emitted into (alpha, y_i) slots plus the init,
/// trans1 and trans2 indicators at positions 0, 1 and >= 2.
inline SparseVector joint_features(std::span<const ContentVector> x, std::span<const State> y, const FeatureIndex& index) {
  if (x.size() != y.size())
    throw LengthMismatchError("state sequence length " + std::to_string(y.size()) + " != sequence length " + std::to_string(x.size()));
  std::vector<double> dense(index.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] >= index.num_states()) throw InvalidStateError("state " + std::to_string(y[i]) + " outside state space");
    for (std::size_t a = 0; a < kNumContentFeatures; ++a) dense[index.content(a, y[i])] += x[i][a];
    if (i == 0)
      dense[index.init(y[0])] += 1.0;
    else if (i == 1)
      dense[index.trans1(y[1], y[0])] += 1.0;
    else
      dense[index.trans2(y[i], y[i - 1], y[i - 2])] += 1.0;
  }
  return SparseVector::from_dense(dense);
}

inline SparseVector joint_features(const Instance& inst, std::span<const State> y, const FeatureIndex& index) {
  return joint_features(std::span<const ContentVector>(inst.x), y, index);
}

}  // namespace relseq
