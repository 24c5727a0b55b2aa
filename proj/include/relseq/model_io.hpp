#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "relseq/corpus.hpp"
#include "relseq/decoder.hpp"
#include "relseq/feature_index.hpp"

namespace relseq {

inline constexpr const char* kModelFormat = "relseq-model";
inline constexpr int kModelVersion = 1;

/// A trained sequence model as stored on disk.
struct SavedModel {
  FeatureIndex index{2};
  std::vector<double> weights;  ///< averaged weights
  DecoderConfig decoder;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

/// 64-bit FNV-1a; used to fingerprint configuration echoes.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 0xF];
  return out;
}

inline nlohmann::ordered_json model_to_json(const SavedModel& m) {
  nlohmann::ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["feature_index"] = m.index.to_json();
  j["decoder"] = {{"num_states", m.decoder.num_states}, {"tie_rule", m.decoder.preference()}};
  j["weights"] = m.weights;
  j["metadata"] = m.metadata;
  return j;
}

inline SavedModel model_from_json(const nlohmann::json& j) {
  SavedModel m;
  try {
    if (j.at("format").get<std::string>() != kModelFormat) throw ModelFormatError("not a relseq model file");
    if (j.at("version").get<int>() != kModelVersion)
      throw ModelFormatError("model version " + j.at("version").dump() + " is not supported");
    m.index = FeatureIndex::from_json(j.at("feature_index"));
    m.decoder.num_states = j.at("decoder").at("num_states").get<std::size_t>();
    m.decoder.tie_rule = j.at("decoder").at("tie_rule").get<std::vector<State>>();
    m.decoder.validate();
    m.weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("metadata")) m.metadata = j.at("metadata");
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("malformed model file: ") + e.what());
  }
  if (m.weights.size() != m.index.size()) throw ModelFormatError("weight count does not match the feature index");
  if (m.decoder.num_states != m.index.num_states()) throw ModelFormatError("decoder and feature index disagree on |Y|");
  return m;
}

inline void save_model(const std::filesystem::path& path, const SavedModel& m) {
  write_file(path, model_to_json(m).dump(1) + "\n");
}

inline SavedModel load_model(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFormatError(path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace relseq
