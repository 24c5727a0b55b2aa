#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relseq/error.hpp"
#include "relseq/random.hpp"
#include "relseq/state.hpp"

namespace relseq {

using EntityId = int;

struct Token {
  std::size_t index = 0;
  std::string surface;
  std::string lemma;
  std::string pos;

  bool operator==(const Token&) const = default;
};

/// head == -1 marks the root.
struct DependencyEdge {
  int head = -1;
  int dependent = 0;
  std::string relation;

  bool operator==(const DependencyEdge&) const = default;
};

/// Token range [start, end).
struct MentionSpan {
  EntityId entity_id = 0;
  std::size_t start = 0;
  std::size_t end = 0;

  bool contains(std::size_t token) const { return token >= start && token < end; }
  bool overlaps(std::size_t s, std::size_t e) const { return start < e && s < end; }
  bool operator==(const MentionSpan&) const = default;
};

struct FrameElement {
  std::string name;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const FrameElement&) const = default;
};

struct FrameAnnotation {
  std::string frame_name;
  std::size_t lexical_unit_token = 0;
  std::vector<FrameElement> elements;

  bool operator==(const FrameAnnotation&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<DependencyEdge> deps;
  std::vector<MentionSpan> mentions;
  std::vector<FrameAnnotation> frames;
  std::size_t doc_position = 0;

  bool mentions_entity(EntityId e) const {
    return std::any_of(mentions.begin(), mentions.end(),
                       [e](const MentionSpan& m) { return m.entity_id == e; });
  }
  bool operator==(const Sentence&) const = default;
};

struct Character {
  EntityId id = 0;
  std::string name;

  bool operator==(const Character&) const = default;
};

struct Document {
  std::string doc_id;
  std::vector<Character> characters;
  std::vector<Sentence> sentences;

  bool operator==(const Document&) const = default;
};

/// Unordered character pair stored canonically with first < second.
struct EntityPair {
  EntityId first = 0;
  EntityId second = 0;

  static EntityPair canonical(EntityId a, EntityId b) {
    return a < b ? EntityPair{a, b} : EntityPair{b, a};
  }
  auto operator<=>(const EntityPair&) const = default;
};

/// The ordered co-occurrence sentences of one character pair in one document.
struct PairSequence {
  std::shared_ptr<const Document> doc;
  EntityPair pair;
  std::vector<std::size_t> sentence_indices;  ///< into doc->sentences, increasing
  PartialLabels labels;                        ///< same length; nullopt = unlabeled

  const std::string& doc_id() const { return doc->doc_id; }
  std::size_t size() const { return sentence_indices.size(); }
  const Sentence& sentence(std::size_t i) const { return doc->sentences.at(sentence_indices.at(i)); }
};

/// Fully / partially / unlabeled partition of a set of sequences. Templated so
/// the same container holds raw pair sequences and featurized instances; `Seq`
/// must expose a `labels` member of type PartialLabels.
template <class Seq>
struct BasicDataset {
  std::vector<Seq> fully_labeled;
  std::vector<Seq> partially_labeled;
  std::vector<Seq> unlabeled;

  std::size_t size() const {
    return fully_labeled.size() + partially_labeled.size() + unlabeled.size();
  }
};

using Dataset = BasicDataset<PairSequence>;

/// Classification is by label coverage, not by where the labels came from.
template <class Seq>
BasicDataset<Seq> partition_by_labels(std::vector<Seq> sequences) {
  BasicDataset<Seq> out;
  for (auto& s : sequences) {
    if (!s.labels.empty() && fully_labeled(s.labels))
      out.fully_labeled.push_back(std::move(s));
    else if (any_labeled(s.labels))
      out.partially_labeled.push_back(std::move(s));
    else
      out.unlabeled.push_back(std::move(s));
  }
  return out;
}

template <class Seq>
struct Fold {
  BasicDataset<Seq> train;
  std::vector<Seq> test;
};

/// Shuffles the fully labeled sequences with a seeded PRNG and deals them
/// round-robin into k test folds. Partial and unlabeled data go to every
/// training split.
template <class Seq>
std::vector<Fold<Seq>> split_folds(const BasicDataset<Seq>& data, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InsufficientDataError("k-fold split needs k >= 2");
  if (data.fully_labeled.size() < k)
    throw InsufficientDataError("k-fold split with k=" + std::to_string(k) + " needs at least k fully labeled sequences, have " +
                                std::to_string(data.fully_labeled.size()));
  std::vector<std::size_t> order(data.fully_labeled.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = make_rng(seed, 0xF01D);
  shuffle(std::span<std::size_t>(order), rng);

  std::vector<std::size_t> fold_of(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) fold_of[order[r]] = r % k;

  std::vector<Fold<Seq>> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    folds[f].train.partially_labeled = data.partially_labeled;
    folds[f].train.unlabeled = data.unlabeled;
  }
  // Dealing in shuffled order keeps each test fold in a seed-determined order.
  for (std::size_t r = 0; r < order.size(); ++r) folds[r % k].test.push_back(data.fully_labeled[order[r]]);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t f = 0; f < k; ++f)
      if (fold_of[i] != f) folds[f].train.fully_labeled.push_back(data.fully_labeled[i]);
  return folds;
}

// ---------------------------------------------------------------------------
// Canonical JSON document format

namespace detail {

inline std::string path_of(std::size_t s) { return "sentences[" + std::to_string(s) + "]"; }

template <class T>
T require(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(where + "." + key + ": wrong type");
  }
}

inline const nlohmann::json& optional_array(const nlohmann::json& j, const char* key, const std::string& where) {
  static const nlohmann::json empty = nlohmann::json::array();
  if (!j.contains(key)) return empty;
  const auto& v = j.at(key);
  if (!v.is_array()) throw ParseError(where + "." + key + ": expected array");
  return v;
}

}  // namespace detail

/// Checks every structural invariant; throws ValidationError naming the field.
inline void validate_document(const Document& doc) {
  if (doc.doc_id.empty()) throw ValidationError("doc_id: must be non-empty");
  if (doc.sentences.empty()) throw ValidationError("sentences: document has no sentences");
  std::set<EntityId> declared;
  for (std::size_t c = 0; c < doc.characters.size(); ++c)
    if (!declared.insert(doc.characters[c].id).second)
      throw ValidationError("characters[" + std::to_string(c) + "].id: duplicate id " + std::to_string(doc.characters[c].id));

  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const Sentence& sent = doc.sentences[s];
    const std::string where = detail::path_of(s);
    if (s > 0 && sent.doc_position <= doc.sentences[s - 1].doc_position)
      throw ValidationError(where + ".doc_position: positions must be strictly increasing");
    const std::size_t n = sent.tokens.size();
    if (n == 0) throw ValidationError(where + ".tokens: sentence has no tokens");
    for (std::size_t t = 0; t < n; ++t) {
      if (sent.tokens[t].index != t) throw ValidationError(where + ".tokens[" + std::to_string(t) + "]: index not contiguous");
      if (sent.tokens[t].surface.empty())
        throw ValidationError(where + ".tokens[" + std::to_string(t) + "].surface: must be non-empty");
    }
    const auto ni = static_cast<int>(n);
    for (std::size_t d = 0; d < sent.deps.size(); ++d) {
      const auto& e = sent.deps[d];
      const std::string dw = where + ".deps[" + std::to_string(d) + "]";
      if (e.head < -1 || e.head >= ni) throw ValidationError(dw + ".head: out of range");
      if (e.dependent < 0 || e.dependent >= ni) throw ValidationError(dw + ".dep: out of range");
      if (e.relation.empty()) throw ValidationError(dw + ".rel: must be non-empty");
    }
    for (std::size_t m = 0; m < sent.mentions.size(); ++m) {
      const auto& span = sent.mentions[m];
      const std::string mw = where + ".mentions[" + std::to_string(m) + "]";
      if (!(span.start < span.end && span.end <= n)) throw ValidationError(mw + ": invalid token range");
      if (!declared.count(span.entity_id))
        throw ValidationError(mw + ".entity: undeclared character " + std::to_string(span.entity_id));
    }
    for (std::size_t f = 0; f < sent.frames.size(); ++f) {
      const auto& fr = sent.frames[f];
      const std::string fw = where + ".frames[" + std::to_string(f) + "]";
      if (fr.frame_name.empty()) throw ValidationError(fw + ".name: must be non-empty");
      if (fr.lexical_unit_token >= n) throw ValidationError(fw + ".lu: out of range");
      for (std::size_t el = 0; el < fr.elements.size(); ++el) {
        const auto& e = fr.elements[el];
        const std::string ew = fw + ".elements[" + std::to_string(el) + "]";
        if (e.name.empty()) throw ValidationError(ew + ".name: must be non-empty");
        if (!(e.start < e.end && e.end <= n)) throw ValidationError(ew + ": invalid token range");
      }
    }
  }
}

/// Parses (without validating) a canonical document. Sentence positions are
/// the array order.
inline Document document_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("document: expected a JSON object");
  Document doc;
  doc.doc_id = detail::require<std::string>(j, "doc_id", "document");
  for (const auto& c : detail::optional_array(j, "characters", "document"))
    doc.characters.push_back({detail::require<EntityId>(c, "id", "characters"), detail::require<std::string>(c, "name", "characters")});
  if (!j.contains("sentences") || !j.at("sentences").is_array()) throw ParseError("document: missing array 'sentences'");
  std::size_t pos = 0;
  for (const auto& js : j.at("sentences")) {
    const std::string where = detail::path_of(pos);
    Sentence s;
    s.doc_position = pos++;
    if (!js.contains("tokens") || !js.at("tokens").is_array()) throw ParseError(where + ": missing array 'tokens'");
    for (const auto& jt : js.at("tokens")) {
      Token t;
      t.index = s.tokens.size();
      t.surface = detail::require<std::string>(jt, "surface", where + ".tokens");
      t.lemma = jt.value("lemma", std::string{});
      t.pos = jt.value("pos", std::string{});
      s.tokens.push_back(std::move(t));
    }
    for (const auto& jd : detail::optional_array(js, "deps", where))
      s.deps.push_back({detail::require<int>(jd, "head", where + ".deps"), detail::require<int>(jd, "dep", where + ".deps"),
                        detail::require<std::string>(jd, "rel", where + ".deps")});
    for (const auto& jm : detail::optional_array(js, "mentions", where))
      s.mentions.push_back({detail::require<EntityId>(jm, "entity", where + ".mentions"),
                            detail::require<std::size_t>(jm, "start", where + ".mentions"),
                            detail::require<std::size_t>(jm, "end", where + ".mentions")});
    for (const auto& jf : detail::optional_array(js, "frames", where)) {
      FrameAnnotation f;
      f.frame_name = detail::require<std::string>(jf, "name", where + ".frames");
      f.lexical_unit_token = detail::require<std::size_t>(jf, "lu", where + ".frames");
      for (const auto& je : detail::optional_array(jf, "elements", where + ".frames"))
        f.elements.push_back({detail::require<std::string>(je, "name", where + ".frames.elements"),
                              detail::require<std::size_t>(je, "start", where + ".frames.elements"),
                              detail::require<std::size_t>(je, "end", where + ".frames.elements")});
      s.frames.push_back(std::move(f));
    }
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

inline nlohmann::ordered_json document_to_json(const Document& doc) {
  using oj = nlohmann::ordered_json;
  oj j;
  j["doc_id"] = doc.doc_id;
  j["characters"] = oj::array();
  for (const auto& c : doc.characters) j["characters"].push_back({{"id", c.id}, {"name", c.name}});
  j["sentences"] = oj::array();
  for (const auto& s : doc.sentences) {
    oj js;
    js["tokens"] = oj::array();
    for (const auto& t : s.tokens) js["tokens"].push_back({{"surface", t.surface}, {"lemma", t.lemma}, {"pos", t.pos}});
    js["deps"] = oj::array();
    for (const auto& d : s.deps) js["deps"].push_back({{"head", d.head}, {"dep", d.dependent}, {"rel", d.relation}});
    js["mentions"] = oj::array();
    for (const auto& m : s.mentions) js["mentions"].push_back({{"entity", m.entity_id}, {"start", m.start}, {"end", m.end}});
    js["frames"] = oj::array();
    for (const auto& f : s.frames) {
      oj jf{{"name", f.frame_name}, {"lu", f.lexical_unit_token}, {"elements", oj::array()}};
      for (const auto& e : f.elements) jf["elements"].push_back({{"name", e.name}, {"start", e.start}, {"end", e.end}});
      js["frames"].push_back(std::move(jf));
    }
    j["sentences"].push_back(std::move(js));
  }
  return j;
}

inline Document parse_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  Document doc = document_from_json(j);
  validate_document(doc);
  return doc;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

inline Document load_document(const std::filesystem::path& path) {
  try {
    return parse_document(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

inline std::string serialize_document(const Document& doc) { return document_to_json(doc).dump(1) + "\n"; }

/// Loads every *.json file of a directory in filename order.
inline std::vector<std::shared_ptr<const Document>> load_documents(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("documents directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no documents found in " + dir.string());
  std::vector<std::shared_ptr<const Document>> docs;
  std::set<std::string> ids;
  for (const auto& f : files) {
    auto doc = std::make_shared<const Document>(load_document(f));
    if (!ids.insert(doc->doc_id).second) throw ValidationError(f.string() + ": duplicate doc_id " + doc->doc_id);
    docs.push_back(std::move(doc));
  }
  return docs;
}

// ---------------------------------------------------------------------------
// Pair sequences

/// One sequence per unordered character pair co-occurring in at least
/// `min_cooccurrence` sentences, ordered by pair.
inline std::vector<PairSequence> extract_pair_sequences(const std::shared_ptr<const Document>& doc,
                                                        std::size_t min_cooccurrence = 5) {
  std::map<EntityPair, std::vector<std::size_t>> occurrences;
  for (std::size_t s = 0; s < doc->sentences.size(); ++s) {
    std::set<EntityId> present;
    for (const auto& m : doc->sentences[s].mentions) present.insert(m.entity_id);
    for (auto a = present.begin(); a != present.end(); ++a)
      for (auto b = std::next(a); b != present.end(); ++b) occurrences[EntityPair{*a, *b}].push_back(s);
  }
  std::vector<PairSequence> out;
  for (auto& [pair, sentences] : occurrences) {
    if (sentences.size() < std::max<std::size_t>(min_cooccurrence, 1)) continue;
    PairSequence seq{doc, pair, std::move(sentences), {}};
    seq.labels.assign(seq.sentence_indices.size(), std::nullopt);
    out.push_back(std::move(seq));
  }
  return out;
}

inline std::vector<PairSequence> extract_pair_sequences(const std::vector<std::shared_ptr<const Document>>& docs,
                                                        std::size_t min_cooccurrence = 5) {
  std::vector<PairSequence> out;
  for (const auto& d : docs) {
    auto seqs = extract_pair_sequences(d, min_cooccurrence);
    std::move(seqs.begin(), seqs.end(), std::back_inserter(out));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Annotations (JSON Lines)

struct AnnotationRecord {
  std::string doc_id;
  EntityPair pair;
  std::size_t seq_index = 0;
  int state = 0;  ///< +1 or -1
};

inline nlohmann::ordered_json annotation_to_json(const AnnotationRecord& r) {
  return {{"doc_id", r.doc_id}, {"pair", {r.pair.first, r.pair.second}}, {"seq_index", r.seq_index}, {"state", r.state}};
}

inline std::vector<AnnotationRecord> parse_annotations(std::istream& in, const std::string& source = "annotations") {
  std::vector<AnnotationRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where + ": malformed JSON: " + e.what());
    }
    AnnotationRecord r;
    r.doc_id = detail::require<std::string>(j, "doc_id", where);
    auto pair = detail::require<std::vector<EntityId>>(j, "pair", where);
    if (pair.size() != 2 || pair[0] == pair[1]) throw ParseError(where + ".pair: expected two distinct ids");
    r.pair = EntityPair::canonical(pair[0], pair[1]);
    r.seq_index = detail::require<std::size_t>(j, "seq_index", where);
    r.state = detail::require<int>(j, "state", where);
    out.push_back(std::move(r));
  }
  return out;
}

/// Attaches labels to the sequences they reference and partitions the result.
inline Dataset attach_annotations(const std::vector<AnnotationRecord>& records, std::vector<PairSequence> sequences) {
  std::map<std::pair<std::string, EntityPair>, std::size_t> lookup;
  for (std::size_t i = 0; i < sequences.size(); ++i) lookup[{sequences[i].doc_id(), sequences[i].pair}] = i;
  for (const auto& r : records) {
    auto it = lookup.find({r.doc_id, r.pair});
    if (it == lookup.end())
      throw UnknownSequenceError("no sequence for doc " + r.doc_id + " pair (" + std::to_string(r.pair.first) + "," +
                                 std::to_string(r.pair.second) + ")");
    PairSequence& seq = sequences[it->second];
    if (r.seq_index >= seq.size())
      throw IndexOutOfRangeError("seq_index " + std::to_string(r.seq_index) + " out of range for sequence of length " +
                                 std::to_string(seq.size()) + " (doc " + r.doc_id + ")");
    const State s = state_from_polarity(r.state);
    auto& slot = seq.labels[r.seq_index];
    if (slot && *slot != s)
      throw ValidationError("conflicting labels for doc " + r.doc_id + " seq_index " + std::to_string(r.seq_index));
    slot = s;
  }
  return partition_by_labels(std::move(sequences));
}

inline Dataset load_annotations(const std::filesystem::path& path, std::vector<PairSequence> sequences) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return attach_annotations(parse_annotations(in, path.string()), std::move(sequences));
}

}  // namespace relseq
