#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "relseq/corpus.hpp"
#include "relseq/lexicons.hpp"

namespace relseq {

// ---------------------------------------------------------------------------
// Sphere of actions

/// A verb with the characters acting through it and upon it.
struct VerbGroup {
  std::size_t verb_token = 0;
  std::string lemma;
  std::set<EntityId> agents;
  std::set<EntityId> patients;
  bool negated = false;
  std::vector<std::size_t> adverb_tokens;  ///< advmod dependents

  bool has_agent(EntityId e) const { return agents.count(e) > 0; }
  bool has_patient(EntityId e) const { return patients.count(e) > 0; }
  bool involves(EntityId e) const { return has_agent(e) || has_patient(e); }
};

inline bool is_verb_tag(const std::string& pos) { return pos.size() >= 2 && pos[0] == 'V' && pos[1] == 'B'; }

namespace detail {

enum class ActionRole { none, agent, patient, negation, adverb, conjunct };

// Stanford basic dependencies, plus the UD spellings of the same relations.
inline ActionRole role_of(const std::string& rel) {
  const std::string r = to_lower(rel);
  if (r == "nsubj" || r == "agent" || r == "obl:agent") return ActionRole::agent;
  if (r == "dobj" || r == "obj" || r == "nsubjpass" || r == "nsubj:pass") return ActionRole::patient;
  if (r == "neg") return ActionRole::negation;
  if (r == "advmod") return ActionRole::adverb;
  if (r == "conj") return ActionRole::conjunct;
  return ActionRole::none;
}

inline std::set<EntityId> entities_at(const Sentence& s, std::size_t token) {
  std::set<EntityId> out;
  for (const auto& m : s.mentions)
    if (m.contains(token)) out.insert(m.entity_id);
  return out;
}

}  // namespace detail

/// One VerbGroup per verbal token, in token order. A verb with no agents of
/// its own takes those of its conj partners (likewise patients); the
/// inheritance is a single step over the partners' own sets.
inline std::vector<VerbGroup> analyze_actions(const Sentence& sentence) {
  const std::size_t n = sentence.tokens.size();
  std::vector<int> group_of(n, -1);
  std::vector<VerbGroup> groups;
  for (std::size_t t = 0; t < n; ++t) {
    if (!is_verb_tag(sentence.tokens[t].pos)) continue;
    group_of[t] = static_cast<int>(groups.size());
    VerbGroup g;
    g.verb_token = t;
    g.lemma = to_lower(sentence.tokens[t].lemma.empty() ? sentence.tokens[t].surface : sentence.tokens[t].lemma);
    groups.push_back(std::move(g));
  }

  std::vector<std::set<std::size_t>> partners(groups.size());
  for (const auto& e : sentence.deps) {
    if (e.head < 0) continue;
    const int gi = group_of[static_cast<std::size_t>(e.head)];
    if (gi < 0) continue;
    VerbGroup& g = groups[static_cast<std::size_t>(gi)];
    const auto dep = static_cast<std::size_t>(e.dependent);
    switch (detail::role_of(e.relation)) {
      case detail::ActionRole::agent: {
        auto ents = detail::entities_at(sentence, dep);
        g.agents.insert(ents.begin(), ents.end());
        break;
      }
      case detail::ActionRole::patient: {
        auto ents = detail::entities_at(sentence, dep);
        g.patients.insert(ents.begin(), ents.end());
        break;
      }
      case detail::ActionRole::negation: g.negated = true; break;
      case detail::ActionRole::adverb: g.adverb_tokens.push_back(dep); break;
      case detail::ActionRole::conjunct:
        if (const int gj = group_of[dep]; gj >= 0 && gj != gi) {
          partners[static_cast<std::size_t>(gi)].insert(static_cast<std::size_t>(gj));
          partners[static_cast<std::size_t>(gj)].insert(static_cast<std::size_t>(gi));
        }
        break;
      case detail::ActionRole::none: break;
    }
  }

  const std::vector<VerbGroup> own = groups;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t p : partners[g]) {
      if (own[g].agents.empty()) groups[g].agents.insert(own[p].agents.begin(), own[p].agents.end());
      if (own[g].patients.empty()) groups[g].patients.insert(own[p].patients.begin(), own[p].patients.end());
    }
    std::sort(groups[g].adverb_tokens.begin(), groups[g].adverb_tokens.end());
  }
  return groups;
}

// ---------------------------------------------------------------------------
// Content features F1..F33

inline constexpr std::size_t kNumContentFeatures = 33;

/// Per-sentence content evidence. Slot k-1 holds feature Fk.
///
/// Layout of each six-way polarity block (F2-F7, F8-F13, F14-F19, F20-F25):
/// connotation +/-, sentiment +/-, prior polarity +/-.
struct ContentVector {
  std::array<double, kNumContentFeatures> values{};

  double& f(std::size_t k) { return values.at(k - 1); }
  double f(std::size_t k) const { return values.at(k - 1); }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const ContentVector&) const = default;
};

namespace feature_slot {
inline constexpr std::size_t kAreTeam = 1;
inline constexpr std::size_t kActsTogether = 2;
inline constexpr std::size_t kSurrogateActs = 8;
inline constexpr std::size_t kAdverbsTogether = 14;
inline constexpr std::size_t kSurrogateAdverbs = 20;
inline constexpr std::size_t kLexicalPositive = 26;
inline constexpr std::size_t kLexicalNegative = 27;
inline constexpr std::size_t kFramesWithPair = 28;  ///< positive, negative, relationship
inline constexpr std::size_t kFramesAny = 31;       ///< positive, negative, relationship
}  // namespace feature_slot

namespace detail {

/// Adds one token's polarity under each lexicon into a six-way block.
inline void count_polarities(ContentVector& cv, std::size_t block, const Token& token, bool negated, const Lexicons& lex) {
  const PolarityLexicon* order[3] = {&lex.connotation, &lex.sentiment, &lex.prior_polarity};
  for (std::size_t l = 0; l < 3; ++l) {
    if (auto p = effective_polarity(*order[l], token, negated)) cv.f(block + 2 * l + (*p > 0 ? 0 : 1)) += 1;
  }
}

inline std::size_t frame_offset(FrameCategory c) {
  switch (c) {
    case FrameCategory::positive: return 0;
    case FrameCategory::negative: return 1;
    default: return 2;
  }
}

}  // namespace detail

/// Content features of one sentence for the pair (a, b).
inline ContentVector content_features(const Sentence& sentence, EntityPair pair, const Lexicons& lex) {
  using namespace feature_slot;
  ContentVector cv;
  const EntityId a = pair.first, b = pair.second;
  const bool third_character = std::any_of(sentence.mentions.begin(), sentence.mentions.end(),
                                           [&](const MentionSpan& m) { return m.entity_id != a && m.entity_id != b; });

  for (const VerbGroup& g : analyze_actions(sentence)) {
    if ((g.has_agent(a) && g.has_agent(b)) || (g.has_patient(a) && g.has_patient(b))) cv.f(kAreTeam) = 1;

    const bool together = (g.has_agent(a) && g.has_patient(b)) || (g.has_agent(b) && g.has_patient(a));
    const bool surrogate = !together && !third_character && (g.involves(a) != g.involves(b));
    if (!together && !surrogate) continue;
    const std::size_t verb_block = together ? kActsTogether : kSurrogateActs;
    const std::size_t adverb_block = together ? kAdverbsTogether : kSurrogateAdverbs;
    detail::count_polarities(cv, verb_block, sentence.tokens[g.verb_token], g.negated, lex);
    for (std::size_t adv : g.adverb_tokens) detail::count_polarities(cv, adverb_block, sentence.tokens[adv], g.negated, lex);
  }

  // Words strictly between every cross-entity mention pair; overlapping
  // windows count a token once per window.
  for (const auto& ma : sentence.mentions) {
    if (ma.entity_id != a) continue;
    for (const auto& mb : sentence.mentions) {
      if (mb.entity_id != b) continue;
      const MentionSpan& first = ma.start <= mb.start ? ma : mb;
      const MentionSpan& second = ma.start <= mb.start ? mb : ma;
      for (std::size_t t = first.end; t < second.start; ++t) {
        const Token& tok = sentence.tokens[t];
        if (lex.stopwords.contains(tok.surface)) continue;
        if (auto p = lex.connotation.lookup(tok)) cv.f(*p > 0 ? kLexicalPositive : kLexicalNegative) += 1;
      }
    }
  }

  for (const auto& frame : sentence.frames) {
    auto cat = classify_frame(lex.frames, lex.connotation, frame, sentence);
    if (!cat) continue;
    const std::size_t off = detail::frame_offset(*cat);
    cv.f(kFramesAny + off) += 1;
    const FrameEntry* entry = lex.frames.find(frame.frame_name);
    bool with_pair = false;
    for (const auto& el : frame.elements) {
      if (!entry->relevant_elements.count(normalize_name(el.name))) continue;
      for (const auto& m : sentence.mentions)
        if ((m.entity_id == a || m.entity_id == b) && m.overlaps(el.start, el.end)) with_pair = true;
    }
    if (with_pair) cv.f(kFramesWithPair + off) += 1;
  }
  return cv;
}

// ---------------------------------------------------------------------------
// Model-level sequences

/// A featurized sequence: the decoder's input x plus its (partial) labels.
struct Instance {
  std::string id;
  std::vector<ContentVector> x;
  PartialLabels labels;

  std::size_t size() const { return x.size(); }
};

using InstanceSet = BasicDataset<Instance>;

inline std::string sequence_id(const PairSequence& seq) {
  return seq.doc_id() + ":" + std::to_string(seq.pair.first) + "-" + std::to_string(seq.pair.second);
}

inline Instance featurize(const PairSequence& seq, const Lexicons& lex) {
  Instance inst;
  inst.id = sequence_id(seq);
  inst.labels = seq.labels;
  inst.x.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) inst.x.push_back(content_features(seq.sentence(i), seq.pair, lex));
  return inst;
}

inline std::vector<Instance> featurize(const std::vector<PairSequence>& seqs, const Lexicons& lex) {
  std::vector<Instance> out;
  out.reserve(seqs.size());
  for (const auto& s : seqs) out.push_back(featurize(s, lex));
  return out;
}

inline InstanceSet featurize(const Dataset& data, const Lexicons& lex) {
  return {featurize(data.fully_labeled, lex), featurize(data.partially_labeled, lex), featurize(data.unlabeled, lex)};
}

/// Debug dump: doc_id, pair, seq_index, F1..F33.
inline void write_feature_dump(std::ostream& out, const std::vector<PairSequence>& seqs, const Lexicons& lex) {
  out << "doc_id\tpair\tseq_index";
  for (std::size_t k = 1; k <= kNumContentFeatures; ++k) out << "\tF" << k;
  out << '\n';
  for (const auto& seq : seqs) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const ContentVector cv = content_features(seq.sentence(i), seq.pair, lex);
      out << seq.doc_id() << '\t' << seq.pair.first << '-' << seq.pair.second << '\t' << i;
      for (double v : cv.values) out << '\t' << v;
      out << '\n';
    }
  }
}

}  // namespace relseq
