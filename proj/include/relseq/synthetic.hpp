#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "relseq/corpus.hpp"
#include "relseq/lexicons.hpp"
#include "relseq/random.hpp"

namespace relseq {

/// Generator parameters. Gold states follow a sticky two-state Markov chain
/// with a uniform initial state; each sentence carries evidence items whose
/// polarity matches the state with probability 1 - noise.
struct SynthSpec {
  std::size_t num_sequences = 200;  ///< fully labeled
  std::size_t num_partial = 0;
  std::size_t num_unlabeled = 0;
  double partial_mask_rate = 0.5;  ///< fraction of positions left unlabeled in partial sequences
  std::size_t min_length = 5;
  std::size_t max_length = 12;
  double persistence = 0.9;
  double noise = 0.3;
  std::size_t min_evidence = 1;
  std::size_t max_evidence = 2;
  double third_character_rate = 0.1;  ///< sentences that also mention a bystander
  double negation_rate = 0.15;        ///< evidence phrased as a negated opposite verb

  void validate() const {
    if (num_sequences + num_partial + num_unlabeled == 0) throw InvalidParameterError("generator needs at least one sequence");
    if (!(persistence > 0.0 && persistence <= 1.0)) throw InvalidParameterError("persistence must be in (0, 1]");
    if (!(noise >= 0.0 && noise < 0.5)) throw InvalidParameterError("noise must be in [0, 0.5)");
    if (min_length < 1 || min_length > max_length) throw InvalidParameterError("need 1 <= min_length <= max_length");
    if (min_evidence > max_evidence) throw InvalidParameterError("need min_evidence <= max_evidence");
    if (!(partial_mask_rate > 0.0 && partial_mask_rate < 1.0)) throw InvalidParameterError("partial_mask_rate must be in (0, 1)");
    if (num_partial > 0 && min_length < 2) throw InvalidParameterError("partial sequences need length >= 2");
    for (double r : {third_character_rate, negation_rate})
      if (!(r >= 0.0 && r <= 1.0)) throw InvalidParameterError("rates must be in [0, 1]");
  }
};

/// Lexicon files shipped with a synthetic corpus, as file contents.
struct SyntheticLexiconFiles {
  std::string connotation, sentiment, prior_polarity, frames, stopwords;
};

struct SyntheticCorpus {
  std::vector<std::shared_ptr<const Document>> documents;
  std::vector<AnnotationRecord> annotations;
  SyntheticLexiconFiles lexicon_files;
  Lexicons lexicons;
  Dataset dataset;
  /// Complete gold states per document (partially labeled ones included).
  std::vector<StateSeq> hidden_gold;
};

namespace synth {

struct Word {
  const char* surface;
  const char* lemma;
};

inline const std::vector<Word>& verbs(bool positive) {
  static const std::vector<Word> pos = {{"helps", "help"},     {"praises", "praise"}, {"comforts", "comfort"},
                                        {"rescues", "rescue"}, {"thanks", "thank"},   {"protects", "protect"}};
  static const std::vector<Word> neg = {{"betrays", "betray"}, {"insults", "insult"},   {"deceives", "deceive"},
                                        {"shuns", "shun"},     {"threatens", "threaten"}, {"abandons", "abandon"}};
  return positive ? pos : neg;
}

inline const std::vector<Word>& adjectives(bool positive) {
  static const std::vector<Word> pos = {{"kind", "kind"}, {"loyal", "loyal"}, {"friendly", "friendly"}, {"gentle", "gentle"}};
  static const std::vector<Word> neg = {{"cruel", "cruel"}, {"hostile", "hostile"}, {"bitter", "bitter"}, {"rude", "rude"}};
  return positive ? pos : neg;
}

inline const std::vector<Word>& adverbs(bool positive) {
  static const std::vector<Word> pos = {{"nobly", "nobly"}, {"warmly", "warmly"}, {"gladly", "gladly"}};
  static const std::vector<Word> neg = {{"coldly", "coldly"}, {"angrily", "angrily"}, {"cruelly", "cruelly"}};
  return positive ? pos : neg;
}

/// (frame, lexical unit, element for the actor, element for the target)
struct FrameUse {
  const char* frame;
  Word lu;
  const char* actor;
  const char* target;
};

inline const std::vector<FrameUse>& frames(bool positive) {
  static const std::vector<FrameUse> pos = {{"forgiveness", {"pardons", "pardon"}, "judge", "evaluee"},
                                            {"supporting", {"backs", "back"}, "supporter", "supported"},
                                            {"cause_bodily_experience", {"tickles", "tickle"}, "agent", "experiencer"}};
  static const std::vector<FrameUse> neg = {{"killing", {"slays", "slay"}, "killer", "victim"},
                                            {"attack", {"assaults", "assault"}, "assailant", "victim"},
                                            {"cause_bodily_experience", {"pinches", "pinch"}, "agent", "experiencer"}};
  return positive ? pos : neg;
}

inline const char* const kNames[] = {"Tom",   "Becky", "Huck",  "Joe",  "Polly", "Sid",  "Mary",  "Amy",
                                      "Muff",  "Alfred", "Ben",  "Jim",  "Susan", "Walter", "Emma", "Ruth"};

inline const char* const kStopwords[] = {"a",    "an",    "and",  "as",    "at",   "by",   "does", "for", "in",
                                         "is",   "it",    "not",  "of",    "on",   "the",  "to",   "towards",
                                         "was",  "while", "with", "he",    "she",  "they", "his",  "her", ".", ","};

class SentenceBuilder {
 public:
  std::size_t add(const std::string& surface, const std::string& lemma, const std::string& pos) {
    s_.tokens.push_back({s_.tokens.size(), surface, lemma, pos});
    return s_.tokens.size() - 1;
  }
  std::size_t mention(EntityId e, const std::string& name) {
    const std::size_t t = add(name, name, "NNP");
    s_.mentions.push_back({e, t, t + 1});
    return t;
  }
  void dep(std::size_t head, std::size_t dependent, const std::string& rel) {
    s_.deps.push_back({static_cast<int>(head), static_cast<int>(dependent), rel});
  }
  void frame(const std::string& name, std::size_t lu, std::vector<FrameElement> elements) {
    s_.frames.push_back({name, lu, std::move(elements)});
  }
  bool has(EntityId e) const { return s_.mentions_entity(e); }
  bool empty() const { return s_.tokens.empty(); }
  Sentence finish(std::size_t position) {
    add(".", ".", ".");
    s_.doc_position = position;
    return std::move(s_);
  }

 private:
  Sentence s_;
};

struct Cast {
  EntityId a, b, c;
  std::string name_a, name_b, name_c;
};

inline void connective(SentenceBuilder& sb) {
  if (!sb.empty()) sb.add("and", "and", "CC");
}

/// One evidence clause of the given polarity between the pair.
inline void evidence_clause(SentenceBuilder& sb, Rng& rng, const Cast& cast, bool positive, const SynthSpec& spec) {
  connective(sb);
  const bool a_first = bernoulli(rng, 0.5);
  const EntityId actor = a_first ? cast.a : cast.b, target = a_first ? cast.b : cast.a;
  const std::string& actor_name = a_first ? cast.name_a : cast.name_b;
  const std::string& target_name = a_first ? cast.name_b : cast.name_a;
  auto pick = [&](const auto& list) -> const auto& { return list[uniform_index(rng, list.size())]; };

  switch (uniform_index(rng, 4)) {
    case 0: {  // direct action, optionally adverb-modified or negated
      const std::size_t s = sb.mention(actor, actor_name);
      const bool negate = bernoulli(rng, spec.negation_rate);
      std::size_t neg = 0;
      if (negate) {
        sb.add("does", "do", "VBZ");
        neg = sb.add("not", "not", "RB");
      }
      std::size_t adv = 0;
      const bool with_adverb = !negate && bernoulli(rng, 0.3);
      if (with_adverb) {
        const Word& w = pick(adverbs(positive));
        adv = sb.add(w.surface, w.lemma, "RB");
      }
      const Word& v = pick(verbs(negate ? !positive : positive));
      const std::size_t verb = sb.add(v.surface, v.lemma, "VBZ");
      const std::size_t o = sb.mention(target, target_name);
      sb.dep(verb, s, "nsubj");
      sb.dep(verb, o, "dobj");
      if (negate) sb.dep(verb, neg, "neg");
      if (with_adverb) sb.dep(verb, adv, "advmod");
      break;
    }
    case 1: {  // lexical: "<A> is <adj> towards <B>"
      const std::size_t s = sb.mention(actor, actor_name);
      const std::size_t cop = sb.add("is", "be", "VBZ");
      const Word& w = pick(adjectives(positive));
      sb.add(w.surface, w.lemma, "JJ");
      sb.add("towards", "towards", "IN");
      sb.mention(target, target_name);
      sb.dep(cop, s, "nsubj");
      break;
    }
    case 2: {  // frame-semantic
      const FrameUse& f = pick(frames(positive));
      const std::size_t s = sb.mention(actor, actor_name);
      const std::size_t lu = sb.add(f.lu.surface, f.lu.lemma, "VBZ");
      const std::size_t o = sb.mention(target, target_name);
      sb.dep(lu, s, "nsubj");
      sb.dep(lu, o, "dobj");
      sb.frame(f.frame, lu, {{f.actor, s, s + 1}, {f.target, o, o + 1}});
      break;
    }
    default: {  // one-sided action, the other character only present
      const std::size_t s = sb.mention(actor, actor_name);
      const Word& v = pick(verbs(positive));
      const std::size_t verb = sb.add(v.surface, v.lemma, "VBZ");
      sb.add("while", "while", "IN");
      const std::size_t o = sb.mention(target, target_name);
      const std::size_t wait = sb.add("waits", "wait", "VBZ");
      sb.dep(verb, s, "nsubj");
      sb.dep(wait, o, "nsubj");
      break;
    }
  }
}

inline void neutral_clause(SentenceBuilder& sb, const Cast& cast, EntityId who) {
  connective(sb);
  const bool is_a = who == cast.a;
  const std::size_t s = sb.mention(who, is_a ? cast.name_a : who == cast.b ? cast.name_b : cast.name_c);
  const std::size_t v = sb.add("talks", "talk", "VBZ");
  sb.dep(v, s, "nsubj");
}

inline std::string build_lexicon_tsv(bool (*include)(std::size_t), bool with_adjectives, bool with_frame_lus) {
  std::ostringstream out;
  out << "# synthetic lexicon\n";
  for (bool positive : {true, false}) {
    const char* pol = positive ? "+1" : "-1";
    std::size_t i = 0;
    for (const auto& w : verbs(positive))
      if (include(i++)) out << w.lemma << '\t' << pol << '\n';
    i = 0;
    for (const auto& w : adverbs(positive))
      if (include(i++)) out << w.lemma << '\t' << pol << '\n';
    if (with_adjectives)
      for (const auto& w : adjectives(positive)) out << w.lemma << '\t' << pol << '\n';
    if (with_frame_lus) out << frames(positive)[2].lu.lemma << '\t' << pol << '\n';
  }
  return out.str();
}

inline SyntheticLexiconFiles lexicon_files() {
  SyntheticLexiconFiles f;
  f.connotation = build_lexicon_tsv([](std::size_t) { return true; }, true, true);
  f.sentiment = build_lexicon_tsv([](std::size_t i) { return i % 2 == 0; }, true, false);
  f.prior_polarity = build_lexicon_tsv([](std::size_t i) { return i % 3 != 2; }, false, false);
  f.frames =
      "killing\tnegative\tkiller,victim\n"
      "attack\tnegative\tassailant,victim\n"
      "forgiveness\tpositive\tjudge,evaluee\n"
      "supporting\tpositive\tsupporter,supported\n"
      "cause_bodily_experience\tambiguous\tagent,experiencer\n"
      "friendly_or_hostile\tambiguous\tside_1,side_2,sides\n"
      "kinship\trelationship\talter,ego,relatives\n"
      "subordinates_and_superiors\trelationship\tsuperior,subordinate\n";
  std::ostringstream sw;
  for (const char* w : kStopwords) sw << w << '\n';
  f.stopwords = sw.str();
  return f;
}

inline Lexicons parse_lexicon_files(const SyntheticLexiconFiles& f) {
  Lexicons lex;
  std::istringstream c(f.connotation), s(f.sentiment), p(f.prior_polarity), fr(f.frames), sw(f.stopwords);
  lex.connotation = parse_polarity_lexicon(c, "connotation");
  lex.sentiment = parse_polarity_lexicon(s, "sentiment");
  lex.prior_polarity = parse_polarity_lexicon(p, "prior_polarity");
  lex.frames = parse_frame_lexicon(fr);
  lex.stopwords = parse_stopwords(sw);
  return lex;
}

}  // namespace synth

/// Generates a corpus with one document per sequence. Every pair sentence
/// mentions both characters; a few extra sentences mention only one of them
/// (with a bystander) and never reach the co-occurrence threshold.
inline SyntheticCorpus generate_synthetic(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  SyntheticCorpus out;
  out.lexicon_files = synth::lexicon_files();
  out.lexicons = synth::parse_lexicon_files(out.lexicon_files);

  const std::size_t total = spec.num_sequences + spec.num_partial + spec.num_unlabeled;
  std::vector<PairSequence> sequences;
  constexpr std::size_t kNumNames = std::size(synth::kNames);
  for (std::size_t d = 0; d < total; ++d) {
    Rng rng = make_rng(seed, d);
    const std::size_t len = spec.min_length + uniform_index(rng, spec.max_length - spec.min_length + 1);
    StateSeq gold(len);
    gold[0] = bernoulli(rng, 0.5) ? kCooperative : kNonCooperative;
    for (std::size_t t = 1; t < len; ++t)
      gold[t] = bernoulli(rng, spec.persistence) ? gold[t - 1] : static_cast<State>(1 - gold[t - 1]);

    const std::size_t ia = uniform_index(rng, kNumNames);
    const std::size_t ib = (ia + 1 + uniform_index(rng, kNumNames - 1)) % kNumNames;
    std::size_t ic = uniform_index(rng, kNumNames);
    while (ic == ia || ic == ib) ic = (ic + 1) % kNumNames;
    const synth::Cast cast{1, 2, 3, synth::kNames[ia], synth::kNames[ib], synth::kNames[ic]};

    auto doc = std::make_shared<Document>();
    char id[32];
    std::snprintf(id, sizeof id, "synth-%05zu", d);
    doc->doc_id = id;
    doc->characters = {{cast.a, cast.name_a}, {cast.b, cast.name_b}, {cast.c, cast.name_c}};
    const std::size_t fillers = uniform_index(rng, 3);
    std::vector<std::size_t> filler_at;
    for (std::size_t i = 0; i < fillers; ++i) filler_at.push_back(uniform_index(rng, len + 1));

    for (std::size_t t = 0; t <= len; ++t) {
      for (std::size_t at : filler_at)
        if (at == t) {
          synth::SentenceBuilder sb;
          synth::neutral_clause(sb, cast, bernoulli(rng, 0.5) ? cast.a : cast.b);
          synth::neutral_clause(sb, cast, cast.c);
          doc->sentences.push_back(sb.finish(doc->sentences.size()));
        }
      if (t == len) break;
      synth::SentenceBuilder sb;
      const std::size_t items = spec.min_evidence + uniform_index(rng, spec.max_evidence - spec.min_evidence + 1);
      for (std::size_t k = 0; k < items; ++k) {
        const bool matches = !bernoulli(rng, spec.noise);
        const bool positive = (gold[t] == kCooperative) == matches;
        synth::evidence_clause(sb, rng, cast, positive, spec);
      }
      if (!sb.has(cast.a)) synth::neutral_clause(sb, cast, cast.a);
      if (!sb.has(cast.b)) synth::neutral_clause(sb, cast, cast.b);
      if (bernoulli(rng, spec.third_character_rate)) synth::neutral_clause(sb, cast, cast.c);
      doc->sentences.push_back(sb.finish(doc->sentences.size()));
    }
    validate_document(*doc);

    const bool partial = d >= spec.num_sequences && d < spec.num_sequences + spec.num_partial;
    const bool unlabeled = d >= spec.num_sequences + spec.num_partial;
    std::vector<bool> labeled(len, !unlabeled);
    if (partial) {
      do {
        for (std::size_t t = 0; t < len; ++t) labeled[t] = !bernoulli(rng, spec.partial_mask_rate);
      } while (std::find(labeled.begin(), labeled.end(), true) == labeled.end() ||
               std::find(labeled.begin(), labeled.end(), false) == labeled.end());
    }
    for (std::size_t t = 0; t < len; ++t)
      if (labeled[t]) out.annotations.push_back({doc->doc_id, EntityPair{cast.a, cast.b}, t, polarity_of(gold[t])});

    std::shared_ptr<const Document> cdoc = doc;
    out.documents.push_back(cdoc);
    auto seqs = extract_pair_sequences(cdoc, std::min<std::size_t>(5, spec.min_length));
    std::move(seqs.begin(), seqs.end(), std::back_inserter(sequences));
    out.hidden_gold.push_back(std::move(gold));
  }
  out.dataset = attach_annotations(out.annotations, std::move(sequences));
  return out;
}

/// Writes documents/, annotations.jsonl and lexicons/ under `dir`.
inline void write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  for (const auto& doc : corpus.documents) write_file(dir / "documents" / (doc->doc_id + ".json"), serialize_document(*doc));
  std::ostringstream ann;
  for (const auto& r : corpus.annotations) ann << annotation_to_json(r).dump() << '\n';
  write_file(dir / "annotations.jsonl", ann.str());
  const auto& f = corpus.lexicon_files;
  write_file(dir / "lexicons" / "connotation.tsv", f.connotation);
  write_file(dir / "lexicons" / "sentiment.tsv", f.sentiment);
  write_file(dir / "lexicons" / "prior_polarity.tsv", f.prior_polarity);
  write_file(dir / "lexicons" / "frames.tsv", f.frames);
  write_file(dir / "lexicons" / "stopwords.txt", f.stopwords);
}

}  // namespace relseq
