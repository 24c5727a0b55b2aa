#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "relseq/corpus.hpp"
#include "relseq/error.hpp"

namespace relseq {

/// Word polarity: +1 or -1.
using Polarity = int;

inline std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

/// Lowercase, with spaces and hyphens folded to underscores, so that
/// "Cause bodily experience" and "cause_bodily_experience" compare equal.
inline std::string normalize_name(std::string s) {
  s = to_lower(std::move(s));
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '-'; }, '_');
  return s;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

/// Returns +1/-1, 0 for neutral rows (ignored), throws on anything else.
inline int parse_polarity_value(const std::string& raw, const std::string& where) {
  const std::string v = to_lower(trim(raw));
  if (v == "+1" || v == "1" || v == "pos" || v == "positive" || v == "+") return 1;
  if (v == "-1" || v == "neg" || v == "negative" || v == "-") return -1;
  if (v == "0" || v == "neutral" || v == "objective" || v == "both") return 0;
  throw ParseError(where + ": unrecognized polarity '" + raw + "'");
}

}  // namespace detail

class PolarityLexicon {
 public:
  PolarityLexicon() = default;
  explicit PolarityLexicon(std::string name) : name_(std::move(name)) {}

  /// Builds from (word, polarity) rows. A word listed with both polarities is
  /// dropped and reported in warnings().
  static PolarityLexicon from_rows(std::string name, const std::vector<std::pair<std::string, Polarity>>& rows) {
    PolarityLexicon lex(std::move(name));
    std::map<std::string, std::set<Polarity>> seen;
    for (const auto& [word, pol] : rows) seen[to_lower(word)].insert(pol);
    for (const auto& [word, pols] : seen) {
      if (pols.size() > 1) {
        lex.warnings_.push_back(lex.name_ + ": conflicting polarities for '" + word + "', entry dropped");
        continue;
      }
      lex.entries_.emplace(word, *pols.begin());
    }
    return lex;
  }

  std::optional<Polarity> lookup(const std::string& word) const {
    auto it = entries_.find(to_lower(word));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// Lemma first, lowercased surface as fallback.
  std::optional<Polarity> lookup(const Token& token) const {
    if (!token.lemma.empty())
      if (auto p = lookup(token.lemma)) return p;
    return lookup(token.surface);
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::unordered_map<std::string, Polarity>& entries() const { return entries_; }

 private:
  std::string name_;
  std::unordered_map<std::string, Polarity> entries_;
  std::vector<std::string> warnings_;
};

/// TSV `word<TAB>polarity`; `#` starts a comment line; neutral rows are skipped.
inline PolarityLexicon parse_polarity_lexicon(std::istream& in, std::string name, const std::string& source = "lexicon") {
  std::vector<std::pair<std::string, Polarity>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = detail::split(t, '\t');
    const std::string where = source + ":" + std::to_string(lineno);
    if (fields.size() < 2 || detail::trim(fields[0]).empty()) throw ParseError(where + ": expected word<TAB>polarity");
    const int pol = detail::parse_polarity_value(fields[1], where);
    if (pol != 0) rows.emplace_back(detail::trim(fields[0]), pol);
  }
  return PolarityLexicon::from_rows(std::move(name), rows);
}

inline PolarityLexicon load_polarity_lexicon(const std::filesystem::path& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  return parse_polarity_lexicon(in, std::move(name), path.string());
}

/// Lexicon polarity, sign-flipped under negation.
inline std::optional<Polarity> effective_polarity(const PolarityLexicon& lex, const std::string& lemma, bool negated) {
  auto p = lex.lookup(lemma);
  if (p && negated) return -*p;
  return p;
}

inline std::optional<Polarity> effective_polarity(const PolarityLexicon& lex, const Token& token, bool negated) {
  auto p = lex.lookup(token);
  if (p && negated) return -*p;
  return p;
}

enum class FrameCategory { positive, negative, ambiguous, relationship };

inline std::optional<FrameCategory> parse_frame_category(const std::string& s) {
  const std::string v = to_lower(detail::trim(s));
  if (v == "positive") return FrameCategory::positive;
  if (v == "negative") return FrameCategory::negative;
  if (v == "ambiguous") return FrameCategory::ambiguous;
  if (v == "relationship") return FrameCategory::relationship;
  return std::nullopt;
}

inline const char* to_string(FrameCategory c) {
  switch (c) {
    case FrameCategory::positive: return "positive";
    case FrameCategory::negative: return "negative";
    case FrameCategory::ambiguous: return "ambiguous";
    case FrameCategory::relationship: return "relationship";
  }
  return "?";
}

struct FrameEntry {
  FrameCategory category = FrameCategory::positive;
  std::set<std::string> relevant_elements;  ///< normalized names
};

class FrameLexicon {
 public:
  void add(const std::string& frame, FrameEntry entry) {
    if (entry.relevant_elements.empty()) throw ValidationError("frame '" + frame + "' lists no relevant elements");
    if (!entries_.emplace(normalize_name(frame), std::move(entry)).second)
      throw ValidationError("frame '" + frame + "' listed twice");
  }

  const FrameEntry* find(const std::string& frame) const {
    auto it = entries_.find(normalize_name(frame));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, FrameEntry> entries_;
};

/// TSV `frame<TAB>category<TAB>element1,element2,...`.
inline FrameLexicon parse_frame_lexicon(std::istream& in, const std::string& source = "frames") {
  FrameLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto fields = detail::split(t, '\t');
    if (fields.size() != 3) throw ParseError(where + ": expected frame<TAB>category<TAB>elements");
    auto cat = parse_frame_category(fields[1]);
    if (!cat) throw ParseError(where + ": unknown frame category '" + fields[1] + "'");
    FrameEntry entry{*cat, {}};
    for (const auto& e : detail::split(fields[2], ','))
      if (auto name = detail::trim(e); !name.empty()) entry.relevant_elements.insert(normalize_name(name));
    try {
      lex.add(detail::trim(fields[0]), std::move(entry));
    } catch (const ValidationError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return lex;
}

inline FrameLexicon load_frame_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open frame list " + path.string());
  return parse_frame_lexicon(in, path.string());
}

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::set<std::string> words) : words_(std::move(words)) {
    if (words_.empty()) throw ValidationError("stopword list is empty");
  }

  bool contains(const std::string& word) const { return words_.count(to_lower(word)) > 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

inline StopwordList parse_stopwords(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (!t.empty() && t[0] != '#') words.insert(to_lower(t));
  }
  return StopwordList(std::move(words));
}

inline StopwordList load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword list " + path.string());
  return parse_stopwords(in);
}

/// Everything the content features consult.
struct Lexicons {
  PolarityLexicon connotation{"connotation"};
  PolarityLexicon sentiment{"sentiment"};
  PolarityLexicon prior_polarity{"prior_polarity"};
  FrameLexicon frames;
  StopwordList stopwords;

  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    for (const auto* l : {&connotation, &sentiment, &prior_polarity})
      out.insert(out.end(), l->warnings().begin(), l->warnings().end());
    return out;
  }
};

struct LexiconPaths {
  std::filesystem::path connotation, sentiment, prior_polarity, frames, stopwords;
};

inline Lexicons load_lexicons(const LexiconPaths& p) {
  Lexicons lex;
  lex.connotation = load_polarity_lexicon(p.connotation, "connotation");
  lex.sentiment = load_polarity_lexicon(p.sentiment, "sentiment");
  lex.prior_polarity = load_polarity_lexicon(p.prior_polarity, "prior_polarity");
  lex.frames = load_frame_lexicon(p.frames);
  lex.stopwords = load_stopwords(p.stopwords);
  return lex;
}

/// Category of a fired frame. Ambiguous frames take the connotation of their
/// lexical unit; unlisted frames and undecidable ambiguous ones yield nullopt.
inline std::optional<FrameCategory> classify_frame(const FrameLexicon& flex, const PolarityLexicon& connotation,
                                                   const FrameAnnotation& frame, const Sentence& sentence) {
  const FrameEntry* entry = flex.find(frame.frame_name);
  if (!entry) return std::nullopt;
  if (entry->category != FrameCategory::ambiguous) return entry->category;
  if (frame.lexical_unit_token >= sentence.tokens.size()) return std::nullopt;
  auto p = connotation.lookup(sentence.tokens[frame.lexical_unit_token]);
  if (!p) return std::nullopt;
  return *p > 0 ? FrameCategory::positive : FrameCategory::negative;
}

}  // namespace relseq
