#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace relseq;

namespace {

PolarityLexicon parse(const std::string& text, const std::string& name = "connotation") {
  std::istringstream in(text);
  return parse_polarity_lexicon(in, name);
}

FrameAnnotation frame_at(const std::string& name, std::size_t lu) { return {name, lu, {{"agent", 0, 1}}}; }

Sentence one_word(const std::string& lemma) {
  Sentence s;
  s.tokens.push_back({0, lemma, lemma, "VB"});
  return s;
}

}  // namespace

TEST(PolarityLexicon, LookupAndAbsent) {
  const auto lex = parse("# comment\nhelp\t+1\nshun\t-1\n");
  EXPECT_EQ(lex.lookup("help"), std::optional<Polarity>(+1));
  EXPECT_EQ(lex.lookup("shun"), std::optional<Polarity>(-1));
  EXPECT_FALSE(lex.lookup("table").has_value());
  EXPECT_EQ(lex.lookup("HELP"), std::optional<Polarity>(+1));
}

TEST(PolarityLexicon, AliasesAndNeutralRows) {
  const auto lex = parse("a\tpos\nb\tnegative\nc\t1\nd\t-\ne\t0\nf\tneutral\n");
  EXPECT_EQ(lex.size(), 4u);
  EXPECT_EQ(lex.lookup("a"), std::optional<Polarity>(+1));
  EXPECT_EQ(lex.lookup("d"), std::optional<Polarity>(-1));
  EXPECT_FALSE(lex.lookup("e").has_value());
  EXPECT_THROW(parse("a\tmaybe\n"), ParseError);
  EXPECT_THROW(parse("lonely\n"), ParseError);
}

TEST(PolarityLexicon, ConflictingDuplicateIsDroppedWithWarning) {
  const auto lex = parse("x\t+1\ny\t+1\nx\t-1\ny\t+1\n");
  EXPECT_FALSE(lex.lookup("x").has_value());
  EXPECT_EQ(lex.lookup("y"), std::optional<Polarity>(+1));
  ASSERT_EQ(lex.warnings().size(), 1u);
  EXPECT_NE(lex.warnings()[0].find("x"), std::string::npos);
}

TEST(PolarityLexicon, LoadIsOrderIndependent) {
  const auto a = parse("help\t+1\nshun\t-1\nhug\t+1\n");
  const auto b = parse("hug\t+1\nshun\t-1\nhelp\t+1\nhelp\t+1\n");
  EXPECT_EQ(a.entries(), b.entries());
}

TEST(PolarityLexicon, TokenLookupPrefersLemmaThenSurface) {
  const auto lex = parse("help\t+1\nshunned\t-1\n");
  EXPECT_EQ(lex.lookup(Token{0, "Helped", "help", "VBD"}), std::optional<Polarity>(+1));
  EXPECT_EQ(lex.lookup(Token{0, "Shunned", "unknownlemma", "VBD"}), std::optional<Polarity>(-1));
}

TEST(EffectivePolarity, NegationFlips) {
  const auto lex = parse("shun\t-1\nhelp\t+1\n");
  EXPECT_EQ(effective_polarity(lex, "shun", false), std::optional<Polarity>(-1));
  EXPECT_EQ(effective_polarity(lex, "shun", true), std::optional<Polarity>(+1));
  EXPECT_FALSE(effective_polarity(lex, "zzz", true).has_value());
  for (const auto& [w, p] : lex.entries()) EXPECT_EQ(*effective_polarity(lex, w, true), -*effective_polarity(lex, w, false));
}

TEST(FrameLexicon, FixtureCategories) {
  const Lexicons lex = relseq::testing::fixture_lexicons();
  const Sentence s = one_word("tickle");
  EXPECT_EQ(classify_frame(lex.frames, lex.connotation, frame_at("killing", 0), s), FrameCategory::negative);
  EXPECT_EQ(classify_frame(lex.frames, lex.connotation, frame_at("Forgiveness", 0), s), FrameCategory::positive);
  EXPECT_EQ(classify_frame(lex.frames, lex.connotation, frame_at("kinship", 0), s), FrameCategory::relationship);
  EXPECT_EQ(classify_frame(lex.frames, lex.connotation, frame_at("cause_bodily_experience", 0), s), FrameCategory::positive);
  EXPECT_EQ(classify_frame(lex.frames, lex.connotation, frame_at("Cause bodily experience", 0), one_word("kill")),
            FrameCategory::negative);
  EXPECT_FALSE(classify_frame(lex.frames, lex.connotation, frame_at("cause_bodily_experience", 0), one_word("poke")));
  EXPECT_FALSE(classify_frame(lex.frames, lex.connotation, frame_at("arriving", 0), s));
}

TEST(FrameLexicon, ParseErrors) {
  auto parse_frames = [](const std::string& text) {
    std::istringstream in(text);
    return parse_frame_lexicon(in);
  };
  EXPECT_EQ(parse_frames("killing\tnegative\tkiller, victim\n").find("killing")->relevant_elements.count("victim"), 1u);
  EXPECT_THROW(parse_frames("killing\tnegative\tkiller\nkilling\tnegative\tvictim\n"), ParseError);
  EXPECT_THROW(parse_frames("killing\tscary\tkiller\n"), ParseError);
  EXPECT_THROW(parse_frames("killing\tnegative\t ,\n"), ParseError);
  EXPECT_THROW(parse_frames("killing\tnegative\n"), ParseError);
}

TEST(Stopwords, CaseInsensitiveAndNonEmpty) {
  std::istringstream in("The\nand\n\n");
  const auto sw = parse_stopwords(in);
  EXPECT_TRUE(sw.contains("the"));
  EXPECT_TRUE(sw.contains("AND"));
  EXPECT_FALSE(sw.contains("tom"));
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(parse_stopwords(empty), ValidationError);
}

TEST(LoadLexicons, FixtureFilesAndMissingFile) {
  const Lexicons lex = relseq::testing::fixture_lexicons();
  EXPECT_EQ(lex.connotation.size(), 12u);
  EXPECT_EQ(lex.sentiment.size(), 5u);
  EXPECT_EQ(lex.prior_polarity.size(), 4u);
  EXPECT_EQ(lex.frames.size(), 8u);
  EXPECT_TRUE(lex.warnings().empty());
  EXPECT_THROW(load_polarity_lexicon(relseq::testing::fixtures() / "nope.tsv", "x"), IoError);
}
