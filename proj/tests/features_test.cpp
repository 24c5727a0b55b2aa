#include <gtest/gtest.h>

#include "support.hpp"

using namespace relseq;
namespace rt = relseq::testing;

namespace {

struct FixtureCorpus {
  Lexicons lex = rt::fixture_lexicons();
  std::vector<std::shared_ptr<const Document>> docs = load_documents(rt::fixtures() / "documents");
  const Document& sawyer() const { return *docs[1]; }
  PairSequence sequence() const { return extract_pair_sequences(docs[1], 5).at(0); }
};

std::string describe(const ContentVector& cv) {
  std::string s;
  for (std::size_t k = 1; k <= kNumContentFeatures; ++k)
    if (cv.f(k) != 0) s += "F" + std::to_string(k) + "=" + std::to_string(cv.f(k)) + " ";
  return s;
}

}  // namespace

TEST(AnalyzeActions, AcceptsTheBlame) {
  FixtureCorpus c;
  const auto groups = analyze_actions(c.sawyer().sentences[1]);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].lemma, "accept");
  EXPECT_EQ(groups[0].agents, (std::set<EntityId>{1}));
  EXPECT_TRUE(groups[0].patients.empty());
  EXPECT_FALSE(groups[0].negated);
  EXPECT_EQ(groups[0].adverb_tokens, (std::vector<std::size_t>{1}));
}

TEST(AnalyzeActions, NegationAndConjInheritance) {
  FixtureCorpus c;
  const auto neg = analyze_actions(c.sawyer().sentences[2]);
  ASSERT_EQ(neg.size(), 2u);
  EXPECT_FALSE(neg[0].negated);
  EXPECT_TRUE(neg[1].negated);

  const auto conj = analyze_actions(c.sawyer().sentences[5]);
  ASSERT_EQ(conj.size(), 2u);
  EXPECT_EQ(conj[1].lemma, "kiss");
  EXPECT_EQ(conj[1].agents, (std::set<EntityId>{1}));
  EXPECT_EQ(conj[1].patients, (std::set<EntityId>{2}));
}

TEST(AnalyzeActions, InheritanceIsOneStepAndOnlyWhenEmpty) {
  Sentence s;
  for (std::size_t i = 0; i < 5; ++i) s.tokens.push_back({i, "w", "w", i == 0 || i == 4 ? "NNP" : "VBD"});
  s.mentions = {{1, 0, 1}, {2, 4, 5}};
  // nsubj(v1, A); conj(v1, v2); conj(v2, v3); nsubj(v3, B)
  s.deps = {{1, 0, "nsubj"}, {1, 2, "conj"}, {2, 3, "conj"}, {3, 4, "nsubj"}};
  const auto g = analyze_actions(s);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].agents, (std::set<EntityId>{1}));
  EXPECT_EQ(g[1].agents, (std::set<EntityId>{1, 2}));
  EXPECT_EQ(g[2].agents, (std::set<EntityId>{2}));
}

TEST(ContentFeatures, FixtureMatchesHandCounts) {
  FixtureCorpus c;
  const PairSequence seq = c.sequence();
  const auto expected = rt::expected_fixture_features();
  ASSERT_EQ(seq.size(), expected.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const ContentVector got = content_features(seq.sentence(i), seq.pair, c.lex);
    EXPECT_EQ(got, expected[i]) << "sentence " << i << ": got " << describe(got) << " want " << describe(expected[i]);
  }
}

TEST(ContentFeatures, PersuadesGivesConnotationPositiveActsTogether) {
  FixtureCorpus c;
  const auto cv = content_features(c.sawyer().sentences[0], {1, 2}, c.lex);
  EXPECT_EQ(cv.f(feature_slot::kActsTogether), 1);
}

TEST(ContentFeatures, KillingFrameWithVictimOnPairMember) {
  FixtureCorpus c;
  const auto cv = content_features(c.sawyer().sentences[6], {1, 2}, c.lex);
  EXPECT_EQ(cv.f(29), 1);
  EXPECT_EQ(cv.f(32), 1);
  // The killer element covers Tom only: against the pair (2, 3) it still overlaps Becky.
  EXPECT_EQ(content_features(c.sawyer().sentences[6], {2, 3}, c.lex).f(29), 1);
  EXPECT_EQ(content_features(c.sawyer().sentences[6], {3, 4}, c.lex).f(29), 0);
}

TEST(ContentFeatures, EmptyEvidenceIsAllZero) {
  FixtureCorpus c;
  Sentence s;
  s.tokens = {{0, "Tom", "Tom", "NNP"}, {1, "Becky", "Becky", "NNP"}};
  s.mentions = {{1, 0, 1}, {2, 1, 2}};
  EXPECT_EQ(content_features(s, {1, 2}, c.lex), ContentVector{});
}

TEST(ContentFeatures, SymmetricInThePair) {
  FixtureCorpus c;
  for (const auto& s : c.sawyer().sentences)
    EXPECT_EQ(content_features(s, {1, 2}, c.lex), content_features(s, {2, 1}, c.lex));
}

TEST(ContentFeatures, NegationSwapsPolarityCounts) {
  FixtureCorpus c;
  for (std::size_t idx : {0u, 1u, 2u, 4u, 5u, 6u, 9u}) {
    Sentence s = c.sawyer().sentences[idx];
    const ContentVector before = content_features(s, {1, 2}, c.lex);
    const bool was_negated = std::any_of(s.deps.begin(), s.deps.end(), [](const DependencyEdge& e) { return e.relation == "neg"; });
    if (was_negated) {
      std::erase_if(s.deps, [](const DependencyEdge& e) { return e.relation == "neg"; });
    } else {
      for (const auto& g : analyze_actions(s)) s.deps.push_back({static_cast<int>(g.verb_token), g.verb_token == 0 ? 1 : 0, "neg"});
    }
    const ContentVector after = content_features(s, {1, 2}, c.lex);
    for (std::size_t block : {2u, 8u, 14u, 20u})
      for (std::size_t l = 0; l < 3; ++l) {
        EXPECT_EQ(before.f(block + 2 * l), after.f(block + 2 * l + 1)) << "sentence " << idx << " block " << block;
        EXPECT_EQ(before.f(block + 2 * l + 1), after.f(block + 2 * l)) << "sentence " << idx << " block " << block;
      }
    EXPECT_EQ(before.f(1), after.f(1));
    for (std::size_t k = 26; k <= 33; ++k) EXPECT_EQ(before.f(k), after.f(k));
  }
}

TEST(ContentFeatures, ThirdCharacterSilencesSurrogateFeatures) {
  FixtureCorpus c;
  for (std::size_t idx : {1u, 9u}) {
    Sentence s = c.sawyer().sentences[idx];
    ASSERT_GT(content_features(s, {1, 2}, c.lex).f(feature_slot::kSurrogateActs) +
                  content_features(s, {1, 2}, c.lex).f(feature_slot::kSurrogateActs + 1),
              0);
    s.tokens.push_back({s.tokens.size(), "Huck", "Huck", "NNP"});
    s.mentions.push_back({3, s.tokens.size() - 1, s.tokens.size()});
    const auto cv = content_features(s, {1, 2}, c.lex);
    for (std::size_t k = 8; k <= 13; ++k) EXPECT_EQ(cv.f(k), 0) << k;
    for (std::size_t k = 20; k <= 25; ++k) EXPECT_EQ(cv.f(k), 0) << k;
  }
}

TEST(ContentFeatures, FeatureDumpHasHeaderAndRows) {
  FixtureCorpus c;
  std::ostringstream out;
  write_feature_dump(out, extract_pair_sequences(c.docs, 5), c.lex);
  const std::string dump = out.str();
  EXPECT_EQ(dump.rfind("doc_id\tpair\tseq_index\tF1\t", 0), 0u);
  EXPECT_EQ(std::count(dump.begin(), dump.end(), '\n'), 1 + 5 + 10);
}

TEST(FeatureIndex, SizeAndBijection) {
  for (std::size_t y : {2u, 3u, 4u}) {
    const FeatureIndex index(y);
    EXPECT_EQ(index.size(), 33 * y + y + y * y + y * y * y);
    std::set<std::string> names;
    for (FeatureId id = 0; id < index.size(); ++id) {
      EXPECT_EQ(index.id(index.key(id)), id);
      names.insert(index.key_name(id));
    }
    EXPECT_EQ(names.size(), index.size());
  }
  EXPECT_EQ(FeatureIndex(2).size(), 80u);
  EXPECT_THROW(FeatureIndex(1), InvalidParameterError);
}

TEST(FeatureIndex, JsonRoundTrip) {
  const FeatureIndex index(3);
  const FeatureIndex back = FeatureIndex::from_json(nlohmann::json::parse(index.to_json().dump()));
  ASSERT_EQ(back.size(), index.size());
  for (FeatureId id = 0; id < index.size(); ++id) EXPECT_EQ(back.key(id), index.key(id));
  auto j = nlohmann::json::parse(index.to_json().dump());
  j["keys"][5] = "content/F99/0";
  EXPECT_THROW(FeatureIndex::from_json(j), ModelFormatError);
}

TEST(SparseVector, DropsZerosAndDots) {
  const std::vector<double> dense{0, 1.5, 0, -2};
  const auto sv = SparseVector::from_dense(dense);
  EXPECT_EQ(sv.nnz(), 2u);
  EXPECT_EQ(sv.get(1), 1.5);
  EXPECT_EQ(sv.get(2), 0.0);
  const std::vector<double> w{9, 2, 9, 1};
  EXPECT_DOUBLE_EQ(sv.dot(w), 1.0);
}

TEST(JointFeatures, LengthOneZeroContent) {
  const FeatureIndex index(2);
  const std::vector<ContentVector> x(1);
  const StateSeq y{kCooperative};
  const auto phi = joint_features(x, y, index);
  ASSERT_EQ(phi.nnz(), 1u);
  EXPECT_EQ(phi.get(index.init(kCooperative)), 1.0);
}

TEST(JointFeatures, LengthThreeTransitions) {
  const FeatureIndex index(2);
  const std::vector<ContentVector> x(3);
  const StateSeq y{kCooperative, kNonCooperative, kCooperative};
  const auto phi = joint_features(x, y, index);
  EXPECT_EQ(phi.nnz(), 3u);
  EXPECT_EQ(phi.get(index.init(kCooperative)), 1.0);
  EXPECT_EQ(phi.get(index.trans1(kNonCooperative, kCooperative)), 1.0);
  EXPECT_EQ(phi.get(index.trans2(kCooperative, kNonCooperative, kCooperative)), 1.0);
}

TEST(JointFeatures, DecomposesIntoPositionContributions) {
  Rng rng = make_rng(2024);
  for (std::size_t y_count : {2u, 3u}) {
    const FeatureIndex index(y_count);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t len = 1 + uniform_index(rng, 8);
      const auto x = rt::random_contents(rng, len, false);
      StateSeq y(len);
      for (auto& s : y) s = static_cast<State>(uniform_index(rng, y_count));
      const auto phi = joint_features(x, y, index);
      const auto oracle = rt::oracle_phi(x, y, index);
      for (FeatureId id = 0; id < index.size(); ++id) ASSERT_DOUBLE_EQ(phi.get(id), oracle[id]);
      const auto w = rt::random_weights(rng, index, false);
      EXPECT_NEAR(phi.dot(w), rt::oracle_score(x, y, w, index), 1e-9);
      EXPECT_NEAR(score_sequence(x, y, w, index), phi.dot(w), 1e-12);
    }
  }
}

TEST(JointFeatures, Errors) {
  const FeatureIndex index(2);
  const std::vector<ContentVector> x(2);
  EXPECT_THROW(joint_features(x, StateSeq{0}, index), LengthMismatchError);
  EXPECT_THROW(joint_features(x, StateSeq{0, 2}, index), InvalidStateError);
}

TEST(Featurize, FixtureInstanceCarriesLabels) {
  FixtureCorpus c;
  const Dataset data = load_annotations(rt::fixtures() / "annotations.jsonl", extract_pair_sequences(c.docs, 5));
  const InstanceSet inst = featurize(data, c.lex);
  ASSERT_EQ(inst.fully_labeled.size(), 1u);
  EXPECT_EQ(inst.fully_labeled[0].id, "sawyer:1-2");
  EXPECT_EQ(inst.fully_labeled[0].x, rt::expected_fixture_features());
  EXPECT_EQ(gold_states(inst.fully_labeled[0].labels), (StateSeq{0, 0, 1, 0, 1, 0, 1, 0, 0, 1}));
}
