#include <gtest/gtest.h>

#include <cstring>

#include "support.hpp"

using namespace relseq;
namespace rt = relseq::testing;

namespace {

PartialLabels random_mask(Rng& rng, std::size_t len, std::size_t y_count) {
  PartialLabels m(len);
  for (auto& v : m)
    if (bernoulli(rng, 0.4)) v = static_cast<State>(uniform_index(rng, y_count));
  return m;
}

}  // namespace

TEST(Viterbi, MatchesExhaustiveSearch) {
  Rng rng = make_rng(11);
  for (std::size_t y_count : {2u, 3u}) {
    const FeatureIndex index(y_count);
    const DecoderConfig cfg{y_count, {}};
    for (int trial = 0; trial < 300; ++trial) {
      const bool integer = trial % 2 == 0;
      const std::size_t len = 1 + uniform_index(rng, 7);
      const auto x = rt::random_contents(rng, len, integer);
      const auto w = rt::random_weights(rng, index, integer);
      const Prediction p = viterbi_decode(x, w, index, cfg);
      ASSERT_EQ(p.states, rt::brute_force_decode(x, w, index, cfg.preference())) << "Y=" << y_count << " trial " << trial;
      EXPECT_NEAR(p.score, rt::oracle_score(x, p.states, w, index), 1e-9);
      EXPECT_EQ(p.relationship_sequence, collapse(p.states));
    }
  }
}

TEST(Viterbi, CustomTieRule) {
  Rng rng = make_rng(12);
  const FeatureIndex index(3);
  const DecoderConfig cfg{3, {2, 0, 1}};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 1 + uniform_index(rng, 6);
    const auto x = rt::random_contents(rng, len, true);
    const auto w = rt::random_weights(rng, index, true);
    ASSERT_EQ(viterbi_decode(x, w, index, cfg).states, rt::brute_force_decode(x, w, index, cfg.preference()));
  }
}

TEST(Viterbi, AllZeroWeightsPreferCooperative) {
  const FeatureIndex index(2);
  const std::vector<double> w(index.size(), 0.0);
  const std::vector<ContentVector> x(4);
  EXPECT_EQ(viterbi_decode(x, w, index).states, (StateSeq{0, 0, 0, 0}));
  EXPECT_EQ(viterbi_decode(x, w, index, DecoderConfig{2, {1, 0}}).states, (StateSeq{1, 1, 1, 1}));
}

TEST(Viterbi, SecondOrderTransitionsMatter) {
  // Only trans2 weights: reward alternation two steps back.
  const FeatureIndex index(2);
  std::vector<double> w(index.size(), 0.0);
  w[index.init(1)] = 0.5;
  w[index.trans2(1, 0, 1)] = 1.0;
  w[index.trans2(0, 1, 0)] = 1.0;
  const std::vector<ContentVector> x(5);
  EXPECT_EQ(viterbi_decode(x, w, index).states, (StateSeq{1, 0, 1, 0, 1}));
}

TEST(ConstrainedViterbi, MatchesConstrainedExhaustiveSearch) {
  Rng rng = make_rng(13);
  for (std::size_t y_count : {2u, 3u}) {
    const FeatureIndex index(y_count);
    const DecoderConfig cfg{y_count, {}};
    for (int trial = 0; trial < 300; ++trial) {
      const bool integer = trial % 2 == 1;
      const std::size_t len = 1 + uniform_index(rng, 7);
      const auto x = rt::random_contents(rng, len, integer);
      const auto w = rt::random_weights(rng, index, integer);
      const auto mask = random_mask(rng, len, y_count);
      const Prediction p = constrained_viterbi(x, mask, w, index, cfg);
      ASSERT_EQ(p.states, rt::brute_force_decode(x, w, index, cfg.preference(), &mask));
      for (std::size_t t = 0; t < len; ++t)
        if (mask[t]) {
          EXPECT_EQ(p.states[t], *mask[t]);
        }
    }
  }
}

TEST(ConstrainedViterbi, EmptyMaskEqualsUnconstrained) {
  Rng rng = make_rng(14);
  const FeatureIndex index(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 1 + uniform_index(rng, 7);
    const auto x = rt::random_contents(rng, len, trial % 2 == 0);
    const auto w = rt::random_weights(rng, index, trial % 2 == 0);
    const Prediction a = viterbi_decode(x, w, index);
    const Prediction b = constrained_viterbi(x, PartialLabels(len), w, index);
    EXPECT_EQ(a.states, b.states);
    EXPECT_EQ(std::memcmp(&a.score, &b.score, sizeof(double)), 0);
  }
}

TEST(ConstrainedViterbi, FullMaskReturnsTheMask) {
  Rng rng = make_rng(15);
  const FeatureIndex index(2);
  const auto x = rt::random_contents(rng, 6, false);
  const auto w = rt::random_weights(rng, index, false);
  const StateSeq forced{1, 0, 0, 1, 1, 0};
  EXPECT_EQ(constrained_viterbi(x, as_partial(forced), w, index).states, forced);
}

TEST(Decoder, Errors) {
  const FeatureIndex index(2);
  const std::vector<double> w(index.size(), 0.0);
  EXPECT_THROW(viterbi_decode(std::vector<ContentVector>{}, w, index), EmptySequenceError);
  const std::vector<ContentVector> x(3);
  EXPECT_THROW(viterbi_decode(x, std::vector<double>(5, 0.0), index), LengthMismatchError);
  EXPECT_THROW(constrained_viterbi(x, PartialLabels(2), w, index), LengthMismatchError);
  PartialLabels bad(3);
  bad[1] = State{4};
  EXPECT_THROW(constrained_viterbi(x, bad, w, index), InvalidStateError);
  EXPECT_THROW(viterbi_decode(x, w, index, DecoderConfig{3, {}}), InvalidParameterError);
  EXPECT_THROW((DecoderConfig{2, {0, 0}}.validate()), InvalidParameterError);
}
