#pragma once

// Shared oracles and generators for the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "relseq/relseq.hpp"

namespace relseq::testing {

inline std::filesystem::path fixtures() { return RELSEQ_FIXTURES; }

inline Lexicons fixture_lexicons() {
  const auto d = fixtures() / "lexicons";
  return load_lexicons({d / "connotation.tsv", d / "sentiment.tsv", d / "prior_polarity.tsv", d / "frames.tsv", d / "stopwords.txt"});
}

/// Parses expected_features.tsv into one ContentVector per sequence position.
inline std::vector<ContentVector> expected_fixture_features() {
  std::ifstream in(fixtures() / "expected_features.tsv");
  std::vector<ContentVector> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::size_t idx;
    ls >> idx;
    if (out.size() <= idx) out.resize(idx + 1);
    for (std::string item; ls >> item;) {
      const auto eq = item.find('=');
      out[idx].f(std::stoul(item.substr(1, eq - 1))) = std::stod(item.substr(eq + 1));
    }
  }
  return out;
}

inline std::vector<ContentVector> random_contents(Rng& rng, std::size_t len, bool integer) {
  std::vector<ContentVector> x(len);
  for (auto& cv : x)
    for (std::size_t k = 1; k <= kNumContentFeatures; ++k)
      if (bernoulli(rng, 0.2)) cv.f(k) = integer ? static_cast<double>(1 + uniform_index(rng, 2)) : uniform(rng, 0.0, 2.0);
  return x;
}

/// Integer weights produce exact ties; continuous ones do not.
inline std::vector<double> random_weights(Rng& rng, const FeatureIndex& index, bool integer) {
  std::vector<double> w(index.size());
  for (auto& v : w) v = integer ? static_cast<double>(static_cast<int>(uniform_index(rng, 5)) - 2) : uniform(rng, -1.0, 1.0);
  return w;
}

/// Independent score: dense per-position accumulation of every template.
inline double oracle_score(const std::vector<ContentVector>& x, const StateSeq& y, const std::vector<double>& w,
                           const FeatureIndex& index) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < kNumContentFeatures; ++k) s += x[i][k] * w[index.content(k, y[i])];
    if (i == 0) s += w[index.init(y[0])];
    else if (i == 1) s += w[index.trans1(y[1], y[0])];
    else s += w[index.trans2(y[i], y[i - 1], y[i - 2])];
  }
  return s;
}

/// Dense Phi accumulated position by position through FeatureKey lookups.
inline std::vector<double> oracle_phi(const std::vector<ContentVector>& x, const StateSeq& y, const FeatureIndex& index) {
  std::vector<double> phi(index.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < kNumContentFeatures; ++k)
      phi[index.id({Template::content, k + 1, {y[i], 0, 0}})] += x[i][k];
    if (i == 0) phi[index.id({Template::init, 0, {y[0], 0, 0}})] += 1;
    else if (i == 1) phi[index.id({Template::trans1, 0, {y[1], y[0], 0}})] += 1;
    else phi[index.id({Template::trans2, 0, {y[i], y[i - 1], y[i - 2]}})] += 1;
  }
  return phi;
}

/// Exhaustive argmax. Sequences are enumerated with the first position most
/// significant and candidates in preference order; the first maximum wins.
inline StateSeq brute_force_decode(const std::vector<ContentVector>& x, const std::vector<double>& w, const FeatureIndex& index,
                                   const std::vector<State>& preference, const PartialLabels* allowed = nullptr) {
  const std::size_t n = x.size(), Y = preference.size();
  std::vector<std::size_t> digits(n, 0);
  StateSeq best;
  double best_score = -std::numeric_limits<double>::infinity();
  while (true) {
    StateSeq y(n);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = preference[digits[i]];
      if (allowed && (*allowed)[i] && *(*allowed)[i] != y[i]) ok = false;
    }
    if (ok) {
      const double s = oracle_score(x, y, w, index);
      if (best.empty() || s > best_score) {
        best = y;
        best_score = s;
      }
    }
    std::size_t p = n;
    while (p > 0 && ++digits[p - 1] == Y) digits[--p] = 0;
    if (p == 0) break;
  }
  return best;
}

/// Recursive edit distance with memoization; unit costs.
template <class Seq>
std::size_t oracle_edit_distance(const Seq& a, const Seq& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    const std::size_t sub = self(self, i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
    const std::size_t r = std::min({sub, self(self, i - 1, j) + 1, self(self, i, j - 1) + 1});
    memo[{i, j}] = r;
    return r;
  };
  return rec(rec, a.size(), b.size());
}

/// Separable data: labels are the argmax under a planted weight vector, and
/// only instances whose gold beats every other sequence by `margin` are kept.
inline std::vector<Instance> planted_instances(std::uint64_t seed, std::size_t count, const FeatureIndex& index,
                                               double margin = 0.5) {
  Rng rng = make_rng(seed, 0xA11CE);
  std::vector<double> planted(index.size());
  for (auto& v : planted) v = uniform(rng, -1.0, 1.0);
  const std::vector<State> pref = DecoderConfig{index.num_states(), {}}.preference();
  std::vector<Instance> out;
  while (out.size() < count) {
    const std::size_t len = 2 + uniform_index(rng, 5);
    auto x = random_contents(rng, len, false);
    const StateSeq gold = brute_force_decode(x, planted, index, pref);
    const double top = oracle_score(x, gold, planted, index);
    double second = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> digits(len, 0);
    while (true) {
      StateSeq y(len);
      for (std::size_t i = 0; i < len; ++i) y[i] = static_cast<State>(digits[i]);
      if (y != gold) second = std::max(second, oracle_score(x, y, planted, index));
      std::size_t p = len;
      while (p > 0 && ++digits[p - 1] == index.num_states()) digits[--p] = 0;
      if (p == 0) break;
    }
    if (top - second < margin) continue;
    Instance inst;
    inst.id = "planted-" + std::to_string(out.size());
    inst.x = std::move(x);
    inst.labels = as_partial(gold);
    out.push_back(std::move(inst));
  }
  return out;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("relseq-test-" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace relseq::testing
