#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include <json.hpp>

#include "relseq/baseline.hpp"
#include "relseq/corpus.hpp"
#include "relseq/metrics.hpp"
#include "relseq/semisupervised.hpp"

namespace relseq {

struct CvConfig {
  std::size_t folds = 10;
  std::size_t restarts = 1;
  std::uint64_t seed = 1;
  TrainConfig train;
  DecoderConfig decoder;
  BaselineConfig baseline;
  bool run_baseline = true;
  std::size_t workers = 0;  ///< 0: one per hardware thread
};

struct CvEntry {
  std::size_t restart = 0;
  std::size_t fold = 0;
  std::size_t train_sequences = 0;
  std::size_t test_sequences = 0;
  SequenceMetrics structured;
  std::optional<SequenceMetrics> baseline;
};

struct CvReport {
  std::vector<CvEntry> entries;  ///< restart-major, fold-minor
  SequenceMetrics structured;    ///< arithmetic means over entries
  std::optional<SequenceMetrics> baseline;
  std::vector<SequenceMetrics> structured_per_restart;
  std::vector<SequenceMetrics> baseline_per_restart;
};

/// Field-wise arithmetic mean.
inline SequenceMetrics mean_metrics(const std::vector<const SequenceMetrics*>& ms) {
  SequenceMetrics out;
  if (ms.empty()) return out;
  const auto n = static_cast<double>(ms.size());
  for (const auto* m : ms) {
    out.state.p += m->state.p / n;
    out.state.r += m->state.r / n;
    out.state.f += m->state.f / n;
    out.mean_edit_distance += m->mean_edit_distance / n;
    out.mean_edit_distance_raw += m->mean_edit_distance_raw / n;
    out.change.p += m->change.p / n;
    out.change.r += m->change.r / n;
    out.change.f += m->change.f / n;
    out.sequences += m->sequences;
    out.sentences += m->sentences;
  }
  return out;
}

/// Runs `fn(job)` for job in [0, jobs) on up to `workers` threads. Results
/// must be written to per-job slots, which keeps the output independent of
/// scheduling. The first exception (by job number) is rethrown.
template <class Fn>
void parallel_for(std::size_t jobs, std::size_t workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs;) {
      try {
        fn(j);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Predicts every test sequence with the averaged weights.
inline std::vector<StateSeq> decode_all(const std::vector<Instance>& test, std::span<const double> w, const FeatureIndex& index,
                                        const DecoderConfig& decoder) {
  std::vector<StateSeq> out;
  out.reserve(test.size());
  for (const auto& inst : test) out.push_back(detail::decode_states(inst.x, w, index, decoder, nullptr));
  return out;
}

/// k-fold cross validation repeated over restarts. Folds are fixed by the
/// seed; each (restart, fold) job trains with its own derived seed.
inline CvReport cross_validate(const InstanceSet& data, const CvConfig& config) {
  config.train.validate();
  config.decoder.validate();
  const auto folds = split_folds(data, config.folds, config.seed);
  const FeatureIndex index(config.decoder.num_states);
  if (config.restarts < 1) throw InvalidParameterError("restarts must be >= 1");

  CvReport report;
  const std::size_t jobs = config.restarts * config.folds;
  report.entries.resize(jobs);
  parallel_for(jobs, config.workers, [&](std::size_t job) {
    const std::size_t restart = job / config.folds, f = job % config.folds;
    const Fold<Instance>& fold = folds[f];
    CvEntry& entry = report.entries[job];
    entry.restart = restart;
    entry.fold = f;
    entry.train_sequences = fold.train.size();
    entry.test_sequences = fold.test.size();

    std::vector<StateSeq> gold;
    for (const auto& inst : fold.test) gold.push_back(gold_states(inst.labels));

    TrainConfig tc = config.train;
    tc.seed = derive_seed(config.seed, 1 + job);
    const ModelWeights weights = semisupervised_train(fold.train, tc, index, config.decoder);
    entry.structured = evaluate_sequences(gold, decode_all(fold.test, weights.averaged(), index, config.decoder),
                                          config.decoder.num_states);

    if (config.run_baseline) {
      BaselineConfig bc = config.baseline;
      bc.seed = derive_seed(config.seed, 0x10000 + job);
      const LogisticBaseline lr = baseline_train(fold.train, bc);
      std::vector<StateSeq> pred;
      for (const auto& inst : fold.test) pred.push_back(lr.predict(inst.x));
      entry.baseline = evaluate_sequences(gold, pred, 2);
    }
  });

  std::vector<const SequenceMetrics*> all_s, all_b;
  for (const auto& e : report.entries) {
    all_s.push_back(&e.structured);
    if (e.baseline) all_b.push_back(&*e.baseline);
  }
  report.structured = mean_metrics(all_s);
  if (config.run_baseline) report.baseline = mean_metrics(all_b);
  for (std::size_t r = 0; r < config.restarts; ++r) {
    std::vector<const SequenceMetrics*> s, b;
    for (const auto& e : report.entries)
      if (e.restart == r) {
        s.push_back(&e.structured);
        if (e.baseline) b.push_back(&*e.baseline);
      }
    report.structured_per_restart.push_back(mean_metrics(s));
    if (config.run_baseline) report.baseline_per_restart.push_back(mean_metrics(b));
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const PRF& m) { return {{"p", m.p}, {"r", m.r}, {"f", m.f}}; }

inline nlohmann::ordered_json to_json(const SequenceMetrics& m) {
  return {{"averaged_p", m.state.p},
          {"averaged_r", m.state.r},
          {"averaged_f", m.state.f},
          {"mean_edit_distance", m.mean_edit_distance},
          {"mean_edit_distance_raw", m.mean_edit_distance_raw},
          {"change_prf", to_json(m.change)},
          {"sequences", m.sequences},
          {"sentences", m.sentences}};
}

inline nlohmann::ordered_json config_to_json(const CvConfig& c) {
  return {{"folds", c.folds},
          {"restarts", c.restarts},
          {"seed", c.seed},
          {"outer_iterations", c.train.outer_iterations},
          {"perceptron_epochs", c.train.perceptron_epochs},
          {"init_scale", c.train.init_scale},
          {"use_unlabeled", c.train.use_unlabeled},
          {"num_states", c.decoder.num_states},
          {"tie_rule", c.decoder.preference()},
          {"baseline_epochs", c.baseline.epochs},
          {"baseline_learning_rate", c.baseline.learning_rate},
          {"run_baseline", c.run_baseline}};
}

/// Worker count is deliberately not echoed: the report must not depend on it.
inline nlohmann::ordered_json to_json(const CvReport& r, const CvConfig& config) {
  using oj = nlohmann::ordered_json;
  oj j;
  j["config"] = config_to_json(config);
  j["summary"] = oj::object();
  j["summary"]["order2"] = to_json(r.structured);
  if (r.baseline) j["summary"]["baseline_lr"] = to_json(*r.baseline);
  j["per_restart"] = oj::array();
  for (std::size_t i = 0; i < r.structured_per_restart.size(); ++i) {
    oj e{{"restart", i}, {"order2", to_json(r.structured_per_restart[i])}};
    if (i < r.baseline_per_restart.size()) e["baseline_lr"] = to_json(r.baseline_per_restart[i]);
    j["per_restart"].push_back(std::move(e));
  }
  j["per_fold"] = oj::array();
  for (const auto& e : r.entries) {
    oj je{{"restart", e.restart},
          {"fold", e.fold},
          {"train_sequences", e.train_sequences},
          {"test_sequences", e.test_sequences},
          {"order2", to_json(e.structured)}};
    if (e.baseline) je["baseline_lr"] = to_json(*e.baseline);
    j["per_fold"].push_back(std::move(je));
  }
  return j;
}

}  // namespace relseq
