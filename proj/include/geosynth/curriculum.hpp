#pragma once

// Staged data emission: threshold advancement on the current stage and an
// exponentially attenuated mixture over stages centred on it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "geosynth/error.hpp"
#include "geosynth/rng.hpp"
#include "json.hpp"

namespace geosynth::curriculum {

enum class Mode { Pure, Mixed, Curriculum };

struct CurriculumConfig {
  int N = 3;
  double theta = 0.99;
  double alpha = 1.0;
  int M = 50;
  int K = 500;
  int B = 64;
  Mode mode = Mode::Curriculum;
  int pure_stage = 1;  // used when mode == Pure
  int holdout = 256;   // evaluation items per stage and round
  int replicas = 1;    // best-of-n runs, selected by final accuracy

  void validate() const {
    if (N < 1) throw Error(Errc::InvalidConfig, "N must be >= 1");
    if (!(theta > 0.0 && theta <= 1.0)) throw Error(Errc::InvalidConfig, "theta must lie in (0, 1]");
    if (!(alpha > 0.0)) throw Error(Errc::InvalidConfig, "alpha must be > 0");
    if (M < 0 || K < 0 || B < 0) throw Error(Errc::InvalidConfig, "M, K and B must be >= 0");
    if (mode == Mode::Pure && (pure_stage < 1 || pure_stage > N)) {
      throw Error(Errc::InvalidConfig, "pure stage must lie in [1, N]");
    }
    if (holdout < 0) throw Error(Errc::InvalidConfig, "holdout must be >= 0");
    if (replicas < 1) throw Error(Errc::InvalidConfig, "replicas must be >= 1");
  }
};

inline std::string format_mode(const CurriculumConfig& c) {
  switch (c.mode) {
    case Mode::Pure: return "pure(" + std::to_string(c.pure_stage) + ")";
    case Mode::Mixed: return "mixed";
    case Mode::Curriculum: return "curriculum";
  }
  return "?";
}

/// Accepts "curriculum", "mixed" and "pure(k)".
inline void parse_mode(const std::string& text, CurriculumConfig& c) {
  if (text == "curriculum") {
    c.mode = Mode::Curriculum;
  } else if (text == "mixed") {
    c.mode = Mode::Mixed;
  } else if (text.size() > 6 && text.starts_with("pure(") && text.back() == ')') {
    c.mode = Mode::Pure;
    try {
      std::size_t used = 0;
      const auto inner = text.substr(5, text.size() - 6);
      c.pure_stage = std::stoi(inner, &used);
      if (used != inner.size()) throw std::invalid_argument(inner);
    } catch (const std::logic_error&) {
      throw Error(Errc::InvalidConfig, "bad pure stage in '" + text + "'");
    }
  } else {
    throw Error(Errc::InvalidConfig, "unknown curriculum mode '" + text + "'");
  }
}

inline nlohmann::json to_json(const CurriculumConfig& c) {
  return {{"N", c.N},         {"theta", c.theta},       {"alpha", c.alpha},
          {"M", c.M},         {"K", c.K},               {"B", c.B},
          {"mode", format_mode(c)}, {"holdout", c.holdout}, {"replicas", c.replicas}};
}

inline CurriculumConfig curriculum_config_from_json(const nlohmann::json& j) {
  CurriculumConfig c;
  c.N = j.value("N", c.N);
  c.theta = j.value("theta", c.theta);
  c.alpha = j.value("alpha", c.alpha);
  c.M = j.value("M", c.M);
  c.K = j.value("K", c.K);
  c.B = j.value("B", c.B);
  if (j.contains("mode")) parse_mode(j["mode"].get<std::string>(), c);
  c.holdout = j.value("holdout", c.holdout);
  c.replicas = j.value("replicas", c.replicas);
  c.validate();
  return c;
}

struct CurriculumState {
  int c = 1;
  int round = 0;
  int step = 0;
  std::vector<std::optional<double>> accuracy_by_stage;  // last measured, index s-1
  std::vector<double> ratio_by_stage;                    // unnormalized weights in use
  std::vector<std::uint64_t> samples_emitted;

  explicit CurriculumState(int n = 3)
      : accuracy_by_stage(static_cast<std::size_t>(n)),
        ratio_by_stage(static_cast<std::size_t>(n), 0.0),
        samples_emitted(static_cast<std::size_t>(n), 0) {}
};

/// Unnormalized exp(-alpha |s - c|) for s = 1..n.
inline std::vector<double> attenuation_weights(int c, int n, double alpha) {
  std::vector<double> w;
  for (int s = 1; s <= n; ++s) w.push_back(std::exp(-alpha * std::abs(s - c)));
  return w;
}

/// Probability of each stage (index s-1) for the next emitted item.
inline std::vector<double> sampling_distribution(const CurriculumState& state, const CurriculumConfig& config) {
  const auto n = static_cast<std::size_t>(config.N);
  std::vector<double> w;
  switch (config.mode) {
    case Mode::Pure:
      w.assign(n, 0.0);
      w[static_cast<std::size_t>(config.pure_stage - 1)] = 1.0;
      return w;
    case Mode::Mixed:
      return std::vector<double>(n, 1.0 / static_cast<double>(n));
    case Mode::Curriculum:
      w = attenuation_weights(state.c, config.N, config.alpha);
      break;
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

/// Records the accuracy measured on the current stage and advances the stage
/// when it strictly exceeds theta. The stage is clamped at N.
inline CurriculumState advance(CurriculumState state, double accuracy, const CurriculumConfig& config) {
  state.accuracy_by_stage[static_cast<std::size_t>(state.c - 1)] = accuracy;
  if (accuracy > config.theta && state.c < config.N) ++state.c;
  return state;
}

template <typename Item>
struct Emission {
  int stage;
  Item item;
};

/// B items drawn i.i.d. from the sampling distribution. `sources[s-1](i)`
/// produces the i-th item of stage s, or nullopt when it cannot.
template <typename Source>
auto next_batch(CurriculumState& state, const CurriculumConfig& config, std::vector<Source>& sources, Rng& rng)
    -> std::vector<Emission<typename std::invoke_result_t<Source&, std::uint64_t>::value_type>> {
  using Item = typename std::invoke_result_t<Source&, std::uint64_t>::value_type;
  if (sources.size() != static_cast<std::size_t>(config.N)) {
    throw Error(Errc::InvalidConfig, "need one item source per stage");
  }
  const auto dist = sampling_distribution(state, config);
  state.ratio_by_stage = config.mode == Mode::Curriculum ? attenuation_weights(state.c, config.N, config.alpha)
                                                         : dist;
  std::vector<Emission<Item>> batch;
  batch.reserve(static_cast<std::size_t>(config.B));
  for (int i = 0; i < config.B; ++i) {
    const auto s = rng.categorical(dist);
    auto item = sources[s](state.samples_emitted[s]);
    if (!item) {
      throw Error(Errc::SourceExhausted, "stage " + std::to_string(s + 1) + " source cannot produce item " +
                                             std::to_string(state.samples_emitted[s]));
    }
    ++state.samples_emitted[s];
    batch.push_back({static_cast<int>(s) + 1, std::move(*item)});
  }
  return batch;
}

struct RoundRecord {
  int round = 0;          // 1-based
  int stage = 1;          // c while the round was emitted
  double accuracy = 0.0;  // measured on `stage` after the round
  bool advanced = false;
  std::vector<double> distribution;
  std::vector<std::uint64_t> counts;  // emitted this round, per stage
  std::uint64_t stream_hash = 0;      // fnv1a over the emitted stage sequence
};

struct RunLog {
  std::uint64_t seed = 0;
  std::vector<RoundRecord> rounds;
  std::uint64_t total_emitted = 0;
  CurriculumState final_state;

  double final_accuracy() const { return rounds.empty() ? 0.0 : rounds.back().accuracy; }
};

inline nlohmann::json to_json(const RoundRecord& r) {
  return {{"round", r.round},       {"stage", r.stage},
          {"accuracy", r.accuracy}, {"advanced", r.advanced},
          {"distribution", r.distribution}, {"counts", r.counts},
          {"stream_hash", r.stream_hash}};
}

inline void write_jsonl(std::ostream& out, const RunLog& log) {
  for (const auto& r : log.rounds) {
    auto j = to_json(r);
    j["seed"] = log.seed;
    out << j.dump() << '\n';
  }
}

/// Per-round CSV for plotting: round, stage, accuracy, p1..pN, n1..nN.
inline void write_plot_csv(std::ostream& out, const RunLog& log, int n) {
  out << "round,stage,accuracy";
  for (int s = 1; s <= n; ++s) out << ",p" << s;
  for (int s = 1; s <= n; ++s) out << ",n" << s;
  out << '\n';
  for (const auto& r : log.rounds) {
    out << r.round << ',' << r.stage << ',' << r.accuracy;
    for (double p : r.distribution) out << ',' << p;
    for (auto c : r.counts) out << ',' << c;
    out << '\n';
  }
}

/// Runs M rounds of K steps. After each batch `on_batch(state, batch)` is
/// called; after each round the current stage is evaluated with
/// `evaluate(stage, holdout)` and advanced.
template <typename Source, typename Evaluator, typename OnBatch>
RunLog run_schedule(const CurriculumConfig& config, Evaluator&& evaluate, std::vector<Source>& sources,
                    std::uint64_t seed, OnBatch&& on_batch) {
  config.validate();
  Rng rng(seed);
  RunLog log;
  log.seed = seed;
  CurriculumState state(config.N);
  for (int m = 1; m <= config.M; ++m) {
    state.round = m;
    RoundRecord rec;
    rec.round = m;
    rec.stage = state.c;
    rec.distribution = sampling_distribution(state, config);
    rec.counts.assign(static_cast<std::size_t>(config.N), 0);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int k = 1; k <= config.K; ++k) {
      state.step = k;
      const auto batch = next_batch(state, config, sources, rng);
      for (const auto& e : batch) {
        ++rec.counts[static_cast<std::size_t>(e.stage - 1)];
        h = (h ^ static_cast<std::uint64_t>(e.stage)) * 0x100000001b3ULL;
      }
      log.total_emitted += batch.size();
      on_batch(std::as_const(state), batch);
    }
    rec.stream_hash = h;
    rec.accuracy = evaluate(state.c, config.holdout);
    const int before = state.c;
    state = advance(std::move(state), rec.accuracy, config);
    rec.advanced = state.c != before;
    log.rounds.push_back(std::move(rec));
  }
  log.final_state = state;
  return log;
}

template <typename Source, typename Evaluator>
RunLog run_schedule(const CurriculumConfig& config, Evaluator&& evaluate, std::vector<Source>& sources,
                    std::uint64_t seed) {
  return run_schedule(config, std::forward<Evaluator>(evaluate), sources, seed, [](const auto&, const auto&) {});
}

/// Best of `config.replicas` runs by final accuracy (ties keep the earlier
/// replica). `run_one(replica_seed)` performs one complete run.
inline RunLog run_replicas(const CurriculumConfig& config, std::uint64_t seed,
                           const std::function<RunLog(std::uint64_t)>& run_one) {
  std::optional<RunLog> best;
  for (int r = 0; r < config.replicas; ++r) {
    auto log = run_one(config.replicas == 1 ? seed : derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    if (!best || log.final_accuracy() > best->final_accuracy()) best = std::move(log);
  }
  return std::move(*best);
}

/// Learner model for schedule experiments. A sample of stage s only teaches
/// once stage s-1 is mastered (accuracy above theta); the accuracy on stage
/// s is min(1, useful samples of stages <= s / T_s).
class SyntheticLearner {
 public:
  SyntheticLearner(std::vector<double> thresholds, double theta)
      : thresholds_(std::move(thresholds)),
        theta_(theta),
        useful_(thresholds_.size(), 0),
        mastered_at_(thresholds_.size()) {}

  void observe(int stage) {
    ++seen_;
    const auto s = static_cast<std::size_t>(stage - 1);
    if (s > 0 && !mastered_at_[s - 1]) return;
    ++useful_[s];
    for (std::size_t t = s; t < thresholds_.size(); ++t) {
      if (!mastered_at_[t] && accuracy(static_cast<int>(t) + 1) > theta_) mastered_at_[t] = seen_;
    }
  }

  double accuracy(int stage) const {
    std::uint64_t n = 0;
    for (int s = 0; s < stage; ++s) n += useful_[static_cast<std::size_t>(s)];
    return std::min(1.0, static_cast<double>(n) / thresholds_[static_cast<std::size_t>(stage - 1)]);
  }

  /// Total samples observed when the stage was first mastered.
  std::optional<std::uint64_t> mastered_at(int stage) const { return mastered_at_[static_cast<std::size_t>(stage - 1)]; }

  std::uint64_t seen() const { return seen_; }

 private:
  std::vector<double> thresholds_;
  double theta_;
  std::vector<std::uint64_t> useful_;
  std::vector<std::optional<std::uint64_t>> mastered_at_;
  std::uint64_t seen_ = 0;
};

}  // namespace geosynth::curriculum
