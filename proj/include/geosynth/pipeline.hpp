#pragma once

// End-to-end dataset production: seeded per-item generation, rendering,
// sharded JSONL output, run log and a hash-bearing manifest.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "geosynth/corpus.hpp"
#include "geosynth/curriculum.hpp"
#include "geosynth/dsl.hpp"
#include "geosynth/error.hpp"
#include "geosynth/hash.hpp"
#include "geosynth/image.hpp"
#include "geosynth/layout.hpp"
#include "geosynth/qa.hpp"
#include "geosynth/render.hpp"
#include "geosynth/rng.hpp"
#include "json.hpp"

#ifndef GEOSYNTH_VERSION
#define GEOSYNTH_VERSION "0.0.0"
#endif

namespace geosynth::pipeline {

namespace fs = std::filesystem;
using qa::QAItem;
using qa::Task;

inline constexpr std::string_view kVersion = GEOSYNTH_VERSION;

/// Shape programs per task, indexed by stage - 1.
using ShapeTable = std::map<Task, std::vector<std::vector<std::string>>>;

/// A stage without shapes of its own reuses the nearest lower stage's list.
inline void fill_stage_gaps(ShapeTable& shapes) {
  for (auto& [task, stages] : shapes) {
    for (std::size_t s = 1; s < stages.size(); ++s) {
      if (stages[s].empty()) stages[s] = stages[s - 1];
    }
  }
}

/// The built-in corpus, stage gaps filled.
inline ShapeTable default_shapes(int stages = 3) {
  ShapeTable out;
  for (Task t : qa::kAllTasks) out[t].assign(static_cast<std::size_t>(stages), {});
  for (const auto& s : corpus::kShapes) {
    const Task t = qa::parse_task(s.task);
    if (s.stage >= 1 && s.stage <= stages) out[t][static_cast<std::size_t>(s.stage - 1)].emplace_back(s.source);
  }
  fill_stage_gaps(out);
  return out;
}

struct PipelineConfig {
  fs::path output_dir = "dataset";
  std::optional<std::uint64_t> seed;
  std::vector<Task> tasks{qa::kAllTasks.begin(), qa::kAllTasks.end()};
  ShapeTable shapes = default_shapes();
  int items_per_stage = 10;
  std::map<Task, std::vector<int>> counts;  // per-task overrides, one per stage
  layout::LayoutConfig layout;
  render::RenderConfig render;
  curriculum::CurriculumConfig curriculum;
  int workers = 0;  // 0: hardware concurrency
  int max_item_attempts = 50;
  std::size_t shard_size = 10000;
  bool write_svg = true;
  bool write_render_log = true;
  // curriculum command
  std::string evaluator = "synthetic";  // synthetic | perfect | zero
  std::vector<double> learner_thresholds{2000, 6000, 20000};
  bool render_stream = false;

  int stages() const { return curriculum.N; }

  int count(Task t, int stage) const {
    const auto it = counts.find(t);
    if (it != counts.end() && static_cast<std::size_t>(stage) <= it->second.size()) {
      return it->second[static_cast<std::size_t>(stage - 1)];
    }
    return items_per_stage;
  }

  std::uint64_t global_seed() const {
    if (!seed) throw Error(Errc::InvalidConfig, "config needs an explicit seed");
    return *seed;
  }

  /// Checks counts, seed, and that every referenced shape parses.
  void validate() const {
    global_seed();
    layout.validate();
    render.validate();
    curriculum.validate();
    if (items_per_stage < 0 || max_item_attempts < 1 || shard_size < 1 || workers < 0) {
      throw Error(Errc::InvalidConfig, "counts must be >= 0 and limits >= 1");
    }
    for (const auto& [t, cs] : counts) {
      for (int c : cs) {
        if (c < 0) throw Error(Errc::InvalidConfig, "negative item count");
      }
    }
    if (evaluator != "synthetic" && evaluator != "perfect" && evaluator != "zero") {
      throw Error(Errc::InvalidConfig, "evaluator must be synthetic, perfect or zero");
    }
    if (learner_thresholds.size() != static_cast<std::size_t>(stages())) {
      throw Error(Errc::InvalidConfig, "learner_thresholds needs one value per stage");
    }
    for (Task t : tasks) {
      const auto it = shapes.find(t);
      if (it == shapes.end() || it->second.size() < static_cast<std::size_t>(stages())) {
        throw Error(Errc::InvalidConfig, "no shapes for every stage of " + std::string(qa::task_name(t)));
      }
      for (int s = 1; s <= stages(); ++s) {
        const auto& list = it->second[static_cast<std::size_t>(s - 1)];
        if (list.empty() && count(t, s) > 0) {
          throw Error(Errc::InvalidConfig, std::string(qa::task_name(t)) + " stage " + std::to_string(s) + " has no shapes");
        }
        for (const auto& src : list) {
          try {
            dsl::parse_program(src);
          } catch (const Error& e) {
            throw Error(e.code(), std::string(qa::task_name(t)) + " stage " + std::to_string(s) + ": " + e.what());
          }
        }
      }
    }
  }
};

/// Settings that determine the generated bytes (no paths or worker counts).
inline nlohmann::json content_json(const PipelineConfig& c) {
  nlohmann::json shapes = nlohmann::json::object();
  for (const auto& [t, stages] : c.shapes) shapes[std::string(qa::task_name(t))] = stages;
  nlohmann::json counts = nlohmann::json::object();
  for (Task t : c.tasks) {
    std::vector<int> per;
    for (int s = 1; s <= c.stages(); ++s) per.push_back(c.count(t, s));
    counts[std::string(qa::task_name(t))] = per;
  }
  std::vector<std::string> tasks;
  for (Task t : c.tasks) tasks.emplace_back(qa::task_name(t));
  return {{"seed", c.global_seed()},
          {"tasks", tasks},
          {"shapes", shapes},
          {"counts", counts},
          {"layout", layout::to_json(c.layout)},
          {"render", render::to_json(c.render)},
          {"curriculum", curriculum::to_json(c.curriculum)},
          {"max_item_attempts", c.max_item_attempts},
          {"shard_size", c.shard_size},
          {"write_svg", c.write_svg},
          {"write_render_log", c.write_render_log},
          {"evaluator", c.evaluator},
          {"learner_thresholds", c.learner_thresholds},
          {"render_stream", c.render_stream}};
}

inline std::string config_hash(const PipelineConfig& c) { return sha256_hex(content_json(c).dump()); }

/// Reads a JSON config. Missing fields keep their defaults; "shapes" entries
/// replace the built-in lists for the tasks they name.
inline PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  try {
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("curriculum")) c.curriculum = curriculum::curriculum_config_from_json(j["curriculum"]);
    c.shapes = default_shapes(c.stages());
    if (j.contains("tasks")) {
      c.tasks.clear();
      for (const auto& t : j["tasks"]) c.tasks.push_back(qa::parse_task(t.get<std::string>()));
    }
    if (j.contains("shapes")) {
      for (const auto& [name, stages] : j["shapes"].items()) {
        auto lists = stages.get<std::vector<std::vector<std::string>>>();
        lists.resize(static_cast<std::size_t>(c.stages()));
        c.shapes[qa::parse_task(name)] = lists;
      }
    }
    fill_stage_gaps(c.shapes);
    c.items_per_stage = j.value("items_per_stage", c.items_per_stage);
    if (j.contains("counts")) {
      for (const auto& [name, per] : j["counts"].items()) c.counts[qa::parse_task(name)] = per.get<std::vector<int>>();
    }
    if (j.contains("layout")) c.layout = layout::layout_config_from_json(j["layout"]);
    if (j.contains("render")) c.render = render::render_config_from_json(j["render"]);
    c.workers = j.value("workers", c.workers);
    c.max_item_attempts = j.value("max_item_attempts", c.max_item_attempts);
    c.shard_size = j.value("shard_size", c.shard_size);
    c.write_svg = j.value("write_svg", c.write_svg);
    c.write_render_log = j.value("write_render_log", c.write_render_log);
    c.evaluator = j.value("evaluator", c.evaluator);
    c.learner_thresholds = j.value("learner_thresholds", c.learner_thresholds);
    c.render_stream = j.value("render_stream", c.render_stream);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read config " + path.string());
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
}

// ---- per-item generation -------------------------------------------------

struct GeneratedItem {
  QAItem item;
  std::uint64_t seed = 0;  // child seed; replays the item on its own
  int attempts = 0;        // figures discarded before this one
  int resamples = 0;       // statement resamples of the accepted figure
  std::string shape;
  Figure figure;
};

inline std::string item_id(Task task, int stage, std::uint64_t index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-s%d-%06llu", std::string(qa::task_name(task)).c_str(), stage,
                static_cast<unsigned long long>(index));
  return buf;
}

inline std::uint64_t child_seed(std::uint64_t global, Task task, int stage, std::uint64_t index,
                                std::uint64_t stream = 0) {
  return derive_seed(global, {fnv1a64(qa::task_name(task)), static_cast<std::uint64_t>(stage), index, stream});
}

inline bool is_eligibility_error(Errc c) {
  return c == Errc::NotEnoughPoints || c == Errc::NoCircle || c == Errc::NoEligibleAngle ||
         c == Errc::NoEligiblePair || c == Errc::NoEligibleLines || c == Errc::UnsatisfiableConstruction ||
         c == Errc::NumericDegeneracy;
}

/// Generates one item from its child seed. A draw whose figure offers no
/// eligible fact (or cannot be laid out) is redrawn from the next attempt
/// seed; the item is rechecked geometrically before it is returned.
inline GeneratedItem generate_item(const PipelineConfig& config, Task task, int stage, std::uint64_t seed,
                                   const std::string& id) {
  const auto& shapes = config.shapes.at(task).at(static_cast<std::size_t>(stage - 1));
  if (shapes.empty()) throw Error(Errc::InvalidConfig, id + ": stage has no shapes");
  std::optional<Error> last;
  for (int attempt = 0; attempt < config.max_item_attempts; ++attempt) {
    const auto s = derive_seed(seed, {static_cast<std::uint64_t>(attempt)});
    Rng rng(s);
    const auto& src = shapes[rng.below(shapes.size())];
    try {
      auto fig = layout::solve_program(dsl::parse_program(src), config.layout, rng.next());
      fig = layout::assign_letters(fig, config.layout.letter_pool_size, rng);
      auto item = qa::synthesize(task, fig, rng);
      item.id = id;
      item.stage = stage;
      item.image = "images/" + id + ".png";
      if (auto bad = qa::recheck(item, fig)) {
        throw Error(Errc::UnsupportedPredicate, "recheck failed for " + id + ": " + *bad);
      }
      GeneratedItem out;
      out.item = std::move(item);
      out.seed = seed;
      out.attempts = attempt;
      for (int r : fig.resamples) out.resamples += r;
      out.shape = src;
      out.figure = std::move(fig);
      return out;
    } catch (const Error& e) {
      if (!is_eligibility_error(e.code())) throw;
      last = e;
    }
  }
  throw Error(last ? last->code() : Errc::UnsatisfiableConstruction,
              "no eligible figure after " + std::to_string(config.max_item_attempts) + " attempts" +
                  (last ? std::string(": ") + last->what() : std::string()));
}

/// Wraps a module error with the coordinates needed to replay the item.
inline Error with_context(const Error& e, Task task, int stage, std::uint64_t index, std::uint64_t seed) {
  return Error(e.code(), "task " + std::string(qa::task_name(task)) + " stage " + std::to_string(stage) + " index " +
                             std::to_string(index) + " seed " + std::to_string(seed) + ": " + e.what());
}

struct RenderedItem {
  GeneratedItem gen;
  render::RenderResult rendered;
};

/// Runs `work(i)` for i in [0, n) on up to `workers` threads. Results come
/// back in index order; the first error is rethrown.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int workers, Fn&& work) {
  std::vector<std::optional<T>> slots(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::optional<Error> failure;
  auto run = [&] {
    while (!stop) {
      const auto i = next++;
      if (i >= n) return;
      try {
        slots[i].emplace(work(i));
      } catch (const Error& e) {
        std::lock_guard lock(mu);
        if (!failure) failure = e;
        stop = true;
      }
    }
  };
  const auto threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) throw *failure;
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline int worker_count(const PipelineConfig& c) {
  if (c.workers > 0) return c.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---- output --------------------------------------------------------------

class ShardWriter {
 public:
  ShardWriter(fs::path dir, std::size_t shard_size) : dir_(std::move(dir)), shard_size_(shard_size) { open(); }

  void write(const nlohmann::json& record) {
    if (in_shard_ == shard_size_) {
      ++shard_;
      in_shard_ = 0;
      open();
    }
    out_ << record.dump() << '\n';
    ++in_shard_;
  }

  void close() {
    out_.close();
    if (!out_) throw Error(Errc::Io, "failed writing " + dir_.string());
  }

 private:
  void open() {
    char name[32];
    std::snprintf(name, sizeof name, "part-%05zu.jsonl", shard_);
    out_.close();
    out_.open(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error(Errc::Io, "cannot write " + (dir_ / name).string());
  }

  fs::path dir_;
  std::size_t shard_size_;
  std::size_t shard_ = 0;
  std::size_t in_shard_ = 0;
  std::ofstream out_;
};

inline nlohmann::json record_json(const GeneratedItem& g) {
  auto j = qa::to_json(g.item);
  j["seed"] = g.seed;
  return j;
}

inline void write_item_files(const fs::path& root, const PipelineConfig& config, const RenderedItem& r) {
  const fs::path png = root / r.gen.item.image;
  write_bytes(png, r.rendered.png);
  if (config.write_svg) write_text(fs::path(png).replace_extension(".svg"), r.rendered.svg);
  if (config.write_render_log) write_text(fs::path(png).replace_extension(".json"), r.rendered.log.dump());
}

struct Manifest {
  std::string tool_version;
  std::string config_hash;
  std::map<std::string, std::map<std::string, std::size_t>> counts;  // task -> stage -> n
  std::map<std::string, std::string> files;                          // relative path -> sha256
  std::string content_hash;
  std::string generated_at;
};

inline nlohmann::json to_json(const Manifest& m) {
  return {{"tool_version", m.tool_version}, {"config_hash", m.config_hash}, {"counts", m.counts},
          {"files", m.files},               {"content_hash", m.content_hash}, {"generated_at", m.generated_at}};
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
  Manifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.counts = j.at("counts").get<decltype(m.counts)>();
  m.files = j.at("files").get<decltype(m.files)>();
  m.content_hash = j.at("content_hash").get<std::string>();
  m.generated_at = j.value("generated_at", std::string{});
  return m;
}

/// Hash over (path, file hash) pairs in path order; the timestamp and the
/// manifest itself are not part of it.
inline std::string content_hash(const std::map<std::string, std::string>& files) {
  Sha256 h;
  for (const auto& [path, digest] : files) h.update(path).update("\t").update(digest).update("\n");
  return h.hex();
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Hashes every file under `root` except the manifest.
inline std::map<std::string, std::string> hash_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), root).generic_string();
    if (rel == "manifest.json" || rel == "manifest.json.tmp") continue;
    out[rel] = sha256_file(e.path());
  }
  return out;
}

/// Writes the manifest through a temporary file and a rename, so a
/// manifest only exists once the dataset is complete.
inline Manifest commit_manifest(const fs::path& root, const PipelineConfig& config,
                                std::map<std::string, std::map<std::string, std::size_t>> counts) {
  Manifest m;
  m.tool_version = std::string(kVersion);
  m.config_hash = config_hash(config);
  m.counts = std::move(counts);
  m.files = hash_tree(root);
  m.content_hash = content_hash(m.files);
  m.generated_at = utc_timestamp();
  write_text(root / "manifest.json.tmp", to_json(m).dump(2) + "\n");
  fs::rename(root / "manifest.json.tmp", root / "manifest.json");
  return m;
}

/// Removes the outputs of an earlier (possibly interrupted) run.
inline void prepare_output(const fs::path& root) {
  fs::create_directories(root);
  fs::remove(root / "manifest.json");
  fs::remove(root / "manifest.json.tmp");
  for (const char* sub : {"images", "data", "stream"}) fs::remove_all(root / sub);
  for (const char* f : {"runlog.jsonl", "curriculum.csv"}) fs::remove(root / f);
}

struct WorkItem {
  Task task;
  int stage;
  std::uint64_t index;
};

/// `gen`: every (task, stage, index) item, written in index order.
inline Manifest generate_dataset(const PipelineConfig& config) {
  config.validate();
  const auto root = config.output_dir;
  const auto seed = config.global_seed();
  prepare_output(root);
  fs::create_directories(root / "images");
  fs::create_directories(root / "data");

  std::vector<WorkItem> work;
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (Task t : config.tasks) {
    for (int s = 1; s <= config.stages(); ++s) {
      const int n = config.count(t, s);
      counts[std::string(qa::task_name(t))][std::to_string(s)] = static_cast<std::size_t>(n);
      for (int i = 0; i < n; ++i) work.push_back({t, s, static_cast<std::uint64_t>(i)});
    }
  }

  ShardWriter data(root / "data", config.shard_size);
  std::ofstream runlog(root / "runlog.jsonl", std::ios::binary | std::ios::trunc);
  if (!runlog) throw Error(Errc::Io, "cannot write runlog");
  const int workers = worker_count(config);
  const std::size_t window = static_cast<std::size_t>(workers) * 16;
  for (std::size_t base = 0; base < work.size(); base += window) {
    const auto n = std::min(window, work.size() - base);
    auto batch = parallel_map<RenderedItem>(n, workers, [&](std::size_t k) {
      const auto& w = work[base + k];
      const auto cs = child_seed(seed, w.task, w.stage, w.index);
      try {
        RenderedItem r;
        r.gen = generate_item(config, w.task, w.stage, cs, item_id(w.task, w.stage, w.index));
        r.rendered = render::render(r.gen.figure, config.render);
        write_item_files(root, config, r);
        return r;
      } catch (const Error& e) {
        throw with_context(e, w.task, w.stage, w.index, cs);
      }
    });
    for (const auto& r : batch) {
      data.write(record_json(r.gen));
      runlog << nlohmann::json{{"id", r.gen.item.id},
                               {"seed", r.gen.seed},
                               {"shape", r.gen.shape},
                               {"attempts", r.gen.attempts},
                               {"resamples", r.gen.resamples},
                               {"warnings", r.rendered.warnings}}
                    .dump()
             << '\n';
    }
  }
  data.close();
  runlog.close();
  return commit_manifest(root, config, std::move(counts));
}

// ---- reading datasets back -----------------------------------------------

inline std::vector<QAItem> load_dataset(const fs::path& root) {
  std::vector<fs::path> shards;
  if (!fs::is_directory(root / "data")) throw Error(Errc::Io, "no data/ directory in " + root.string());
  for (const auto& e : fs::directory_iterator(root / "data")) {
    if (e.path().extension() == ".jsonl") shards.push_back(e.path());
  }
  std::sort(shards.begin(), shards.end());
  std::vector<QAItem> out;
  for (const auto& p : shards) {
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        out.push_back(qa::item_from_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Io, p.string() + ": " + e.what());
      }
    }
  }
  return out;
}

struct Verification {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Checks file hashes, the content hash and JSONL counts against the manifest.
inline Verification verify_dataset(const fs::path& root) {
  Verification v;
  auto fail = [&](std::string msg) {
    v.ok = false;
    v.problems.push_back(std::move(msg));
  };
  if (!fs::exists(root / "manifest.json")) {
    fail("manifest.json missing (incomplete run)");
    return v;
  }
  std::ifstream in(root / "manifest.json");
  const auto m = manifest_from_json(nlohmann::json::parse(in));
  const auto actual = hash_tree(root);
  for (const auto& [path, digest] : m.files) {
    const auto it = actual.find(path);
    if (it == actual.end()) {
      fail("missing file " + path);
    } else if (it->second != digest) {
      fail("hash mismatch " + path);
    }
  }
  for (const auto& [path, digest] : actual) {
    if (!m.files.count(path)) fail("unlisted file " + path);
  }
  if (content_hash(m.files) != m.content_hash) fail("content hash mismatch");
  std::map<std::string, std::map<std::string, std::size_t>> seen;
  for (const auto& item : load_dataset(root)) {
    ++seen[std::string(qa::task_name(item.task))][std::to_string(item.stage)];
    if (!fs::exists(root / item.image)) fail("image missing for " + item.id);
  }
  for (const auto& [task, stages] : m.counts) {
    for (const auto& [stage, n] : stages) {
      const auto got = seen[task][stage];
      if (got != n) fail(task + " stage " + stage + ": manifest " + std::to_string(n) + ", jsonl " + std::to_string(got));
    }
  }
  return v;
}

// ---- curriculum stream ---------------------------------------------------

struct CurriculumOutcome {
  curriculum::RunLog log;
  std::size_t records = 0;
};

/// `curriculum`: runs the schedule with on-demand item generation. Stage-s
/// source index i yields task tasks[i mod T] with its own child seed. The
/// learner behind the advancement decisions is selected by
/// `config.evaluator`.
inline CurriculumOutcome run_curriculum(const PipelineConfig& config) {
  config.validate();
  const auto root = config.output_dir;
  const auto seed = config.global_seed();
  prepare_output(root);
  fs::create_directories(root / "stream");
  if (config.render_stream) fs::create_directories(root / "images");

  using Item = GeneratedItem;
  std::vector<std::function<std::optional<Item>(std::uint64_t)>> sources;
  for (int s = 1; s <= config.stages(); ++s) {
    sources.push_back([&config, seed, s](std::uint64_t i) -> std::optional<Item> {
      const Task t = config.tasks[i % config.tasks.size()];
      const auto index = i / config.tasks.size();
      const auto cs = child_seed(seed, t, s, index, 1);
      try {
        return generate_item(config, t, s, cs, "cur-" + item_id(t, s, index));
      } catch (const Error& e) {
        throw with_context(e, t, s, index, cs);
      }
    });
  }
  curriculum::SyntheticLearner learner(config.learner_thresholds, config.curriculum.theta);
  auto evaluate = [&](int stage, int) {
    if (config.evaluator == "perfect") return 1.0;
    if (config.evaluator == "zero") return 0.0;
    return learner.accuracy(stage);
  };
  ShardWriter stream(root / "stream", config.shard_size);
  CurriculumOutcome out;
  out.log = curriculum::run_schedule(
      config.curriculum, evaluate, sources, seed,
      [&](const curriculum::CurriculumState& st, const std::vector<curriculum::Emission<Item>>& batch) {
        for (const auto& e : batch) {
          learner.observe(e.stage);
          auto j = record_json(e.item);
          j["round"] = st.round;
          j["step"] = st.step;
          stream.write(j);
          ++out.records;
          if (config.render_stream) {
            RenderedItem r{e.item, render::render(e.item.figure, config.render)};
            write_item_files(root, config, r);
          }
        }
      });
  stream.close();
  {
    std::ofstream runlog(root / "runlog.jsonl", std::ios::binary | std::ios::trunc);
    curriculum::write_jsonl(runlog, out.log);
    std::ofstream csv(root / "curriculum.csv", std::ios::binary | std::ios::trunc);
    curriculum::write_plot_csv(csv, out.log, config.stages());
  }
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const auto& r : out.log.rounds) {
    for (std::size_t s = 0; s < r.counts.size(); ++s) counts["stream"][std::to_string(s + 1)] += r.counts[s];
  }
  commit_manifest(root, config, std::move(counts));
  return out;
}

}  // namespace geosynth::pipeline
