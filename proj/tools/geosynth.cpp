// geosynth: command-line front end. Exit codes: 0 ok, 1 domain error, 2 usage.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "geosynth/dsl.hpp"
#include "geosynth/endpoint.hpp"
#include "geosynth/eval.hpp"
#include "geosynth/layout.hpp"
#include "geosynth/pipeline.hpp"
#include "geosynth/render.hpp"

namespace fs = std::filesystem;
using namespace geosynth;
using nlohmann::json;

namespace {

bool g_json = false;

void emit(const json& j, const std::string& human) {
  if (g_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << human;
  }
}

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Program lines may be bare DSL or "<task>\t<stage>\t<dsl>" rows; blank
// lines and lines starting with '#' are skipped.
int cmd_parse(const std::string& path) {
  std::istringstream in(read_all(path));
  std::string line;
  int lineno = 0, ok = 0;
  json errors = json::array();
  std::string human;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.rfind('\t');
    const auto src = tab == std::string::npos ? line : line.substr(tab + 1);
    try {
      const auto program = dsl::parse_program(src);
      ++ok;
      if (!g_json) human += dsl::format_program(program) + "\n";
    } catch (const Error& e) {
      errors.push_back({{"line", lineno}, {"error", e.what()}});
      human += "line " + std::to_string(lineno) + ": " + e.what() + "\n";
    }
  }
  human += std::to_string(ok) + " programs OK";
  if (!errors.empty()) human += ", " + std::to_string(errors.size()) + " failed";
  emit({{"ok", ok}, {"failed", errors.size()}, {"errors", errors}}, human + "\n");
  return errors.empty() ? 0 : 1;
}

int cmd_render(const std::string& program, std::uint64_t seed, const std::string& out, bool letters,
               const std::string& config_path) {
  render::RenderConfig rc;
  if (!config_path.empty()) rc = render::render_config_from_json(json::parse(read_all(config_path)));
  layout::LayoutConfig lc;
  auto fig = layout::solve_program(dsl::parse_program(program), lc, seed);
  if (letters) {
    Rng rng(derive_seed(seed, {1}));
    fig = layout::assign_letters(fig, lc.letter_pool_size, rng);
  }
  const auto r = render::render(fig, rc);
  if (const auto parent = fs::path(out).parent_path(); !parent.empty()) fs::create_directories(parent);
  write_bytes(out + ".png", r.png);
  write_text(out + ".svg", r.svg);
  write_text(out + ".json", r.log.dump(2) + "\n");
  std::string human = "wrote " + out + ".png, " + out + ".svg, " + out + ".json\n";
  for (const auto& w : r.warnings) human += "warning: " + w + "\n";
  emit({{"png", out + ".png"}, {"svg", out + ".svg"}, {"log", out + ".json"}, {"warnings", r.warnings}}, human);
  return 0;
}

pipeline::PipelineConfig load_pipeline_config(const std::string& path, const std::string& out,
                                              const std::optional<std::uint64_t>& seed, int workers) {
  auto j = json::parse(read_all(path), nullptr, false);
  if (j.is_discarded()) throw Error(Errc::InvalidConfig, path + ": not valid JSON");
  if (!out.empty()) j["output_dir"] = out;
  if (seed) j["seed"] = *seed;
  if (workers > 0) j["workers"] = workers;
  return pipeline::config_from_json(j);
}

std::string counts_table(const pipeline::Manifest& m) {
  std::string s;
  for (const auto& [task, stages] : m.counts) {
    s += "  " + task;
    for (const auto& [stage, n] : stages) s += "  s" + stage + "=" + std::to_string(n);
    s += "\n";
  }
  return s;
}

int cmd_gen(const pipeline::PipelineConfig& config) {
  const auto m = pipeline::generate_dataset(config);
  std::size_t total = 0;
  for (const auto& [task, stages] : m.counts) {
    for (const auto& [stage, n] : stages) total += n;
  }
  emit(pipeline::to_json(m), "generated " + std::to_string(total) + " items in " + config.output_dir.string() +
                                 "\n" + counts_table(m) + "content hash " + m.content_hash + "\n");
  return 0;
}

int cmd_curriculum(pipeline::PipelineConfig config, const std::string& mode, const std::string& evaluator) {
  if (!mode.empty()) curriculum::parse_mode(mode, config.curriculum);
  if (!evaluator.empty()) config.evaluator = evaluator;
  config.validate();
  const auto out = pipeline::run_curriculum(config);
  std::string human = "mode " + curriculum::format_mode(config.curriculum) + ", " + std::to_string(out.records) +
                      " records\nround stage accuracy\n";
  json rounds = json::array();
  for (const auto& r : out.log.rounds) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%5d %5d %8.4f%s\n", r.round, r.stage, r.accuracy, r.advanced ? " advanced" : "");
    human += buf;
    rounds.push_back(curriculum::to_json(r));
  }
  human += "wrote " + (config.output_dir / "stream").string() + ", runlog.jsonl, curriculum.csv\n";
  emit({{"records", out.records}, {"final_stage", out.log.final_state.c}, {"rounds", rounds}}, human);
  return 0;
}

std::string report_text(const eval::Report& r) {
  std::string s;
  char buf[96];
  for (const auto& [task, avg] : r.per_task) {
    std::snprintf(buf, sizeof buf, "  %-4s %6.2f\n", task.c_str(), avg);
    s += buf;
  }
  std::snprintf(buf, sizeof buf, "overall %.2f over %zu items, parse failures %.1f%%, missing %zu\n", r.overall,
                r.n_items, 100.0 * r.parse_failure_rate, r.missing_ids.size());
  return s + buf;
}

void write_records(const std::string& path, const std::vector<eval::EvalRecord>& records) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  for (const auto& r : records) out << eval::to_json(r).dump() << "\n";
}

void write_report(const std::string& path, const eval::Report& r) {
  if (!path.empty()) write_text(path, eval::to_json(r).dump(2) + "\n");
}

int cmd_score(const std::string& dataset, const std::string& predictions, const std::string& report,
              const std::string& records) {
  const auto items = pipeline::load_dataset(dataset);
  std::ifstream in(predictions);
  if (!in) throw Error(Errc::Io, "cannot read " + predictions);
  const auto run = eval::score_predictions(items, in);
  write_report(report, run.report);
  write_records(records, run.records);
  emit(eval::to_json(run.report), report_text(run.report));
  return 0;
}

int cmd_eval(const std::string& dataset, const std::string& endpoint_path, eval::EndpointConfig overrides,
             bool has_concurrency, bool has_timeout, bool has_retries, const std::string& raw,
             const std::string& report, const std::string& records) {
  eval::EndpointConfig cfg;
  if (!endpoint_path.empty()) cfg = eval::endpoint_config_from_json(json::parse(read_all(endpoint_path)));
  if (has_concurrency) cfg.concurrency = overrides.concurrency;
  if (has_timeout) cfg.timeout_s = overrides.timeout_s;
  if (has_retries) cfg.max_retries = overrides.max_retries;
  cfg.validate();
  const auto items = pipeline::load_dataset(dataset);
  const auto raw_path = raw.empty() ? (fs::path(dataset) / "raw_responses.jsonl").string() : raw;
  const auto run = eval::evaluate_model(items, dataset, cfg, raw_path);
  write_report(report, run.report);
  write_records(records, run.records);
  emit(eval::to_json(run.report), report_text(run.report) + "raw responses in " + raw_path + "\n");
  return 0;
}

int cmd_stats(const std::string& dataset) {
  const auto items = pipeline::load_dataset(dataset);
  std::map<std::string, std::map<int, std::size_t>> counts;
  for (const auto& it : items) ++counts[std::string(qa::task_name(it.task))][it.stage];
  const auto v = pipeline::verify_dataset(dataset);
  std::string human = std::to_string(items.size()) + " items\n";
  json jcounts = json::object();
  for (const auto& [task, stages] : counts) {
    human += "  " + task;
    for (const auto& [stage, n] : stages) {
      human += "  s" + std::to_string(stage) + "=" + std::to_string(n);
      jcounts[task][std::to_string(stage)] = n;
    }
    human += "\n";
  }
  human += v.ok ? "manifest verified\n" : "manifest check FAILED\n";
  for (const auto& p : v.problems) human += "  " + p + "\n";
  emit({{"items", items.size()}, {"counts", jcounts}, {"verified", v.ok}, {"problems", v.problems}}, human);
  return v.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic geometry perception datasets: construction DSL, layout, rendering, QA, curriculum, evaluation"};
  app.set_version_flag("--version", std::string(pipeline::kVersion));
  app.add_flag("--json", g_json, "Machine-readable JSON output");
  app.require_subcommand(1);

  auto* parse = app.add_subcommand("parse", "Validate construction programs, one per line");
  std::string parse_path;
  parse->add_option("file", parse_path, "Program file ('-' for stdin)")->required();

  auto* rend = app.add_subcommand("render", "Solve one program and write PNG, SVG and render log");
  std::string program, out_prefix = "figure", render_cfg;
  std::uint64_t render_seed = 0;
  bool letters = false;
  rend->add_option("program", program, "Construction program")->required();
  rend->add_option("--seed", render_seed, "Layout seed")->required();
  rend->add_option("-o,--out", out_prefix, "Output path prefix");
  rend->add_flag("--letters", letters, "Assign random letters from the pool");
  rend->add_option("--config", render_cfg, "Render config JSON")->check(CLI::ExistingFile);

  std::string config_path, out_dir, mode, evaluator;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  auto* gen = app.add_subcommand("gen", "Generate a dataset directory");
  auto* cur = app.add_subcommand("curriculum", "Run the curriculum schedule and emit the training stream");
  for (auto* sub : {gen, cur}) {
    sub->add_option("config", config_path, "Pipeline config JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "Output directory (overrides config)");
    sub->add_option("--seed", seed, "Global seed (overrides config)");
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::NonNegativeNumber);
  }
  cur->add_option("--mode", mode, "pure(k), mixed or curriculum");
  cur->add_option("--evaluator", evaluator, "synthetic, perfect or zero")
      ->check(CLI::IsMember({"synthetic", "perfect", "zero"}));

  std::string dataset, predictions, report_path, records_path, endpoint_path, raw_path;
  auto* score = app.add_subcommand("score", "Score a predictions JSONL file against a dataset");
  score->add_option("dataset", dataset, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  score->add_option("predictions", predictions, "Predictions JSONL {id, response}")->required()->check(CLI::ExistingFile);

  auto* ev = app.add_subcommand("eval", "Query a chat-completions endpoint for every item and score it");
  eval::EndpointConfig overrides;
  ev->add_option("dataset", dataset, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  ev->add_option("--endpoint", endpoint_path, "Endpoint config JSON")->check(CLI::ExistingFile);
  auto* conc = ev->add_option("--concurrency", overrides.concurrency, "Requests in flight")->check(CLI::PositiveNumber);
  auto* tmo = ev->add_option("--timeout", overrides.timeout_s, "Per-request timeout, seconds")->check(CLI::PositiveNumber);
  auto* ret = ev->add_option("--retries", overrides.max_retries, "Retries on transient failures")->check(CLI::NonNegativeNumber);
  ev->add_option("--raw", raw_path, "Raw response log (default <dataset>/raw_responses.jsonl)");
  for (auto* sub : {score, ev}) {
    sub->add_option("--report", report_path, "Write the report JSON here");
    sub->add_option("--records", records_path, "Write per-item records JSONL here");
  }

  auto* stats = app.add_subcommand("stats", "Summarize a dataset and verify its manifest");
  stats->add_option("dataset", dataset, "Dataset directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*parse) return cmd_parse(parse_path);
    if (*rend) return cmd_render(program, render_seed, out_prefix, letters, render_cfg);
    if (*gen) return cmd_gen(load_pipeline_config(config_path, out_dir, seed, workers));
    if (*cur) return cmd_curriculum(load_pipeline_config(config_path, out_dir, seed, workers), mode, evaluator);
    if (*score) return cmd_score(dataset, predictions, report_path, records_path);
    if (*ev) {
      return cmd_eval(dataset, endpoint_path, overrides, conc->count() > 0, tmo->count() > 0, ret->count() > 0,
                      raw_path, report_path, records_path);
    }
    if (*stats) return cmd_stats(dataset);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
