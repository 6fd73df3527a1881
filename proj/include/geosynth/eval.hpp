#pragma once

// Prediction scoring: |P|/|G| when P is a non-empty subset of G, else 0.
// Model responses are parsed by locating the task's answer marker.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "geosynth/error.hpp"
#include "geosynth/qa.hpp"
#include "json.hpp"

namespace geosynth::eval {

using qa::kAllTasks;
using qa::QAItem;
using qa::Task;
using qa::task_name;

using AnswerSet = std::set<std::string>;

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (d <= 0) throw Error(Errc::EmptyGroundTruth, "rational with non-positive denominator");
    const auto g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

inline Rational score(const AnswerSet& g, const AnswerSet& p) {
  if (g.empty()) throw Error(Errc::EmptyGroundTruth, "ground truth set is empty");
  if (p.empty() || !std::includes(g.begin(), g.end(), p.begin(), p.end())) return {0, 1};
  return {static_cast<std::int64_t>(p.size()), static_cast<std::int64_t>(g.size())};
}

// ---- prompt templates ----------------------------------------------------

inline std::string_view prompt_template(Task task) {
  switch (task) {
    case Task::POL:
      return "Answer me directly just with the all points lie on the line mentioned in the question (do not "
             "include the point mentioned in the question).\n"
             "Answer template:\n"
             "  (If only one point) The other point is: \"your point\".\n"
             "Or\n"
             "  (if multiple points) The other points are: \"your points\".\n"
             "For example:\n"
             "  The other point is: A\n"
             "Or\n"
             "  The other points are: A, B, C\n";
    case Task::POC:
      return "Answer me directly just with the all points lie on the circle mentioned in the question.\n"
             "Answer template:\n"
             "  (If only one point) The point is: \"your point\".\n"
             "Or\n"
             "  (If multiple points) The points are: \"your points\".\n"
             "For example:\n"
             "  The point is: A\n"
             "Or:\n"
             "  The points are: A, B, C\n";
    case Task::ALC:
      return "Answer me directly just with the classification of the angle mentioned in the question.\n"
             "Answer template:\n"
             "  The angle is: \"your angle\".\n"
             "For example:\n"
             "  The angle is: acute\n"
             "Or:\n"
             "  The angle is: obtuse\n";
    case Task::LHC:
      return "Answer me directly just with the longer line mentioned in the question.\n"
             "Answer template:\n"
             "  The longer line is: \"your line\".\n"
             "For example:\n"
             "  The longer line is: BC\n"
             "Or:\n"
             "  The longer line is: DE\n";
    case Task::PRA:
      return "Answer me directly just with the all lines which are parallel to the line mentioned in the "
             "question (do not include the line mentioned in the question).\n"
             "Answer template:\n"
             "  (If only one line) The line is: \"your line\".\n"
             "Or\n"
             "  (If multiple lines) The lines are: \"your lines\".\n"
             "For example:\n"
             "  The line is: BC\n"
             "Or:\n"
             "  The lines are: BC, DE\n";
    case Task::PEP:
      return "Answer me directly just with the all lines which are perpendicular to the line mentioned in the "
             "question (do not include the line mentioned in the question).\n"
             "Answer template:\n"
             "  (If only one line) The line is: \"your line\".\n"
             "Or\n"
             "  (If multiple lines) The lines are: \"your lines\".\n"
             "For example:\n"
             "  The line is: BC\n"
             "Or:\n"
             "  The lines are: BC, DE\n";
    case Task::EQL:
      return "Answer me directly just with the annotations presented on the image.\n"
             "Answer template:\n"
             "  The annotation is: \"your annotation\".\n"
             "For example:\n"
             "  The annotation is: 2x+4\n"
             "Or:\n"
             "  The annotations is: 90\n";
  }
  return "";
}

/// Text sent to a model: the task template followed by the question.
inline std::string build_prompt(const QAItem& item) {
  return std::string(prompt_template(item.task)) + "Question: " + item.question;
}

/// Response in template form for `gt`, as an ideal model would write it.
inline std::string template_response(Task task, const std::string& gt) {
  auto list = [](const std::vector<std::string>& parts) { return qa::detail::joined(parts, ", "); };
  switch (task) {
    case Task::POL:
    case Task::POC: {
      std::vector<std::string> pts;
      for (char c : gt) pts.emplace_back(1, c);
      const bool one = pts.size() == 1;
      if (task == Task::POL) return std::string(one ? "The other point is: " : "The other points are: ") + list(pts);
      return std::string(one ? "The point is: " : "The points are: ") + list(pts);
    }
    case Task::PRA:
    case Task::PEP: {
      std::vector<std::string> lines;
      for (std::size_t pos = 0; pos <= gt.size();) {
        const auto next = std::min(gt.find(", ", pos), gt.size());
        lines.push_back(gt.substr(pos, std::min<std::size_t>(2, next - pos)));
        pos = next + 2;
      }
      return std::string(lines.size() == 1 ? "The line is: " : "The lines are: ") + list(lines);
    }
    case Task::ALC: return "The angle is: " + gt;
    case Task::LHC: return "The longer line is: " + gt;
    case Task::EQL: return "The annotation is: " + gt;
  }
  return "";
}

// ---- response parsing ----------------------------------------------------

namespace detail {

inline std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::string trim(std::string_view s, std::string_view extra = "") {
  auto drop = [&](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || extra.find(c) != std::string_view::npos;
  };
  std::size_t b = 0, e = s.size();
  while (b < e && drop(s[b])) ++b;
  while (e > b && drop(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

/// Marker patterns per task: the template phrases and the dataset answer
/// phrasings, so a response equal to the dataset answer also parses.
inline const std::vector<std::regex>& markers(Task task) {
  auto make = [](std::initializer_list<const char*> ps) {
    std::vector<std::regex> out;
    for (const char* p : ps) out.emplace_back(p, std::regex::icase | std::regex::ECMAScript);
    return out;
  };
  static const std::map<Task, std::vector<std::regex>> table{
      {Task::POL, make({R"(the other points?\s+(?:is|are)\s*:)", R"(the points?\s+lying on line\s+[a-z]{2}\s+(?:is|are)\s*:?)"})},
      {Task::POC, make({R"(the points?\s+(?:is|are)\s*:)", R"(the points?\s+lying on circle\s+[a-z]\s+(?:is|are)\s*:?)"})},
      {Task::ALC, make({R"(the angle\s+is\s*:)", R"(angle\s+[a-z]{3}\s+is\s*:?)"})},
      {Task::LHC, make({R"(the longer line\s+is\s*:?)"})},
      {Task::PRA, make({R"(the lines?\s+(?:is|are)\s*:)", R"(the lines?\s+parallel to\s+(?:line\s+)?[a-z]{2}\s+(?:is|are)\s*:?)"})},
      {Task::PEP, make({R"(the lines?\s+(?:is|are)\s*:)", R"(the lines?\s+perpendicular to\s+(?:line\s+)?[a-z]{2}\s+(?:is|are)\s*:?)"})},
      {Task::EQL, make({R"(the annotations?\s+(?:is|are)\s*:)", R"(is annotated as\s*:?)", R"(is equal to\s+(?:angle|segment|line)\s*:?)"})},
  };
  return table.at(task);
}

/// Text after the last marker occurrence, up to the end of that line.
inline std::optional<std::string> payload(Task task, const std::string& raw) {
  std::optional<std::size_t> best;
  for (const auto& re : markers(task)) {
    for (auto it = std::sregex_iterator(raw.begin(), raw.end(), re); it != std::sregex_iterator(); ++it) {
      const auto end = static_cast<std::size_t>(it->position() + it->length());
      if (!best || end > *best) best = end;
    }
  }
  if (!best) return std::nullopt;
  const auto eol = raw.find('\n', *best);
  return trim(raw.substr(*best, eol == std::string::npos ? std::string::npos : eol - *best), "\"'`*.;:!");
}

inline std::vector<std::string> tokens(const std::string& payload) {
  static const std::regex sep(R"(\s*(?:,|\band\b|\s)\s*)", std::regex::icase);
  std::vector<std::string> out;
  for (std::sregex_token_iterator it(payload.begin(), payload.end(), sep, -1), end; it != end; ++it) {
    auto t = trim(it->str(), "\"'`*.;:!()");
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

inline bool all_letters(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
}

inline std::string line_key(std::string s) { return qa::detail::sorted_key(upper(std::move(s))); }

/// Angle names are read in either direction.
inline std::string angle_key(const std::string& s) { return std::min(s, qa::detail::reversed(s)); }

inline std::string eql_key(const std::string& s) {
  if (s.size() == 2 && all_letters(s) && upper(s) == s) return line_key(s);
  if (s.size() == 3 && all_letters(s) && upper(s) == s) return angle_key(s);
  return s;
}

}  // namespace detail

struct ParsedResponse {
  AnswerSet answers;
  bool parse_ok = false;
};

/// Total function: a response without a recognised marker or with a
/// malformed payload parses to the empty set with parse_ok = false.
inline ParsedResponse parse_response(Task task, const std::string& raw) {
  using namespace detail;
  ParsedResponse out;
  const auto body = payload(task, raw);
  if (!body || body->empty()) return out;
  auto fail = [] { return ParsedResponse{}; };
  switch (task) {
    case Task::POL:
    case Task::POC:
      for (const auto& t : tokens(*body)) {
        if (lower(t) == "point" || lower(t) == "points") continue;
        if (t.size() != 1 || !all_letters(t)) return fail();
        out.answers.insert(upper(t));
      }
      break;
    case Task::PRA:
    case Task::PEP:
      for (const auto& t : tokens(*body)) {
        if (lower(t) == "line" || lower(t) == "lines") continue;
        if (t.size() != 2 || !all_letters(t)) return fail();
        out.answers.insert(line_key(t));
      }
      break;
    case Task::LHC: {
      auto ts = tokens(*body);
      if (!ts.empty() && lower(ts.front()) == "line") ts.erase(ts.begin());
      if (ts.size() != 1 || ts[0].size() != 2 || !all_letters(ts[0])) return fail();
      out.answers.insert(line_key(ts[0]));
      break;
    }
    case Task::ALC: {
      const auto v = lower(*body);
      if (v != "acute" && v != "obtuse") return fail();
      out.answers.insert(v);
      break;
    }
    case Task::EQL: out.answers.insert(eql_key(*body)); break;
  }
  out.parse_ok = !out.answers.empty();
  return out;
}

/// Ground-truth set of an item.
inline AnswerSet ground_truth(Task task, const std::string& gt) {
  AnswerSet g;
  switch (task) {
    case Task::POL:
    case Task::POC:
      for (char c : gt) g.insert(std::string(1, c));
      break;
    case Task::PRA:
    case Task::PEP:
      for (std::size_t pos = 0; pos < gt.size();) {
        const auto next = std::min(gt.find(", ", pos), gt.size());
        g.insert(detail::line_key(gt.substr(pos, next - pos)));
        pos = next + 2;
      }
      break;
    case Task::LHC: g.insert(detail::line_key(gt)); break;
    case Task::ALC: g.insert(gt); break;
    case Task::EQL: g.insert(detail::eql_key(detail::trim(gt))); break;
  }
  g.erase("");
  if (g.empty()) throw Error(Errc::EmptyGroundTruth, "item has an empty ground truth");
  return g;
}

/// Lines in PRA/PEP ground truth carry every point on the line; a predicted
/// two-point name denotes the line that contains both of its points.
inline AnswerSet resolve_lines(const AnswerSet& predicted, const AnswerSet& g) {
  AnswerSet out;
  for (const auto& p : predicted) {
    auto hit = std::find_if(g.begin(), g.end(), [&](const std::string& line) {
      return std::all_of(p.begin(), p.end(), [&](char c) { return line.find(c) != std::string::npos; });
    });
    out.insert(hit == g.end() ? p : *hit);
  }
  return out;
}

struct EvalRecord {
  std::string id;
  Task task = Task::POL;
  AnswerSet g;
  AnswerSet p;
  std::string raw_response;
  Rational score;
  bool parse_ok = false;
};

inline EvalRecord evaluate_item(const QAItem& item, const std::string& raw) {
  EvalRecord r;
  r.id = item.id;
  r.task = item.task;
  r.g = ground_truth(item.task, item.gt);
  r.raw_response = raw;
  auto parsed = parse_response(item.task, raw);
  r.parse_ok = parsed.parse_ok;
  r.p = item.task == Task::PRA || item.task == Task::PEP ? resolve_lines(parsed.answers, r.g)
                                                         : std::move(parsed.answers);
  r.score = r.parse_ok ? score(r.g, r.p) : Rational{0, 1};
  return r;
}

inline nlohmann::json to_json(const EvalRecord& r) {
  return {{"id", r.id},
          {"task", std::string(task_name(r.task))},
          {"gt", std::vector<std::string>(r.g.begin(), r.g.end())},
          {"pred", std::vector<std::string>(r.p.begin(), r.p.end())},
          {"response", r.raw_response},
          {"score", {r.score.num, r.score.den}},
          {"parse_ok", r.parse_ok}};
}

struct Report {
  std::map<std::string, double> per_task;  // mean score x 100
  double overall = 0.0;                    // mean of the per-task averages
  std::size_t n_items = 0;
  double parse_failure_rate = 0.0;  // over items that received a response
  std::vector<std::string> missing_ids;
};

inline nlohmann::json to_json(const Report& r) {
  return {{"per_task", r.per_task},
          {"overall", r.overall},
          {"n_items", r.n_items},
          {"parse_failure_rate", r.parse_failure_rate},
          {"missing_ids", r.missing_ids}};
}

/// Aggregates records; ids in `missing` had no response and count as 0.
inline Report summarize(const std::vector<EvalRecord>& records, std::vector<std::string> missing = {}) {
  Report rep;
  std::set<std::string> missing_set(missing.begin(), missing.end());
  std::map<std::string, std::pair<double, std::size_t>> acc;
  std::size_t answered = 0, failed = 0;
  for (const auto& r : records) {
    auto& [sum, n] = acc[std::string(task_name(r.task))];
    sum += r.score.value();
    ++n;
    if (!missing_set.count(r.id)) {
      ++answered;
      if (!r.parse_ok) ++failed;
    }
  }
  for (const auto& [task, v] : acc) rep.per_task[task] = 100.0 * v.first / static_cast<double>(v.second);
  if (!rep.per_task.empty()) {
    double total = 0.0;
    for (const auto& [task, avg] : rep.per_task) total += avg;
    rep.overall = total / static_cast<double>(rep.per_task.size());
  }
  rep.n_items = records.size();
  rep.parse_failure_rate = answered ? static_cast<double>(failed) / static_cast<double>(answered) : 0.0;
  rep.missing_ids = std::move(missing);
  return rep;
}

/// Reads predictions JSONL lines {"id", "response"}.
inline std::map<std::string, std::string> read_predictions(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::MalformedPredictions, "line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("response") ||
        !j["response"].is_string()) {
      throw Error(Errc::MalformedPredictions, "line " + std::to_string(lineno) + ": need string id and response");
    }
    const auto id = j["id"].get<std::string>();
    if (!out.emplace(id, j["response"].get<std::string>()).second) {
      throw Error(Errc::MalformedPredictions, "duplicate id '" + id + "'");
    }
  }
  return out;
}

struct ScoredRun {
  std::vector<EvalRecord> records;
  Report report;
};

/// Scores responses keyed by item id; items without a response score 0.
inline ScoredRun score_responses(const std::vector<QAItem>& dataset, const std::map<std::string, std::string>& responses) {
  ScoredRun out;
  std::vector<std::string> missing;
  for (const auto& item : dataset) {
    const auto it = responses.find(item.id);
    if (it == responses.end()) {
      missing.push_back(item.id);
      out.records.push_back(evaluate_item(item, ""));
    } else {
      out.records.push_back(evaluate_item(item, it->second));
    }
  }
  out.report = summarize(out.records, std::move(missing));
  return out;
}

inline ScoredRun score_predictions(const std::vector<QAItem>& dataset, std::istream& predictions) {
  return score_responses(dataset, read_predictions(predictions));
}

}  // namespace geosynth::eval
