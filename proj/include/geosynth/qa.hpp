#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "geosynth/error.hpp"
#include "geosynth/facts.hpp"
#include "geosynth/figure.hpp"
#include "geosynth/rng.hpp"
#include "json.hpp"

namespace geosynth::qa {

enum class Task { POL, POC, ALC, LHC, PRA, PEP, EQL };

inline constexpr std::array<Task, 7> kAllTasks{Task::POL, Task::POC, Task::ALC, Task::LHC,
                                               Task::PRA, Task::PEP, Task::EQL};

inline std::string_view task_name(Task t) {
  switch (t) {
    case Task::POL: return "POL";
    case Task::POC: return "POC";
    case Task::ALC: return "ALC";
    case Task::LHC: return "LHC";
    case Task::PRA: return "PRA";
    case Task::PEP: return "PEP";
    case Task::EQL: return "EQL";
  }
  return "?";
}

inline Task parse_task(std::string_view name) {
  for (Task t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  throw Error(Errc::InvalidConfig, "unknown task '" + std::string(name) + "'");
}

struct QAItem {
  std::string id;
  Task task = Task::POL;
  int stage = 1;
  std::string question;
  std::string answer;
  std::string gt;
  std::string image;
};

inline nlohmann::json to_json(const QAItem& item) {
  // key order is fixed by nlohmann's sorted object map
  return {{"id", item.id},         {"task", std::string(task_name(item.task))},
          {"stage", item.stage},   {"image", item.image},
          {"question", item.question}, {"answer", item.answer},
          {"gt", item.gt}};
}

inline QAItem item_from_json(const nlohmann::json& j) {
  QAItem item;
  item.id = j.at("id").get<std::string>();
  item.task = parse_task(j.at("task").get<std::string>());
  item.stage = j.value("stage", 1);
  item.image = j.value("image", std::string{});
  item.question = j.value("question", std::string{});
  item.answer = j.value("answer", std::string{});
  item.gt = j.at("gt").get<std::string>();
  return item;
}

namespace detail {

inline std::string joined(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string letters(const std::vector<char>& pts) { return {pts.begin(), pts.end()}; }

inline std::string reversed(std::string s) {
  std::reverse(s.begin(), s.end());
  return s;
}

inline std::string sorted_key(std::string s) {
  std::sort(s.begin(), s.end());
  return s;
}

inline QAItem item(Task task, std::string q, std::string a, std::string gt) {
  QAItem out;
  out.task = task;
  out.question = std::move(q);
  out.answer = std::move(a);
  out.gt = std::move(gt);
  return out;
}

}  // namespace detail

// ---- PointLiesOnLine -----------------------------------------------------

/// POL item for the line through `line_points`, named by the ordered pair
/// (a, b); the answer is every other point on the line.
inline QAItem make_point_on_line(const std::vector<char>& line_points, char a, char b) {
  std::vector<std::string> rest;
  for (char p : line_points) {
    if (p != a && p != b) rest.emplace_back(1, p);
  }
  if (rest.empty() || line_points.size() < 3) {
    throw Error(Errc::NotEnoughPoints, "a line needs at least 3 points");
  }
  std::sort(rest.begin(), rest.end());
  const std::string line{a, b};
  const char* verb = rest.size() == 1 ? "is" : "are";
  return detail::item(Task::POL, "What is the point lying on line " + line + "?",
                      "The point lying on line " + line + " " + verb + " " + detail::joined(rest, ", "),
                      detail::joined(rest, ""));
}

/// One randomly chosen question among all equivalent ones: a random line
/// with at least 3 points, then a random ordered pair naming it.
inline QAItem gen_point_on_line(const std::vector<std::vector<char>>& collinear_sets, Rng& rng) {
  std::vector<const std::vector<char>*> eligible;
  for (const auto& s : collinear_sets) {
    if (s.size() >= 3) eligible.push_back(&s);
  }
  if (eligible.empty()) throw Error(Errc::NotEnoughPoints, "no line carries 3 or more points");
  const auto& line = *eligible[rng.below(eligible.size())];
  const auto i = rng.below(line.size());
  auto j = rng.below(line.size() - 1);
  if (j >= i) ++j;
  return make_point_on_line(line, line[i], line[j]);
}

// ---- PointLiesOnCircle ---------------------------------------------------

struct CircleMembership {
  char center;
  std::vector<char> members;
};

inline QAItem make_point_on_circle(const CircleMembership& circle) {
  std::vector<std::string> pts;
  for (char p : circle.members) {
    if (p != circle.center) pts.emplace_back(1, p);
  }
  if (pts.empty()) throw Error(Errc::NoCircle, "circle has no member points");
  std::sort(pts.begin(), pts.end());
  const std::string c(1, circle.center);
  return detail::item(Task::POC, "What are the point lying on circle " + c + "?",
                      "The point lying on circle " + c + " are " + detail::joined(pts, ", "),
                      detail::joined(pts, ""));
}

inline QAItem gen_point_on_circle(const std::vector<CircleMembership>& circles, Rng& rng) {
  std::vector<const CircleMembership*> eligible;
  for (const auto& c : circles) {
    if (std::any_of(c.members.begin(), c.members.end(), [&](char p) { return p != c.center; })) {
      eligible.push_back(&c);
    }
  }
  if (eligible.empty()) throw Error(Errc::NoCircle, "figure has no circle with member points");
  return make_point_on_circle(*eligible[rng.below(eligible.size())]);
}

// ---- AngleClassification -------------------------------------------------

/// Angles too close to 90 degrees, or degenerate, are never asked about.
inline bool angle_is_unambiguous(double deg) {
  return (deg >= 10.0 && deg <= 80.0) || (deg >= 100.0 && deg <= 170.0);
}

inline QAItem make_angle_classification(const facts::AngleFact& angle, bool reverse) {
  const std::string fwd = angle.angle.name();
  const std::string letter = reverse ? detail::reversed(fwd) : fwd;
  const std::string cls = angle.measure_deg < 90.0 ? "acute" : "obtuse";
  return detail::item(Task::ALC, "Is angle " + letter + " acute or obtuse?",
                      "Angle " + letter + " is " + cls, cls);
}

inline QAItem gen_angle_classification(const std::vector<facts::AngleFact>& angles, Rng& rng) {
  std::vector<const facts::AngleFact*> eligible;
  for (const auto& a : angles) {
    if (angle_is_unambiguous(a.measure_deg)) eligible.push_back(&a);
  }
  if (eligible.empty()) {
    throw Error(Errc::NoEligibleAngle, "no angle in [10,80] or [100,170] degrees");
  }
  const auto& pick = *eligible[rng.below(eligible.size())];
  return make_angle_classification(pick, rng.coin());
}

// ---- LineComparison ------------------------------------------------------

inline constexpr double kLengthRatioLimit = 0.7;

/// Both orderings of the comparison question, longer line first.
inline std::vector<QAItem> make_line_comparison(const facts::SegmentFact& x, const facts::SegmentFact& y) {
  const double shorter = std::min(x.length, y.length);
  const double longer = std::max(x.length, y.length);
  if (!(longer > 0.0) || !(shorter < kLengthRatioLimit * longer)) {
    throw Error(Errc::NoEligiblePair, "length ratio must be below 0.7");
  }
  const auto& l = x.length > y.length ? x : y;
  const auto& s = x.length > y.length ? y : x;
  const std::string ln = l.segment.name();
  const std::string sn = s.segment.name();
  return {detail::item(Task::LHC, "Which line is longer, " + ln + " or " + sn + "?",
                       "The longer line is " + ln, ln),
          detail::item(Task::LHC, "Which line is longer, " + sn + " or " + ln + "?",
                       "The longer line is " + ln, ln)};
}

inline std::vector<QAItem> gen_line_comparison(const std::vector<facts::SegmentFact>& segments, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> eligible;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    for (std::size_t j = i + 1; j < segments.size(); ++j) {
      const double a = segments[i].length;
      const double b = segments[j].length;
      if (std::min(a, b) < kLengthRatioLimit * std::max(a, b)) eligible.emplace_back(i, j);
    }
  }
  if (eligible.empty()) throw Error(Errc::NoEligiblePair, "no segment pair with ratio below 0.7");
  const auto [i, j] = eligible[rng.below(eligible.size())];
  return make_line_comparison(segments[i], segments[j]);
}

// ---- Parallel / Perpendicular --------------------------------------------

namespace detail {

inline QAItem make_line_relation(Task task, const std::vector<char>& query, char a, char b,
                                 const std::vector<std::vector<char>>& targets, Rng& rng) {
  if (targets.empty() || query.size() < 2) {
    throw Error(Errc::NoEligibleLines, "relation needs a query line and at least one target");
  }
  std::vector<std::string> shown;
  std::vector<std::string> gts;
  for (const auto& t : targets) {
    if (t.size() < 2) throw Error(Errc::NoEligibleLines, "target line needs 2 points");
    // two distinct points of the target line, in random order
    const auto i = rng.below(t.size());
    auto j = rng.below(t.size() - 1);
    if (j >= i) ++j;
    shown.push_back(std::string{t[i], t[j]});
    gts.push_back(sorted_key(letters(t)));
  }
  std::sort(gts.begin(), gts.end());
  const std::string rel = task == Task::PRA ? "parallel" : "perpendicular";
  const std::string line{a, b};
  const char* verb = shown.size() == 1 ? "is" : "are";
  return item(task, "What is the line " + rel + " to line " + line + "?",
              "According to the diagram, the line " + rel + " to " + line + " " + verb + " " +
                  joined(shown, ", "),
              joined(gts, ", "));
}

inline std::pair<char, char> random_pair(const std::vector<char>& pts, Rng& rng) {
  const auto i = rng.below(pts.size());
  auto j = rng.below(pts.size() - 1);
  if (j >= i) ++j;
  return {pts[i], pts[j]};
}

}  // namespace detail

/// Answer lines are shown as two sampled points each; gt keeps every point
/// of each target line (sorted, lines joined by ", ") for order-free scoring.
inline QAItem make_parallel(const std::vector<char>& query, char a, char b,
                            const std::vector<std::vector<char>>& targets, Rng& rng) {
  return detail::make_line_relation(Task::PRA, query, a, b, targets, rng);
}

inline QAItem make_perpendicular(const std::vector<char>& query, char a, char b,
                                 const std::vector<std::vector<char>>& targets, Rng& rng) {
  return detail::make_line_relation(Task::PEP, query, a, b, targets, rng);
}

/// `groups` are sets of mutually parallel lines (each a point list).
inline QAItem gen_parallel(const std::vector<std::vector<std::vector<char>>>& groups, Rng& rng) {
  std::vector<const std::vector<std::vector<char>>*> eligible;
  for (const auto& g : groups) {
    if (g.size() >= 2) eligible.push_back(&g);
  }
  if (eligible.empty()) throw Error(Errc::NoEligibleLines, "no pair of parallel lines");
  const auto& group = *eligible[rng.below(eligible.size())];
  const auto qi = rng.below(group.size());
  std::vector<std::vector<char>> rest;
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (i != qi) rest.push_back(group[i]);
  }
  const auto [a, b] = detail::random_pair(group[qi], rng);
  return make_parallel(group[qi], a, b, rest, rng);
}

struct PerpendicularFact {
  std::vector<char> source;
  std::vector<std::vector<char>> targets;
};

inline QAItem gen_perpendicular(const std::vector<PerpendicularFact>& facts, Rng& rng) {
  std::vector<const PerpendicularFact*> eligible;
  for (const auto& f : facts) {
    if (!f.targets.empty() && f.source.size() >= 2) eligible.push_back(&f);
  }
  if (eligible.empty()) throw Error(Errc::NoEligibleLines, "no perpendicular lines");
  const auto& f = *eligible[rng.below(eligible.size())];
  const auto [a, b] = detail::random_pair(f.source, rng);
  return make_perpendicular(f.source, a, b, f.targets, rng);
}

// ---- Equals --------------------------------------------------------------

struct EqualSpec {
  enum class Kind { AnglesValue, SegmentsValue, Angles, Segments };
  Kind kind;
  std::string left;   // point letters
  std::string right;  // point letters or annotation value
};

inline std::string format_equal_spec(const EqualSpec& s) {
  static constexpr std::array<std::string_view, 4> names{"angles_value", "segments_value", "angles",
                                                         "segments"};
  return std::string(names[static_cast<int>(s.kind)]) + ";" + s.left + "=" + s.right;
}

inline EqualSpec parse_equal_spec(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw Error(Errc::MalformedSpec, "missing ';' in equal spec");
  const std::string statement(text.substr(0, semi));
  const std::string content(text.substr(semi + 1));
  const auto eq = content.find('=');
  if (eq == std::string::npos || content.find('=', eq + 1) != std::string::npos) {
    throw Error(Errc::MalformedSpec, "equal spec needs exactly one '='");
  }
  EqualSpec s;
  s.left = content.substr(0, eq);
  s.right = content.substr(eq + 1);
  std::size_t arity = 0;
  bool pair = false;
  if (statement == "angles_value") {
    s.kind = EqualSpec::Kind::AnglesValue;
    arity = 3;
  } else if (statement == "segments_value") {
    s.kind = EqualSpec::Kind::SegmentsValue;
    arity = 2;
  } else if (statement == "angles") {
    s.kind = EqualSpec::Kind::Angles;
    arity = 3;
    pair = true;
  } else if (statement == "segments") {
    s.kind = EqualSpec::Kind::Segments;
    arity = 2;
    pair = true;
  } else {
    throw Error(Errc::MalformedSpec, "unknown equal statement '" + statement + "'");
  }
  auto points_ok = [&](const std::string& v) {
    return v.size() == arity &&
           std::all_of(v.begin(), v.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
  };
  if (!points_ok(s.left) || (pair && !points_ok(s.right)) || (!pair && s.right.empty())) {
    throw Error(Errc::MalformedSpec, "malformed equal spec '" + std::string(text) + "'");
  }
  return s;
}

inline QAItem gen_equal(const EqualSpec& s, Rng& rng) {
  using K = EqualSpec::Kind;
  auto flip = [&](const std::string& v) { return rng.coin() ? v : detail::reversed(v); };
  switch (s.kind) {
    case K::AnglesValue: {
      const auto letter = flip(s.left);
      return detail::item(Task::EQL, "What is the measure of angle " + letter + " as annotated?",
                          "Angle " + letter + " is annotated as " + s.right, s.right);
    }
    case K::SegmentsValue: {
      const auto letter = flip(s.left);
      return detail::item(Task::EQL, "What is the length of line " + letter + " as annotated?",
                          "Line " + letter + " is annotated as " + s.right, s.right);
    }
    case K::Angles:
    case K::Segments: {
      const auto first = flip(s.left);
      const auto second = flip(s.right);
      const bool query_first = rng.coin();
      const auto& query = query_first ? first : second;
      const auto& answer = query_first ? second : first;
      if (s.kind == K::Angles) {
        return detail::item(Task::EQL,
                            "What is the angle in the diagram that is equal to angle " + query,
                            "Angle " + query + " is equal to angle " + answer, answer);
      }
      return detail::item(Task::EQL,
                          "What is the segment in the diagram that is equal to segment " + query,
                          "Segment " + query + " is equal to segment " + answer, answer);
    }
  }
  throw Error(Errc::MalformedSpec, "unreachable");
}

inline QAItem gen_equal(std::string_view spec, Rng& rng) { return gen_equal(parse_equal_spec(spec), rng); }

/// Random annotation value: an integer in 1..180 or a short linear
/// expression such as "2x+4".
inline std::string random_annotation_value(Rng& rng) {
  if (rng.uniform() < 0.7) return std::to_string(1 + rng.below(180));
  const auto a = 2 + rng.below(8);
  const auto b = 1 + rng.below(20);
  return std::to_string(a) + "x+" + std::to_string(b);
}

// ---- Logical forms -------------------------------------------------------

/// Function-style predicate expression, e.g.
/// Equals(LengthOf(Line(Q, T)), 86). Atoms carry their text in `head`.
struct LogicalForm {
  std::string head;
  std::vector<LogicalForm> args;
  bool atom = false;

  friend bool operator==(const LogicalForm&, const LogicalForm&) = default;
};

namespace detail {

class LfParser {
 public:
  explicit LfParser(std::string_view s) : s_(s) {}

  LogicalForm parse() {
    auto lf = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return lf;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw Error(Errc::MalformedSpec, what, SourceLocation{1, pos_ + 1});
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  LogicalForm expr() {
    skip();
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '(' && s_[pos_] != ')' && s_[pos_] != ',') ++pos_;
    std::string text(s_.substr(start, pos_ - start));
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    if (text.empty()) fail("expected a name or value");
    LogicalForm lf;
    lf.head = text;
    if (pos_ < s_.size() && s_[pos_] == '(') {
      const bool ident = std::all_of(text.begin(), text.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
      });
      if (!ident) fail("bad predicate name '" + text + "'");
      ++pos_;
      lf.args.push_back(expr());
      skip();
      while (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        lf.args.push_back(expr());
        skip();
      }
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
    } else {
      lf.atom = true;
    }
    return lf;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline char lf_point(const LogicalForm& lf) {
  if (!lf.atom || lf.head.size() != 1 || lf.head[0] < 'A' || lf.head[0] > 'Z') {
    throw Error(Errc::MalformedSpec, "expected a point name, got '" + lf.head + "'");
  }
  return lf.head[0];
}

inline void expect(const LogicalForm& lf, std::string_view head, std::size_t arity) {
  if (lf.atom || lf.head != head || lf.args.size() != arity) {
    throw Error(Errc::MalformedSpec,
                "expected " + std::string(head) + " with " + std::to_string(arity) + " arguments");
  }
}

inline std::string lf_line(const LogicalForm& lf) {
  expect(lf, "Line", 2);
  return {lf_point(lf.args[0]), lf_point(lf.args[1])};
}

inline std::string lf_angle(const LogicalForm& lf) {
  expect(lf, "Angle", 3);
  return {lf_point(lf.args[0]), lf_point(lf.args[1]), lf_point(lf.args[2])};
}

inline std::string lf_text(const LogicalForm& lf) {
  if (lf.atom) return lf.head;
  std::string out = lf.head + "(";
  for (std::size_t i = 0; i < lf.args.size(); ++i) {
    if (i) out += ", ";
    out += lf_text(lf.args[i]);
  }
  return out + ")";
}

}  // namespace detail

inline LogicalForm parse_logical_form(std::string_view text) { return detail::LfParser(text).parse(); }

inline std::string format_logical_form(const LogicalForm& lf) { return detail::lf_text(lf); }

/// Converts one logical form into a question using the task templates. The
/// logical form stands in for the solved figure.
inline QAItem convert_logical_form(const LogicalForm& lf, Rng& rng) {
  using detail::lf_line;
  using detail::lf_point;
  if (lf.atom) throw Error(Errc::UnsupportedPredicate, "bare atom '" + lf.head + "'");
  if (lf.head == "PointLiesOnLine") {
    detail::expect(lf, "PointLiesOnLine", 2);
    const char p = lf_point(lf.args[0]);
    const auto line = lf_line(lf.args[1]);
    if (p == line[0] || p == line[1]) throw Error(Errc::MalformedSpec, "point names its own line");
    return make_point_on_line({line[0], p, line[1]}, line[0], line[1]);
  }
  if (lf.head == "PointLiesOnCircle") {
    if (lf.args.size() != 2 || lf.args[1].atom || lf.args[1].head != "Circle" ||
        lf.args[1].args.empty()) {
      throw Error(Errc::MalformedSpec, "expected PointLiesOnCircle(P, Circle(O, ...))");
    }
    return make_point_on_circle({lf_point(lf.args[1].args[0]), {lf_point(lf.args[0])}});
  }
  if (lf.head == "Parallel" || lf.head == "Perpendicular") {
    detail::expect(lf, lf.head, 2);
    auto first = lf_line(lf.args[0]);
    auto second = lf_line(lf.args[1]);
    if (rng.coin()) std::swap(first, second);
    const std::vector<char> query(first.begin(), first.end());
    const std::vector<std::vector<char>> targets{{second.begin(), second.end()}};
    return lf.head == "Parallel" ? make_parallel(query, first[0], first[1], targets, rng)
                                 : make_perpendicular(query, first[0], first[1], targets, rng);
  }
  if (lf.head == "Equals") {
    detail::expect(lf, "Equals", 2);
    const auto& lhs = lf.args[0];
    const auto& rhs = lf.args[1];
    auto measured = [](const LogicalForm& x, std::string_view head) {
      return !x.atom && x.head == head && x.args.size() == 1;
    };
    EqualSpec spec;
    if (measured(lhs, "LengthOf") && rhs.atom) {
      spec = {EqualSpec::Kind::SegmentsValue, lf_line(lhs.args[0]), rhs.head};
    } else if (measured(lhs, "MeasureOf") && rhs.atom) {
      spec = {EqualSpec::Kind::AnglesValue, detail::lf_angle(lhs.args[0]), rhs.head};
    } else if (measured(lhs, "LengthOf") && measured(rhs, "LengthOf")) {
      spec = {EqualSpec::Kind::Segments, lf_line(lhs.args[0]), lf_line(rhs.args[0])};
    } else if (measured(lhs, "MeasureOf") && measured(rhs, "MeasureOf")) {
      spec = {EqualSpec::Kind::Angles, detail::lf_angle(lhs.args[0]), detail::lf_angle(rhs.args[0])};
    } else {
      throw Error(Errc::MalformedSpec, "unsupported Equals form " + format_logical_form(lf));
    }
    return gen_equal(spec, rng);
  }
  throw Error(Errc::UnsupportedPredicate, "unsupported predicate '" + lf.head + "'");
}

// ---- Figure-driven synthesis ---------------------------------------------

namespace detail {

/// Adds segments exposing parallel / perpendicular structure, and right-angle
/// marks where perpendicular drawn lines meet.
inline void prepare(Task task, Figure& fig) {
  if (task == Task::PRA) facts::reveal_relations(fig, false);
  if (task != Task::PEP) return;
  facts::reveal_relations(fig, true);
  const auto f = facts::extract(fig);
  for (const auto& [src, targets] : f.perpendicular) {
    for (auto t : targets) {
      if (t < src) continue;
      for (char q : f.lines[src].points) {
        if (!f.lines[t].contains(q)) continue;
        const auto& a = f.lines[src].points;
        const auto& b = f.lines[t].points;
        const char p = a.front() != q ? a.front() : a.back();
        const char r = b.front() != q ? b.front() : b.back();
        fig.annotations.right_angle_marks.push_back({p, q, r});
      }
    }
  }
}

}  // namespace detail

/// Every question the figure supports for `task`, one per underlying fact,
/// each in one randomly chosen orientation. LHC facts yield both orderings.
/// EQL covers the equal-pair facts and marks each pair as an annotation
/// group; annotated values come from synthesize().
inline std::vector<QAItem> synthesize_all(Task task, Figure& fig, Rng& rng) {
  detail::prepare(task, fig);
  const auto f = facts::extract(fig);
  std::vector<QAItem> out;
  switch (task) {
    case Task::POL:
      for (const auto& l : f.lines) {
        if (l.points.size() < 3) continue;
        const auto [a, b] = detail::random_pair(l.points, rng);
        out.push_back(make_point_on_line(l.points, a, b));
      }
      if (out.empty()) throw Error(Errc::NotEnoughPoints, "no line carries 3 or more points");
      break;
    case Task::POC:
      for (const auto& c : f.circles) {
        if (!c.members.empty()) out.push_back(make_point_on_circle({c.center, c.members}));
      }
      if (out.empty()) throw Error(Errc::NoCircle, "figure has no circle with member points");
      break;
    case Task::ALC:
      for (const auto& a : f.angles) {
        if (angle_is_unambiguous(a.measure_deg)) out.push_back(make_angle_classification(a, rng.coin()));
      }
      if (out.empty()) throw Error(Errc::NoEligibleAngle, "no angle in [10,80] or [100,170] degrees");
      break;
    case Task::LHC:
      for (std::size_t i = 0; i < f.segments.size(); ++i) {
        for (std::size_t j = i + 1; j < f.segments.size(); ++j) {
          const double a = f.segments[i].length;
          const double b = f.segments[j].length;
          if (!(std::min(a, b) < kLengthRatioLimit * std::max(a, b))) continue;
          for (auto& item : make_line_comparison(f.segments[i], f.segments[j])) out.push_back(item);
        }
      }
      if (out.empty()) throw Error(Errc::NoEligiblePair, "no segment pair with ratio below 0.7");
      break;
    case Task::PRA:
      for (const auto& g : f.parallel_groups) {
        for (auto qi : g) {
          std::vector<std::vector<char>> rest;
          for (auto i : g) {
            if (i != qi) rest.push_back(f.lines[i].points);
          }
          const auto [a, b] = detail::random_pair(f.lines[qi].points, rng);
          out.push_back(make_parallel(f.lines[qi].points, a, b, rest, rng));
        }
      }
      if (out.empty()) throw Error(Errc::NoEligibleLines, "no pair of parallel lines");
      break;
    case Task::PEP:
      for (const auto& [src, targets] : f.perpendicular) {
        std::vector<std::vector<char>> lines;
        for (auto t : targets) lines.push_back(f.lines[t].points);
        const auto [a, b] = detail::random_pair(f.lines[src].points, rng);
        out.push_back(make_perpendicular(f.lines[src].points, a, b, lines, rng));
      }
      if (out.empty()) throw Error(Errc::NoEligibleLines, "no perpendicular lines");
      break;
    case Task::EQL:
      for (const auto& [s1, s2] : f.equal_segments) {
        fig.annotations.equal_segment_groups.push_back({s1, s2});
        out.push_back(gen_equal({EqualSpec::Kind::Segments, s1.name(), s2.name()}, rng));
      }
      for (const auto& [a1, a2] : f.equal_angles) {
        fig.annotations.equal_angle_groups.push_back({a1, a2});
        out.push_back(gen_equal({EqualSpec::Kind::Angles, a1.name(), a2.name()}, rng));
      }
      if (out.empty()) throw Error(Errc::NoEligiblePair, "no equal segments or angles");
      break;
  }
  return out;
}

/// Prepares `fig` for a task (adds the segments or annotations the question
/// depends on) and synthesizes one item from it, chosen uniformly among the
/// facts the figure supports.
inline QAItem synthesize(Task task, Figure& fig, Rng& rng) {
  if (task != Task::EQL) {
    const auto all = synthesize_all(task, fig, rng);
    return all[rng.below(all.size())];
  }
  const auto f = facts::extract(fig);
  // candidate kinds: equal segment pair, equal angle pair, annotated
  // length, annotated angle
  std::vector<int> kinds;
  if (!f.equal_segments.empty()) kinds.push_back(0);
  if (!f.equal_angles.empty()) kinds.push_back(1);
  if (!f.elementary_segments.empty()) kinds.push_back(2);
  if (!f.elementary_angles.empty()) kinds.push_back(3);
  if (kinds.empty()) throw Error(Errc::NoEligiblePair, "figure offers nothing to annotate");
  EqualSpec spec;
  switch (kinds[rng.below(kinds.size())]) {
    case 0: {
      const auto& [s1, s2] = f.equal_segments[rng.below(f.equal_segments.size())];
      fig.annotations.equal_segment_groups.push_back({s1, s2});
      spec = {EqualSpec::Kind::Segments, s1.name(), s2.name()};
      break;
    }
    case 1: {
      const auto& [a1, a2] = f.equal_angles[rng.below(f.equal_angles.size())];
      fig.annotations.equal_angle_groups.push_back({a1, a2});
      spec = {EqualSpec::Kind::Angles, a1.name(), a2.name()};
      break;
    }
    case 2: {
      const auto& s = f.elementary_segments[rng.below(f.elementary_segments.size())].segment;
      const auto value = random_annotation_value(rng);
      TextLabel label;
      label.target = TextLabel::Target::Segment;
      label.segment = s;
      label.text = value;
      fig.annotations.text_labels.push_back(label);
      spec = {EqualSpec::Kind::SegmentsValue, s.name(), value};
      break;
    }
    default: {
      const auto& a = f.elementary_angles[rng.below(f.elementary_angles.size())].angle;
      const auto value = random_annotation_value(rng);
      TextLabel label;
      label.target = TextLabel::Target::Angle;
      label.angle = a;
      label.text = value;
      fig.annotations.text_labels.push_back(label);
      spec = {EqualSpec::Kind::AnglesValue, a.name(), value};
    }
  }
  return gen_equal(spec, rng);
}

// ---- Independent recheck -------------------------------------------------

namespace detail {

inline std::optional<std::string> capture(const std::string& text, const std::string& pattern) {
  std::smatch m;
  if (std::regex_match(text, m, std::regex(pattern))) return m[1].str();
  return std::nullopt;
}

/// Figure points lying on some drawn segment that is collinear with line ab.
inline std::string drawn_points_on_line(const Figure& fig, Vec2 a, Vec2 b) {
  const double tol = facts::incidence_tolerance(fig);
  std::string out;
  for (const auto& s : fig.segments) {
    const Vec2 p = fig.at(s.a);
    const Vec2 q = fig.at(s.b);
    if (distance_to_line(p, a, b) > tol || distance_to_line(q, a, b) > tol) continue;
    for (const auto& pt : fig.points) {
      if (distance_to_line(pt.pos, p, q) > tol) continue;
      const double t = dot(pt.pos - p, q - p) / dot(q - p, q - p);
      const double slack = tol / dist(p, q);
      if (t >= -slack && t <= 1 + slack && out.find(pt.name) == std::string::npos) out += pt.name;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Re-derives the item's ground truth directly from coordinates. Returns a
/// description of the mismatch, or nullopt when the ground truth holds.
inline std::optional<std::string> recheck(const QAItem& item, const Figure& fig) {
  const double tol = facts::incidence_tolerance(fig);
  auto has_all = [&](const std::string& names) {
    return std::all_of(names.begin(), names.end(), [&](char c) { return fig.has_point(c); });
  };
  switch (item.task) {
    case Task::POL: {
      const auto line = detail::capture(item.question, "What is the point lying on line ([A-Z]{2})\\?");
      if (!line || !has_all(*line)) return "unparseable POL question";
      auto on = detail::drawn_points_on_line(fig, fig.at((*line)[0]), fig.at((*line)[1]));
      if (on.find((*line)[0]) == std::string::npos || on.find((*line)[1]) == std::string::npos) {
        return "line " + *line + " is not drawn";
      }
      std::string rest;
      for (char c : on) {
        if (c != (*line)[0] && c != (*line)[1]) rest += c;
      }
      if (rest != item.gt || rest.empty()) return "points on " + *line + " are " + rest;
      return std::nullopt;
    }
    case Task::POC: {
      const auto c = detail::capture(item.question, "What are the point lying on circle ([A-Z])\\?");
      if (!c || !has_all(*c)) return "unparseable POC question";
      const Vec2 o = fig.at((*c)[0]);
      for (const auto& circle : fig.circles) {
        if (circle.center != (*c)[0]) continue;
        std::string members;
        for (const auto& p : fig.points) {
          if (p.name != circle.center && std::abs(dist(p.pos, o) - circle.radius) <= tol) members += p.name;
        }
        std::sort(members.begin(), members.end());
        if (members == item.gt) return std::nullopt;
      }
      return "no circle at " + *c + " has members " + item.gt;
    }
    case Task::ALC: {
      const auto a = detail::capture(item.question, "Is angle ([A-Z]{3}) acute or obtuse\\?");
      if (!a || !has_all(*a)) return "unparseable ALC question";
      const double m = angle_deg(fig.at((*a)[0]), fig.at((*a)[1]), fig.at((*a)[2]));
      if (!angle_is_unambiguous(m)) return "angle " + *a + " measures " + std::to_string(m);
      const std::string cls = m < 90.0 ? "acute" : "obtuse";
      if (cls != item.gt) return "angle " + *a + " is " + cls;
      return std::nullopt;
    }
    case Task::LHC: {
      std::smatch m;
      static const std::regex re("Which line is longer, ([A-Z]{2}) or ([A-Z]{2})\\?");
      if (!std::regex_match(item.question, m, re)) return "unparseable LHC question";
      const std::string x = m[1].str();
      const std::string y = m[2].str();
      if (!has_all(x + y)) return "unknown points in LHC question";
      const double lx = dist(fig.at(x[0]), fig.at(x[1]));
      const double ly = dist(fig.at(y[0]), fig.at(y[1]));
      if (!(std::min(lx, ly) < kLengthRatioLimit * std::max(lx, ly))) return "ratio not below 0.7";
      if ((lx > ly ? x : y) != item.gt) return "longer line is " + (lx > ly ? x : y);
      return std::nullopt;
    }
    case Task::PRA:
    case Task::PEP: {
      const bool par = item.task == Task::PRA;
      const auto q = detail::capture(
          item.question, std::string("What is the line ") + (par ? "parallel" : "perpendicular") +
                             " to line ([A-Z]{2})\\?");
      if (!q || !has_all(*q)) return "unparseable line-relation question";
      const Vec2 a = fig.at((*q)[0]);
      const Vec2 b = fig.at((*q)[1]);
      const Vec2 u = unit(b - a);
      // every drawn segment in the requested relation, grouped by its line
      std::vector<std::string> expected;
      for (const auto& s : fig.segments) {
        const Vec2 p = fig.at(s.a);
        const Vec2 r = fig.at(s.b);
        const Vec2 v = unit(r - p);
        const bool rel = par ? std::abs(cross(u, v)) < 1e-6 && distance_to_line(p, a, b) > tol
                             : std::abs(dot(u, v)) < 1e-6;
        if (!rel) continue;
        const auto line = detail::drawn_points_on_line(fig, p, r);
        if (std::find(expected.begin(), expected.end(), line) == expected.end()) expected.push_back(line);
      }
      std::sort(expected.begin(), expected.end());
      if (detail::joined(expected, ", ") != item.gt) {
        return "lines related to " + *q + " are " + detail::joined(expected, ", ");
      }
      return std::nullopt;
    }
    case Task::EQL: {
      const auto& ann = fig.annotations;
      if (auto seg = detail::capture(item.question, "What is the length of line ([A-Z]{2}) as annotated\\?")) {
        const SegmentRef s((*seg)[0], (*seg)[1]);
        for (const auto& t : ann.text_labels) {
          if (t.target == TextLabel::Target::Segment && t.segment == s && t.text == item.gt) return std::nullopt;
        }
        return "no length annotation " + item.gt + " on " + *seg;
      }
      if (auto ang = detail::capture(item.question, "What is the measure of angle ([A-Z]{3}) as annotated\\?")) {
        for (const auto& t : ann.text_labels) {
          if (t.target != TextLabel::Target::Angle || t.text != item.gt) continue;
          const auto n = t.angle.name();
          if (n == *ang || detail::reversed(n) == *ang) return std::nullopt;
        }
        return "no angle annotation " + item.gt + " on " + *ang;
      }
      if (auto seg = detail::capture(item.question,
                                     "What is the segment in the diagram that is equal to segment ([A-Z]{2})")) {
        const auto& other = item.gt;
        if (other.size() != 2 || !has_all(*seg + other)) return "bad segment names";
        const double l1 = dist(fig.at((*seg)[0]), fig.at((*seg)[1]));
        const double l2 = dist(fig.at(other[0]), fig.at(other[1]));
        if (std::abs(l1 - l2) > tol) return "segments differ in length";
        for (const auto& g : ann.equal_segment_groups) {
          const bool a = std::find(g.begin(), g.end(), SegmentRef((*seg)[0], (*seg)[1])) != g.end();
          const bool b = std::find(g.begin(), g.end(), SegmentRef(other[0], other[1])) != g.end();
          if (a && b) return std::nullopt;
        }
        return "segments not marked equal";
      }
      if (auto ang = detail::capture(item.question,
                                     "What is the angle in the diagram that is equal to angle ([A-Z]{3})")) {
        const auto& other = item.gt;
        if (other.size() != 3 || !has_all(*ang + other)) return "bad angle names";
        const double m1 = angle_deg(fig.at((*ang)[0]), fig.at((*ang)[1]), fig.at((*ang)[2]));
        const double m2 = angle_deg(fig.at(other[0]), fig.at(other[1]), fig.at(other[2]));
        if (std::abs(m1 - m2) > 1e-6) return "angles differ";
        auto in = [](const std::vector<AngleRef>& g, const std::string& n) {
          return std::any_of(g.begin(), g.end(), [&](const AngleRef& a) {
            return a.name() == n || detail::reversed(a.name()) == n;
          });
        };
        for (const auto& g : ann.equal_angle_groups) {
          if (in(g, *ang) && in(g, other)) return std::nullopt;
        }
        return "angles not marked equal";
      }
      return "unparseable EQL question";
    }
  }
  return "unknown task";
}

}  // namespace geosynth::qa
