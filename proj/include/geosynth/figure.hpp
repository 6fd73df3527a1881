#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geosynth/error.hpp"
#include "geosynth/geometry.hpp"
#include "json.hpp"

namespace geosynth {

/// Unordered point pair, stored with first < second.
struct SegmentRef {
  char a = 'A';
  char b = 'B';

  SegmentRef() = default;
  SegmentRef(char p, char q) : a(std::min(p, q)), b(std::max(p, q)) {}

  std::string name() const { return {a, b}; }
  friend auto operator<=>(const SegmentRef&, const SegmentRef&) = default;
};

/// Angle PQR with vertex Q.
struct AngleRef {
  char p = 'A';
  char q = 'B';
  char r = 'C';

  std::string name() const { return {p, q, r}; }
  friend auto operator<=>(const AngleRef&, const AngleRef&) = default;
};

struct TextLabel {
  enum class Target { Segment, Angle };
  Target target = Target::Segment;
  SegmentRef segment;
  AngleRef angle;
  std::string text;
};

/// Annotation symbols drawn on top of a figure. Group i (0-based) of each
/// kind is drawn with i+1 ticks / arcs / chevrons.
struct AnnotationSet {
  std::vector<std::vector<SegmentRef>> equal_segment_groups;
  std::vector<std::vector<AngleRef>> equal_angle_groups;
  std::vector<AngleRef> right_angle_marks;
  std::vector<std::vector<SegmentRef>> parallel_groups;
  std::vector<TextLabel> text_labels;

  bool empty() const {
    return equal_segment_groups.empty() && equal_angle_groups.empty() &&
           right_angle_marks.empty() && parallel_groups.empty() && text_labels.empty();
  }
};

struct Canvas {
  double width = 512.0;
  double height = 512.0;
  double margin = 40.0;
};

struct NamedPoint {
  char name = 'A';
  Vec2 pos;
};

struct CircleRef {
  char center = 'O';
  double radius = 0.0;
};

/// Solved numeric layout. Points keep construction order; after letter
/// assignment `name` holds the displayed letter.
struct Figure {
  std::vector<NamedPoint> points;
  std::vector<SegmentRef> segments;  // sorted, unique
  std::vector<CircleRef> circles;
  AnnotationSet annotations;
  std::uint64_t rng_seed = 0;
  Canvas canvas;
  /// Resamples spent per statement (0 when the first draw was accepted).
  std::vector<int> resamples;

  bool has_point(char name) const {
    return std::any_of(points.begin(), points.end(), [&](const auto& p) { return p.name == name; });
  }

  Vec2 at(char name) const {
    for (const auto& p : points) {
      if (p.name == name) return p.pos;
    }
    throw Error(Errc::UndeclaredPoint, std::string("figure has no point ") + name);
  }

  std::vector<char> names() const {
    std::vector<char> out;
    for (const auto& p : points) out.push_back(p.name);
    return out;
  }

  void add_segment(char p, char q) {
    if (p == q) return;
    const SegmentRef s(p, q);
    const auto it = std::lower_bound(segments.begin(), segments.end(), s);
    if (it == segments.end() || *it != s) segments.insert(it, s);
  }

  bool has_segment(char p, char q) const {
    return std::binary_search(segments.begin(), segments.end(), SegmentRef(p, q));
  }

  /// Registers a circle unless an equal one (same center, radius within
  /// tolerance) already exists.
  void add_circle(char center, double radius) {
    for (const auto& c : circles) {
      if (c.center == center && std::abs(c.radius - radius) <= 1e-9 * std::max(1.0, radius)) {
        return;
      }
    }
    circles.push_back({center, radius});
  }
};

/// Checks that every point referenced by the annotations exists in the figure.
inline void validate_annotations(const Figure& fig, const AnnotationSet& ann) {
  auto need = [&](char c) {
    if (!fig.has_point(c)) {
      throw Error(Errc::MalformedSpec, std::string("annotation references unknown point ") + c);
    }
  };
  auto seg = [&](const SegmentRef& s) {
    need(s.a);
    need(s.b);
  };
  auto ang = [&](const AngleRef& a) {
    need(a.p);
    need(a.q);
    need(a.r);
  };
  for (const auto& g : ann.equal_segment_groups) std::for_each(g.begin(), g.end(), seg);
  for (const auto& g : ann.parallel_groups) std::for_each(g.begin(), g.end(), seg);
  for (const auto& g : ann.equal_angle_groups) std::for_each(g.begin(), g.end(), ang);
  std::for_each(ann.right_angle_marks.begin(), ann.right_angle_marks.end(), ang);
  for (const auto& t : ann.text_labels) {
    if (t.text.empty()) throw Error(Errc::MalformedSpec, "empty text label");
    if (t.target == TextLabel::Target::Segment) {
      seg(t.segment);
    } else {
      ang(t.angle);
    }
  }
}

// ---- JSON ---------------------------------------------------------------

inline nlohmann::json to_json(const AnnotationSet& ann) {
  using nlohmann::json;
  auto segs = [](const std::vector<SegmentRef>& g) {
    json out = json::array();
    for (const auto& s : g) out.push_back(s.name());
    return out;
  };
  json j;
  j["equal_segment_groups"] = json::array();
  for (const auto& g : ann.equal_segment_groups) j["equal_segment_groups"].push_back(segs(g));
  j["parallel_groups"] = json::array();
  for (const auto& g : ann.parallel_groups) j["parallel_groups"].push_back(segs(g));
  j["equal_angle_groups"] = json::array();
  for (const auto& g : ann.equal_angle_groups) {
    json group = json::array();
    for (const auto& a : g) group.push_back(a.name());
    j["equal_angle_groups"].push_back(group);
  }
  j["right_angle_marks"] = json::array();
  for (const auto& a : ann.right_angle_marks) j["right_angle_marks"].push_back(a.name());
  j["text_labels"] = json::array();
  for (const auto& t : ann.text_labels) {
    const bool seg = t.target == TextLabel::Target::Segment;
    j["text_labels"].push_back({{"target", seg ? "segment" : "angle"},
                                {"ref", seg ? t.segment.name() : t.angle.name()},
                                {"text", t.text}});
  }
  return j;
}

inline AnnotationSet annotations_from_json(const nlohmann::json& j) {
  auto seg = [](const std::string& s) {
    if (s.size() != 2) throw Error(Errc::MalformedSpec, "bad segment name '" + s + "'");
    return SegmentRef(s[0], s[1]);
  };
  auto ang = [](const std::string& s) {
    if (s.size() != 3) throw Error(Errc::MalformedSpec, "bad angle name '" + s + "'");
    return AngleRef{s[0], s[1], s[2]};
  };
  AnnotationSet ann;
  for (const auto& g : j.value("equal_segment_groups", nlohmann::json::array())) {
    auto& out = ann.equal_segment_groups.emplace_back();
    for (const auto& s : g) out.push_back(seg(s.get<std::string>()));
  }
  for (const auto& g : j.value("parallel_groups", nlohmann::json::array())) {
    auto& out = ann.parallel_groups.emplace_back();
    for (const auto& s : g) out.push_back(seg(s.get<std::string>()));
  }
  for (const auto& g : j.value("equal_angle_groups", nlohmann::json::array())) {
    auto& out = ann.equal_angle_groups.emplace_back();
    for (const auto& a : g) out.push_back(ang(a.get<std::string>()));
  }
  for (const auto& a : j.value("right_angle_marks", nlohmann::json::array())) {
    ann.right_angle_marks.push_back(ang(a.get<std::string>()));
  }
  for (const auto& t : j.value("text_labels", nlohmann::json::array())) {
    TextLabel label;
    const auto ref = t.at("ref").get<std::string>();
    if (t.at("target").get<std::string>() == "segment") {
      label.target = TextLabel::Target::Segment;
      label.segment = seg(ref);
    } else {
      label.target = TextLabel::Target::Angle;
      label.angle = ang(ref);
    }
    label.text = t.at("text").get<std::string>();
    ann.text_labels.push_back(label);
  }
  return ann;
}

inline nlohmann::json to_json(const Figure& fig) {
  using nlohmann::json;
  json j;
  j["seed"] = fig.rng_seed;
  j["canvas"] = {{"width", fig.canvas.width},
                 {"height", fig.canvas.height},
                 {"margin", fig.canvas.margin}};
  j["points"] = json::array();
  for (const auto& p : fig.points) {
    j["points"].push_back({{"name", std::string(1, p.name)}, {"x", p.pos.x}, {"y", p.pos.y}});
  }
  j["segments"] = json::array();
  for (const auto& s : fig.segments) j["segments"].push_back(s.name());
  j["circles"] = json::array();
  for (const auto& c : fig.circles) {
    j["circles"].push_back({{"center", std::string(1, c.center)}, {"radius", c.radius}});
  }
  j["annotations"] = to_json(fig.annotations);
  j["resamples"] = fig.resamples;
  return j;
}

inline Figure figure_from_json(const nlohmann::json& j) {
  Figure fig;
  fig.rng_seed = j.value("seed", std::uint64_t{0});
  if (j.contains("canvas")) {
    const auto& c = j["canvas"];
    fig.canvas = {c.at("width").get<double>(), c.at("height").get<double>(),
                  c.at("margin").get<double>()};
  }
  for (const auto& p : j.at("points")) {
    const auto name = p.at("name").get<std::string>();
    if (name.size() != 1) throw Error(Errc::MalformedSpec, "bad point name '" + name + "'");
    fig.points.push_back({name[0], {p.at("x").get<double>(), p.at("y").get<double>()}});
  }
  for (const auto& s : j.value("segments", nlohmann::json::array())) {
    const auto name = s.get<std::string>();
    if (name.size() != 2) throw Error(Errc::MalformedSpec, "bad segment name '" + name + "'");
    fig.add_segment(name[0], name[1]);
  }
  for (const auto& c : j.value("circles", nlohmann::json::array())) {
    fig.circles.push_back({c.at("center").get<std::string>().at(0), c.at("radius").get<double>()});
  }
  if (j.contains("annotations")) fig.annotations = annotations_from_json(j["annotations"]);
  if (j.contains("resamples")) fig.resamples = j["resamples"].get<std::vector<int>>();
  return fig;
}

}  // namespace geosynth
