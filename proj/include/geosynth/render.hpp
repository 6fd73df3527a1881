#pragma once

// Figure rendering. A figure is first turned into a display list of stroked
// elements in output pixel coordinates; the SVG writer and the rasterizer
// both consume that list, and each reports what it drew.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "geosynth/error.hpp"
#include "geosynth/figure.hpp"
#include "geosynth/font.hpp"
#include "geosynth/geometry.hpp"
#include "geosynth/image.hpp"
#include "json.hpp"

namespace geosynth::render {

struct RenderConfig {
  int image_size = 512;  // longer side, pixels
  double stroke_width = 2.0;
  double font_size = 16.0;  // cap height of point labels
  double point_radius = 3.5;
  double label_offset = 14.0;  // label centre distance from its point
  bool pad_to_square = true;

  void validate() const {
    if (image_size < 128) throw Error(Errc::InvalidConfig, "image_size must be >= 128");
    if (!(stroke_width > 0.0) || !(font_size > 0.0) || point_radius < 0.0 || label_offset < 0.0) {
      throw Error(Errc::InvalidConfig, "render sizes must be positive");
    }
  }
};

inline nlohmann::json to_json(const RenderConfig& c) {
  return {{"image_size", c.image_size},     {"stroke_width", c.stroke_width},
          {"font_size", c.font_size},       {"point_radius", c.point_radius},
          {"label_offset", c.label_offset}, {"pad_to_square", c.pad_to_square}};
}

inline RenderConfig render_config_from_json(const nlohmann::json& j) {
  RenderConfig c;
  c.image_size = j.value("image_size", c.image_size);
  c.stroke_width = j.value("stroke_width", c.stroke_width);
  c.font_size = j.value("font_size", c.font_size);
  c.point_radius = j.value("point_radius", c.point_radius);
  c.label_offset = j.value("label_offset", c.label_offset);
  c.pad_to_square = j.value("pad_to_square", c.pad_to_square);
  c.validate();
  return c;
}

enum class Kind { Segment, Circle, Point, Label, Tick, RightAngle, Chevron, Arc, TextLabel };

inline constexpr std::array<Kind, 9> kAllKinds{Kind::Segment, Kind::Circle,     Kind::Point,
                                               Kind::Label,   Kind::Tick,       Kind::RightAngle,
                                               Kind::Chevron, Kind::Arc,        Kind::TextLabel};

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Segment: return "segment";
    case Kind::Circle: return "circle";
    case Kind::Point: return "point";
    case Kind::Label: return "label";
    case Kind::Tick: return "tick";
    case Kind::RightAngle: return "right_angle";
    case Kind::Chevron: return "chevron";
    case Kind::Arc: return "arc";
    case Kind::TextLabel: return "text_label";
  }
  return "?";
}

/// One drawn element. Circles and points use `center`/`radius`; everything
/// else is a set of polylines.
struct Element {
  Kind kind = Kind::Segment;
  std::string ref;  // segment / angle / point the element belongs to
  std::vector<std::vector<Vec2>> strokes;
  Vec2 center;
  double radius = 0.0;
  double width = 1.0;  // stroke width, pixels
};

struct DisplayList {
  int width = 0;
  int height = 0;
  std::vector<Element> elements;
  std::vector<std::string> warnings;
};

using Counts = std::map<std::string, int>;

inline Counts count_by_kind(const std::vector<Element>& elements) {
  Counts out;
  for (Kind k : kAllKinds) out[kind_name(k)] = 0;
  for (const auto& e : elements) ++out[kind_name(e.kind)];
  return out;
}

// ---- label placement -----------------------------------------------------

namespace detail {

/// Candidate label directions, NE first and then counter-clockwise, in
/// image coordinates (y down).
inline std::array<Vec2, 8> candidate_directions() {
  std::array<Vec2, 8> out{};
  for (int k = 0; k < 8; ++k) {
    const double t = std::numbers::pi / 4.0 * (1 + k);
    out[static_cast<std::size_t>(k)] = {std::cos(t), -std::sin(t)};
  }
  return out;
}

inline double angle_between(Vec2 a, Vec2 b) { return std::atan2(std::abs(cross(a, b)), dot(a, b)); }

/// Unit directions of drawn strokes leaving `p`: segments ending at p,
/// segments passing through p, and circle tangents at p.
inline std::vector<Vec2> incident_rays(const Figure& fig, char name) {
  const Vec2 p = fig.at(name);
  const double tol = 1e-6 * std::max(fig.canvas.width, fig.canvas.height);
  std::vector<Vec2> rays;
  for (const auto& s : fig.segments) {
    const Vec2 a = fig.at(s.a);
    const Vec2 b = fig.at(s.b);
    if (s.a == name || s.b == name) {
      rays.push_back(unit((s.a == name ? b : a) - p));
      continue;
    }
    const double len = dist(a, b);
    if (len == 0.0 || distance_to_line(p, a, b) > tol) continue;
    const double t = dot(p - a, b - a) / (len * len);
    if (t > 0.0 && t < 1.0) {
      rays.push_back(unit(b - a));
      rays.push_back(unit(a - b));
    }
  }
  for (const auto& c : fig.circles) {
    const Vec2 o = fig.at(c.center);
    if (c.radius > 0.0 && std::abs(dist(p, o) - c.radius) <= tol) {
      const Vec2 t = perp(unit(p - o));
      rays.push_back(t);
      rays.push_back(t * -1.0);
    }
  }
  return rays;
}

}  // namespace detail

/// Score of a label direction: the smallest angle (radians) to any incident
/// ray, capped at 90 degrees; higher is better.
inline double label_score(Vec2 dir, const std::vector<Vec2>& rays) {
  double best = std::numbers::pi / 2.0;
  for (const auto& r : rays) best = std::min(best, detail::angle_between(dir, r));
  return best;
}

struct LabelPlacement {
  std::map<char, Vec2> positions;  // label centres, canvas units
  std::vector<std::string> warnings;
};

/// Places each point label at `label_offset` pixels from its point, in the
/// best-scoring of 8 directions whose label keeps a font-size distance from
/// labels already placed. When no direction does, the best one is used and
/// a LabelCollision warning is recorded.
inline LabelPlacement place_labels(const Figure& fig, const RenderConfig& config) {
  const double scale = config.image_size / std::max(fig.canvas.width, fig.canvas.height);
  const double offset = config.label_offset / scale;
  const double clearance = config.font_size / scale;
  const auto dirs = detail::candidate_directions();
  LabelPlacement out;
  for (const auto& p : fig.points) {
    const auto rays = detail::incident_rays(fig, p.name);
    std::array<std::size_t, 8> order{};
    std::array<double, 8> score{};
    for (std::size_t k = 0; k < 8; ++k) {
      order[k] = k;
      score[k] = label_score(dirs[k], rays);
    }
    // scores closer than 1e-9 rad count as ties, resolved in candidate order
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b] + 1e-9; });
    std::optional<Vec2> chosen;
    for (auto k : order) {
      const Vec2 pos = p.pos + dirs[k] * offset;
      const bool clear = std::all_of(out.positions.begin(), out.positions.end(),
                                     [&](const auto& kv) { return dist(kv.second, pos) >= clearance; });
      if (clear) {
        chosen = pos;
        break;
      }
    }
    if (!chosen) {
      chosen = p.pos + dirs[order[0]] * offset;
      out.warnings.push_back(std::string("LabelCollision: label ") + p.name +
                             " is within font size of another label");
    }
    out.positions[p.name] = *chosen;
  }
  return out;
}

// ---- display list --------------------------------------------------------

namespace detail {

inline std::vector<Vec2> arc_points(Vec2 q, Vec2 from, Vec2 to, double r) {
  const double a0 = std::atan2(from.y, from.x);
  double sweep = std::atan2(cross(from, to), dot(from, to));  // signed, |sweep| <= pi
  std::vector<Vec2> pts;
  constexpr int kSteps = 16;
  for (int i = 0; i <= kSteps; ++i) {
    const double t = a0 + sweep * i / kSteps;
    pts.push_back(q + Vec2{std::cos(t), std::sin(t)} * r);
  }
  return pts;
}

inline Vec2 centroid(const Figure& fig) {
  Vec2 c{};
  for (const auto& p : fig.points) c = c + p.pos;
  return fig.points.empty() ? c : c / static_cast<double>(fig.points.size());
}

/// Drawn segments cut at every figure point lying inside them, so a
/// midpoint D on AB yields the pieces AD and DB.
inline std::vector<SegmentRef> split_segments(const Figure& fig) {
  const double tol = 1e-6 * std::max(fig.canvas.width, fig.canvas.height);
  std::vector<SegmentRef> out;
  for (const auto& seg : fig.segments) {
    const Vec2 a = fig.at(seg.a);
    const Vec2 b = fig.at(seg.b);
    const double len = dist(a, b);
    std::vector<std::pair<double, char>> stops{{0.0, seg.a}, {1.0, seg.b}};
    for (const auto& p : fig.points) {
      if (p.name == seg.a || p.name == seg.b || len == 0.0 || distance_to_line(p.pos, a, b) > tol) continue;
      const double t = dot(p.pos - a, b - a) / (len * len);
      if (t > 0.0 && t < 1.0) stops.push_back({t, p.name});
    }
    std::sort(stops.begin(), stops.end());
    for (std::size_t i = 1; i < stops.size(); ++i) out.push_back(SegmentRef(stops[i - 1].second, stops[i].second));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Builds the display list in output pixel coordinates.
inline DisplayList build_display_list(const Figure& fig, const RenderConfig& config) {
  config.validate();
  validate_annotations(fig, fig.annotations);
  const double s = config.image_size / std::max(fig.canvas.width, fig.canvas.height);
  DisplayList dl;
  dl.width = static_cast<int>(std::lround(fig.canvas.width * s));
  dl.height = static_cast<int>(std::lround(fig.canvas.height * s));
  Vec2 shift{};
  if (config.pad_to_square) {
    const int side = std::max(dl.width, dl.height);
    shift = {static_cast<double>((side - dl.width) / 2), static_cast<double>((side - dl.height) / 2)};
    dl.width = dl.height = side;
  }
  auto px = [&](Vec2 p) { return p * s + shift; };
  auto at = [&](char c) { return px(fig.at(c)); };
  const double w = config.stroke_width;
  const double mark_w = std::max(1.0, w * 0.75);
  auto add_strokes = [&](Kind kind, std::string ref, std::vector<std::vector<Vec2>> strokes, double width) {
    Element e;
    e.kind = kind;
    e.ref = std::move(ref);
    e.strokes = std::move(strokes);
    e.width = width;
    dl.elements.push_back(std::move(e));
  };

  for (const auto& piece : detail::split_segments(fig)) {
    add_strokes(Kind::Segment, piece.name(), {{at(piece.a), at(piece.b)}}, w);
  }
  for (const auto& c : fig.circles) {
    Element e;
    e.kind = Kind::Circle;
    e.ref = std::string(1, c.center);
    e.center = at(c.center);
    e.radius = c.radius * s;
    e.width = w;
    dl.elements.push_back(e);
  }

  const auto& ann = fig.annotations;
  auto along = [&](const SegmentRef& sr) {
    const Vec2 a = at(sr.a);
    const Vec2 b = at(sr.b);
    return std::pair{(a + b) / 2.0, unit(b - a)};
  };
  for (std::size_t g = 0; g < ann.equal_segment_groups.size(); ++g) {
    const int n = static_cast<int>(g) + 1;
    for (const auto& sr : ann.equal_segment_groups[g]) {
      const auto [m, u] = along(sr);
      const Vec2 nrm = perp(u);
      for (int j = 0; j < n; ++j) {
        const Vec2 c = m + u * ((j - (n - 1) / 2.0) * 4.0);
        add_strokes(Kind::Tick, sr.name(), {{c - nrm * 6.0, c + nrm * 6.0}}, mark_w);
      }
    }
  }
  for (std::size_t g = 0; g < ann.parallel_groups.size(); ++g) {
    const int n = static_cast<int>(g) + 1;
    for (const auto& sr : ann.parallel_groups[g]) {
      const auto [m, u] = along(sr);
      const Vec2 nrm = perp(u);
      for (int j = 0; j < n; ++j) {
        const Vec2 c = m + u * ((j - (n - 1) / 2.0) * 6.0 + 2.5);
        add_strokes(Kind::Chevron, sr.name(), {{c - u * 5.0 + nrm * 5.0, c, c - u * 5.0 - nrm * 5.0}}, mark_w);
      }
    }
  }
  for (const auto& a : ann.right_angle_marks) {
    const Vec2 q = at(a.q);
    const Vec2 u = unit(at(a.p) - q) * 10.0;
    const Vec2 v = unit(at(a.r) - q) * 10.0;
    add_strokes(Kind::RightAngle, a.name(), {{q + u, q + u + v, q + v}}, mark_w);
  }
  for (std::size_t g = 0; g < ann.equal_angle_groups.size(); ++g) {
    const int n = static_cast<int>(g) + 1;
    for (const auto& a : ann.equal_angle_groups[g]) {
      const Vec2 q = at(a.q);
      const Vec2 u = unit(at(a.p) - q);
      const Vec2 v = unit(at(a.r) - q);
      for (int j = 0; j < n; ++j) {
        add_strokes(Kind::Arc, a.name(), {detail::arc_points(q, u, v, 18.0 + 4.0 * j)}, mark_w);
      }
    }
  }
  const Vec2 mid = px(detail::centroid(fig));
  for (const auto& t : ann.text_labels) {
    Vec2 pos;
    std::string ref;
    if (t.target == TextLabel::Target::Segment) {
      const auto [m, u] = along(t.segment);
      Vec2 nrm = perp(u);
      if (dot(nrm, m - mid) < 0.0) nrm = nrm * -1.0;
      pos = m + nrm * (config.font_size * 0.9);
      ref = t.segment.name();
    } else {
      const Vec2 q = at(t.angle.q);
      Vec2 bis = unit(at(t.angle.p) - q) + unit(at(t.angle.r) - q);
      bis = norm(bis) < 1e-9 ? perp(unit(at(t.angle.p) - q)) : unit(bis);
      pos = q + bis * (config.font_size * 2.0);
      ref = t.angle.name();
    }
    add_strokes(Kind::TextLabel, ref, font::layout_text(t.text, pos, config.font_size * 0.8), mark_w);
  }

  for (const auto& p : fig.points) {
    Element e;
    e.kind = Kind::Point;
    e.ref = std::string(1, p.name);
    e.center = px(p.pos);
    e.radius = config.point_radius;
    dl.elements.push_back(e);
  }
  auto labels = place_labels(fig, config);
  for (const auto& p : fig.points) {
    add_strokes(Kind::Label, std::string(1, p.name),
                font::layout_text(std::string(1, p.name), px(labels.positions.at(p.name)), config.font_size), w * 0.8);
  }
  dl.warnings = std::move(labels.warnings);
  return dl;
}

// ---- SVG backend ---------------------------------------------------------

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string path_data(const std::vector<std::vector<Vec2>>& strokes) {
  std::string d;
  for (const auto& stroke : strokes) {
    for (std::size_t i = 0; i < stroke.size(); ++i) {
      if (!d.empty()) d += ' ';
      d += (i == 0 ? "M" : "L") + num(stroke[i].x) + "," + num(stroke[i].y);
    }
  }
  return d;
}

}  // namespace detail

inline std::string to_svg(const DisplayList& dl, Counts* drawn = nullptr) {
  using detail::num;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(dl.width) +
                    "\" height=\"" + std::to_string(dl.height) + "\" viewBox=\"0 0 " + std::to_string(dl.width) +
                    " " + std::to_string(dl.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += "<g stroke=\"#000000\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
  Counts counts = count_by_kind({});
  for (const auto& e : dl.elements) {
    const std::string head = std::string("class=\"") + kind_name(e.kind) + "\" data-ref=\"" + e.ref + "\"";
    if (e.kind == Kind::Point) {
      out += "<circle " + head + " cx=\"" + num(e.center.x) + "\" cy=\"" + num(e.center.y) + "\" r=\"" +
             num(e.radius) + "\" fill=\"#000000\" stroke=\"none\"/>\n";
    } else if (e.kind == Kind::Circle) {
      out += "<circle " + head + " cx=\"" + num(e.center.x) + "\" cy=\"" + num(e.center.y) + "\" r=\"" +
             num(e.radius) + "\" fill=\"none\" stroke-width=\"" + num(e.width) + "\"/>\n";
    } else if (e.kind == Kind::Segment) {
      const auto& s = e.strokes.front();
      out += "<line " + head + " x1=\"" + num(s[0].x) + "\" y1=\"" + num(s[0].y) + "\" x2=\"" + num(s[1].x) +
             "\" y2=\"" + num(s[1].y) + "\" stroke-width=\"" + num(e.width) + "\"/>\n";
    } else {
      out += "<path " + head + " d=\"" + detail::path_data(e.strokes) + "\" fill=\"none\" stroke-width=\"" +
             num(e.width) + "\"/>\n";
    }
    ++counts[kind_name(e.kind)];
  }
  out += "</g>\n</svg>\n";
  if (drawn) *drawn = counts;
  return out;
}

// ---- raster backend ------------------------------------------------------

namespace detail {

/// Coverage accumulator over a clipped pixel box; an element's strokes are
/// unioned (max) before a single blend so joints are not darkened twice.
class CoverageBox {
 public:
  CoverageBox(const Image& img, double x0, double y0, double x1, double y1)
      : x0_(std::max(0, static_cast<int>(std::floor(x0)))),
        y0_(std::max(0, static_cast<int>(std::floor(y0)))),
        x1_(std::min(img.width - 1, static_cast<int>(std::ceil(x1)))),
        y1_(std::min(img.height - 1, static_cast<int>(std::ceil(y1)))) {
    if (x1_ >= x0_ && y1_ >= y0_) cov_.assign(static_cast<std::size_t>(x1_ - x0_ + 1) * (y1_ - y0_ + 1), 0.0f);
  }

  bool empty() const { return cov_.empty(); }
  int x0() const { return x0_; }
  int x1() const { return x1_; }
  int y0() const { return y0_; }
  int y1() const { return y1_; }

  void put(int x, int y, double c) {
    if (x < x0_ || x > x1_ || y < y0_ || y > y1_ || c <= 0.0) return;
    auto& v = cov_[static_cast<std::size_t>(y - y0_) * (x1_ - x0_ + 1) + (x - x0_)];
    v = std::max(v, static_cast<float>(std::min(c, 1.0)));
  }

  void blend_into(Image& img, Rgb color) const {
    if (empty()) return;
    const int w = x1_ - x0_ + 1;
    for (int y = y0_; y <= y1_; ++y) {
      for (int x = x0_; x <= x1_; ++x) {
        const float c = cov_[static_cast<std::size_t>(y - y0_) * w + (x - x0_)];
        if (c > 0.0f) img.blend(x, y, color, c);
      }
    }
  }

 private:
  int x0_, y0_, x1_, y1_;
  std::vector<float> cov_;
};

inline double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 == 0.0 ? 0.0 : std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return dist(p, a + d * t);
}

/// Adds the coverage of a round-capped stroke from a to b. Rows are limited
/// to the part of the segment that can reach them.
inline void stroke_segment(CoverageBox& box, Vec2 a, Vec2 b, double width) {
  const double r = width / 2.0;
  const double reach = r + 1.0;
  const int ylo = std::max(box.y0(), static_cast<int>(std::floor(std::min(a.y, b.y) - reach)));
  const int yhi = std::min(box.y1(), static_cast<int>(std::ceil(std::max(a.y, b.y) + reach)));
  for (int y = ylo; y <= yhi; ++y) {
    const double cy = y + 0.5;
    double tlo = 0.0, thi = 1.0;
    if (a.y != b.y) {
      tlo = std::clamp((cy - reach - a.y) / (b.y - a.y), 0.0, 1.0);
      thi = std::clamp((cy + reach - a.y) / (b.y - a.y), 0.0, 1.0);
      if (tlo > thi) std::swap(tlo, thi);
    }
    const double xa = a.x + (b.x - a.x) * tlo;
    const double xb = a.x + (b.x - a.x) * thi;
    const int xlo = std::max(box.x0(), static_cast<int>(std::floor(std::min(xa, xb) - reach)));
    const int xhi = std::min(box.x1(), static_cast<int>(std::ceil(std::max(xa, xb) + reach)));
    for (int x = xlo; x <= xhi; ++x) {
      box.put(x, y, r + 0.5 - segment_distance({x + 0.5, cy}, a, b));
    }
  }
}

inline void draw_strokes(Image& img, const std::vector<std::vector<Vec2>>& strokes, double width, Rgb color) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& s : strokes) {
    for (const auto& p : s) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
  }
  const double pad = width / 2.0 + 1.0;
  CoverageBox box(img, x0 - pad, y0 - pad, x1 + pad, y1 + pad);
  if (box.empty()) return;
  for (const auto& s : strokes) {
    if (s.size() == 1) stroke_segment(box, s[0], s[0], width);
    for (std::size_t i = 1; i < s.size(); ++i) stroke_segment(box, s[i - 1], s[i], width);
  }
  box.blend_into(img, color);
}

inline void draw_ring(Image& img, Vec2 c, double radius, double width, bool filled, Rgb color) {
  const double r = width / 2.0;
  const double outer = filled ? radius + 1.0 : radius + r + 1.0;
  CoverageBox box(img, c.x - outer, c.y - outer, c.x + outer, c.y + outer);
  if (box.empty()) return;
  for (int y = box.y0(); y <= box.y1(); ++y) {
    for (int x = box.x0(); x <= box.x1(); ++x) {
      const double d = dist({x + 0.5, y + 0.5}, c);
      box.put(x, y, filled ? radius + 0.5 - d : r + 0.5 - std::abs(d - radius));
    }
  }
  box.blend_into(img, color);
}

}  // namespace detail

inline Image rasterize(const DisplayList& dl, Counts* drawn = nullptr) {
  Image img(dl.width, dl.height);
  const Rgb black{0, 0, 0};
  Counts counts = count_by_kind({});
  for (const auto& e : dl.elements) {
    switch (e.kind) {
      case Kind::Point: detail::draw_ring(img, e.center, e.radius, 0.0, true, black); break;
      case Kind::Circle: detail::draw_ring(img, e.center, e.radius, e.width, false, black); break;
      default: detail::draw_strokes(img, e.strokes, e.width, black);
    }
    ++counts[kind_name(e.kind)];
  }
  if (drawn) *drawn = counts;
  return img;
}

struct RenderResult {
  std::string svg;
  std::vector<std::uint8_t> png;
  Image image;
  nlohmann::json log;
  std::vector<std::string> warnings;
};

/// Renders `fig` (with its annotations) to SVG and PNG, plus a JSON render
/// log listing every drawn element and the per-backend element counts.
inline RenderResult render(const Figure& fig, const RenderConfig& config) {
  const auto dl = build_display_list(fig, config);
  RenderResult out;
  Counts svg_counts, png_counts;
  out.svg = to_svg(dl, &svg_counts);
  out.image = rasterize(dl, &png_counts);
  out.png = encode_png(out.image);
  out.warnings = dl.warnings;
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& e : dl.elements) elements.push_back({{"kind", kind_name(e.kind)}, {"ref", e.ref}});
  out.log = {{"width", dl.width},
             {"height", dl.height},
             {"elements", elements},
             {"counts", {{"svg", svg_counts}, {"png", png_counts}}},
             {"warnings", dl.warnings}};
  return out;
}

inline RenderResult render(const Figure& fig, const AnnotationSet& annotations, const RenderConfig& config) {
  Figure annotated = fig;
  annotated.annotations = annotations;
  return render(annotated, config);
}

}  // namespace geosynth::render
