#pragma once

// Numeric extraction of the relations a reader can see in a solved figure:
// drawn lines and the points on them, circle membership, parallel and
// perpendicular line pairs, drawn angles, equal lengths and equal angles.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "geosynth/figure.hpp"
#include "geosynth/geometry.hpp"

namespace geosynth::facts {

/// Absolute tolerance for incidence tests, relative to the canvas size.
inline double incidence_tolerance(const Figure& fig) {
  return 1e-6 * std::max(fig.canvas.width, fig.canvas.height);
}

/// Maximal drawn line: the figure points on a union of collinear,
/// overlapping segments, ordered along the line.
struct DrawnLine {
  std::vector<char> points;

  /// Points sorted alphabetically and concatenated, e.g. "BCD".
  std::string key() const {
    std::string s(points.begin(), points.end());
    std::sort(s.begin(), s.end());
    return s;
  }
  bool contains(char c) const { return std::find(points.begin(), points.end(), c) != points.end(); }
};

struct CircleMembers {
  char center;
  double radius;
  std::vector<char> members;  // sorted, center excluded
};

struct AngleFact {
  AngleRef angle;
  double measure_deg;
};

struct SegmentFact {
  SegmentRef segment;
  double length;
};

struct FigureFacts {
  std::vector<DrawnLine> lines;
  std::vector<CircleMembers> circles;
  std::vector<std::vector<std::size_t>> parallel_groups;               // indices into lines
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> perpendicular;  // source -> targets
  std::vector<AngleFact> angles;                 // every drawn angle, one orientation
  std::vector<AngleFact> elementary_angles;      // between adjacent rays at a vertex
  std::vector<SegmentFact> segments;             // every pair of points sharing a drawn line
  std::vector<SegmentFact> elementary_segments;  // adjacent points along a drawn line
  std::vector<std::pair<SegmentRef, SegmentRef>> equal_segments;
  std::vector<std::pair<AngleRef, AngleRef>> equal_angles;
};

namespace detail {

inline Vec2 direction(const Figure& fig, const DrawnLine& l) {
  return unit(fig.at(l.points.back()) - fig.at(l.points.front()));
}

inline std::vector<DrawnLine> extract_lines(const Figure& fig) {
  const double tol = incidence_tolerance(fig);
  // point sets covered by each drawn segment
  std::vector<std::vector<char>> sets;
  for (const auto& s : fig.segments) {
    const Vec2 a = fig.at(s.a);
    const Vec2 b = fig.at(s.b);
    const double len = dist(a, b);
    if (len == 0.0) continue;
    std::vector<char> on;
    for (const auto& p : fig.points) {
      if (distance_to_line(p.pos, a, b) > tol) continue;
      const double t = dot(p.pos - a, b - a) / (len * len);
      if (t >= -tol / len && t <= 1.0 + tol / len) on.push_back(p.name);
    }
    sets.push_back(on);
  }
  // merge collinear sets sharing a point
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < sets.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < sets.size() && !merged; ++j) {
        const bool share = std::any_of(sets[i].begin(), sets[i].end(), [&](char c) {
          return std::find(sets[j].begin(), sets[j].end(), c) != sets[j].end();
        });
        if (!share) continue;
        const Vec2 a = fig.at(sets[i].front());
        const Vec2 b = fig.at(sets[i].back());
        const bool collinear = std::all_of(sets[j].begin(), sets[j].end(), [&](char c) {
          return distance_to_line(fig.at(c), a, b) <= tol;
        });
        if (!collinear) continue;
        for (char c : sets[j]) {
          if (std::find(sets[i].begin(), sets[i].end(), c) == sets[i].end()) sets[i].push_back(c);
        }
        sets.erase(sets.begin() + static_cast<long>(j));
        merged = true;
      }
    }
  }
  std::vector<DrawnLine> lines;
  for (auto& set : sets) {
    // order along the line
    const Vec2 a = fig.at(set.front());
    Vec2 dir{};
    for (char c : set) {
      if (dist(fig.at(c), a) > 0.0) {
        dir = fig.at(c) - a;
        break;
      }
    }
    std::sort(set.begin(), set.end(), [&](char p, char q) {
      return dot(fig.at(p) - a, dir) < dot(fig.at(q) - a, dir);
    });
    lines.push_back({set});
  }
  std::sort(lines.begin(), lines.end(),
            [](const DrawnLine& x, const DrawnLine& y) { return x.key() < y.key(); });
  return lines;
}

}  // namespace detail

inline FigureFacts extract(const Figure& fig) {
  FigureFacts out;
  const double tol = incidence_tolerance(fig);
  out.lines = detail::extract_lines(fig);

  for (const auto& c : fig.circles) {
    CircleMembers m{c.center, c.radius, {}};
    const Vec2 o = fig.at(c.center);
    for (const auto& p : fig.points) {
      if (p.name != c.center && std::abs(dist(p.pos, o) - c.radius) <= tol) m.members.push_back(p.name);
    }
    std::sort(m.members.begin(), m.members.end());
    out.circles.push_back(m);
  }

  // directions are unit vectors, so the tests below are scale free
  constexpr double kDirTol = 1e-6;
  const auto n = out.lines.size();
  std::vector<Vec2> dirs;
  for (const auto& l : out.lines) dirs.push_back(detail::direction(fig, l));
  std::vector<bool> grouped(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (grouped[i]) continue;
    std::vector<std::size_t> group{i};
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!grouped[j] && std::abs(cross(dirs[i], dirs[j])) < kDirTol) group.push_back(j);
    }
    if (group.size() >= 2) {
      for (auto g : group) grouped[g] = true;
      out.parallel_groups.push_back(group);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> targets;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && std::abs(dot(dirs[i], dirs[j])) < kDirTol) targets.push_back(j);
    }
    if (!targets.empty()) out.perpendicular.emplace_back(i, targets);
  }

  for (const auto& l : out.lines) {
    for (std::size_t i = 0; i < l.points.size(); ++i) {
      for (std::size_t j = i + 1; j < l.points.size(); ++j) {
        const SegmentRef s(l.points[i], l.points[j]);
        const double len = dist(fig.at(s.a), fig.at(s.b));
        out.segments.push_back({s, len});
        if (j == i + 1) out.elementary_segments.push_back({s, len});
      }
    }
  }

  // drawn angles: vertex Q on two distinct lines, P and R on either line
  for (const auto& q : fig.points) {
    std::vector<std::size_t> through;
    for (std::size_t i = 0; i < n; ++i) {
      if (out.lines[i].contains(q.name)) through.push_back(i);
    }
    for (std::size_t a = 0; a < through.size(); ++a) {
      for (std::size_t b = a + 1; b < through.size(); ++b) {
        for (char p : out.lines[through[a]].points) {
          if (p == q.name) continue;
          for (char r : out.lines[through[b]].points) {
            if (r == q.name) continue;
            const char lo = std::min(p, r);
            const char hi = std::max(p, r);
            out.angles.push_back({{lo, q.name, hi}, angle_deg(fig.at(lo), q.pos, fig.at(hi))});
          }
        }
      }
    }
    // rays from Q: nearest point along each direction of each line through Q
    struct Ray {
      char to;
      double heading;
    };
    std::vector<Ray> rays;
    for (auto li : through) {
      const auto& pts = out.lines[li].points;
      const auto it = std::find(pts.begin(), pts.end(), q.name);
      if (it != pts.begin()) rays.push_back({*(it - 1), 0.0});
      if (it + 1 != pts.end()) rays.push_back({*(it + 1), 0.0});
    }
    for (auto& r : rays) {
      const Vec2 d = fig.at(r.to) - q.pos;
      r.heading = std::atan2(d.y, d.x);
    }
    std::sort(rays.begin(), rays.end(), [](const Ray& x, const Ray& y) { return x.heading < y.heading; });
    if (rays.size() >= 2) {
      for (std::size_t i = 0; i < rays.size(); ++i) {
        const auto& r1 = rays[i];
        const auto& r2 = rays[(i + 1) % rays.size()];
        double gap = r2.heading - r1.heading;
        if (gap < 0.0) gap += 2.0 * std::numbers::pi;
        if (gap >= std::numbers::pi - 1e-9) continue;  // reflex side is not an angle
        const double m = angle_deg(fig.at(r1.to), q.pos, fig.at(r2.to));
        if (m < 1e-6 || m > 180.0 - 1e-6) continue;
        const char lo = std::min(r1.to, r2.to);
        const char hi = std::max(r1.to, r2.to);
        out.elementary_angles.push_back({{lo, q.name, hi}, m});
      }
    }
  }

  const auto& es = out.elementary_segments;
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      if (std::abs(es[i].length - es[j].length) <= 1e-9 * std::max(es[i].length, es[j].length)) {
        out.equal_segments.emplace_back(es[i].segment, es[j].segment);
      }
    }
  }
  const auto& ea = out.elementary_angles;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    for (std::size_t j = i + 1; j < ea.size(); ++j) {
      if (ea[i].angle != ea[j].angle && std::abs(ea[i].measure_deg - ea[j].measure_deg) <= 1e-7) {
        out.equal_angles.emplace_back(ea[i].angle, ea[j].angle);
      }
    }
  }
  return out;
}

/// Adds a segment for every pair of points, not already on a common drawn
/// line, whose direction is parallel (or perpendicular) to a drawn line.
/// Used before synthesizing parallel / perpendicular questions so that
/// constructed relations such as a triangle midline are visible.
inline void reveal_relations(Figure& fig, bool perpendicular) {
  const auto lines = detail::extract_lines(fig);
  std::vector<Vec2> dirs;
  for (const auto& l : lines) dirs.push_back(detail::direction(fig, l));
  constexpr double kDirTol = 1e-6;
  std::vector<SegmentRef> add;
  for (std::size_t i = 0; i < fig.points.size(); ++i) {
    for (std::size_t j = i + 1; j < fig.points.size(); ++j) {
      const char p = fig.points[i].name;
      const char q = fig.points[j].name;
      const bool shared = std::any_of(lines.begin(), lines.end(), [&](const DrawnLine& l) {
        return l.contains(p) && l.contains(q);
      });
      if (shared) continue;
      const Vec2 d = unit(fig.points[j].pos - fig.points[i].pos);
      for (std::size_t k = 0; k < lines.size(); ++k) {
        const double v = perpendicular ? dot(d, dirs[k]) : cross(d, dirs[k]);
        // a parallel pair must not lie on the drawn line itself
        const bool on_line =
            !perpendicular && distance_to_line(fig.points[i].pos, fig.at(lines[k].points.front()),
                                               fig.at(lines[k].points.back())) <=
                                  incidence_tolerance(fig);
        if (std::abs(v) < kDirTol && !on_line) {
          add.emplace_back(p, q);
          break;
        }
      }
    }
  }
  for (const auto& s : add) fig.add_segment(s.a, s.b);
}

}  // namespace geosynth::facts
