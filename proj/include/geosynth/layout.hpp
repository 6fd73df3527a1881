#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "geosynth/dsl.hpp"
#include "geosynth/error.hpp"
#include "geosynth/figure.hpp"
#include "geosynth/geometry.hpp"
#include "geosynth/rng.hpp"

namespace geosynth::layout {

struct LayoutConfig {
  Canvas canvas;
  double min_separation = 0.05 * 512.0;  // canvas units
  double min_angle_deg = 15.0;
  int max_retries = 100;
  int letter_pool_size = 26;

  void validate() const {
    if (canvas.width <= 2 * canvas.margin || canvas.height <= 2 * canvas.margin) {
      throw Error(Errc::InvalidConfig, "canvas smaller than its margins");
    }
    if (max_retries < 1) throw Error(Errc::InvalidConfig, "max_retries must be >= 1");
    if (!(min_angle_deg > 0.0 && min_angle_deg < 60.0)) {
      throw Error(Errc::InvalidConfig, "min_angle_deg must lie in (0, 60)");
    }
    if (min_separation < 0.0) throw Error(Errc::InvalidConfig, "min_separation must be >= 0");
    if (letter_pool_size < 1 || letter_pool_size > 26) {
      throw Error(Errc::InvalidConfig, "letter_pool_size must lie in [1, 26]");
    }
  }
};

inline nlohmann::json to_json(const LayoutConfig& c) {
  return {{"width", c.canvas.width},          {"height", c.canvas.height},
          {"margin", c.canvas.margin},        {"min_separation", c.min_separation},
          {"min_angle_deg", c.min_angle_deg}, {"max_retries", c.max_retries},
          {"letter_pool_size", c.letter_pool_size}};
}

inline LayoutConfig layout_config_from_json(const nlohmann::json& j) {
  LayoutConfig c;
  c.canvas.width = j.value("width", c.canvas.width);
  c.canvas.height = j.value("height", c.canvas.height);
  c.canvas.margin = j.value("margin", c.canvas.margin);
  c.min_separation = j.value("min_separation", c.min_separation);
  c.min_angle_deg = j.value("min_angle_deg", c.min_angle_deg);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.letter_pool_size = j.value("letter_pool_size", c.letter_pool_size);
  c.validate();
  return c;
}

/// Predicate satisfaction tolerance, canvas units.
inline constexpr double kTolerance = 1e-6;

namespace detail {

/// Signals that a random draw was rejected and should be redrawn.
struct Reject {};

using Locus = std::variant<Line, Circle>;

inline double min_triangle_angle(Vec2 a, Vec2 b, Vec2 c) {
  return std::min({angle_deg(b, a, c), angle_deg(a, b, c), angle_deg(a, c, b)});
}

inline Vec2 random_point(Rng& rng, const Canvas& cv) {
  const double x = rng.uniform(cv.margin, cv.width - cv.margin);
  const double y = rng.uniform(cv.margin, cv.height - cv.margin);
  return {x, y};
}

inline double drawable_extent(const Canvas& cv) {
  return std::min(cv.width, cv.height) - 2 * cv.margin;
}

inline Locus locus_of(const dsl::Term& term, const Figure& fig) {
  const auto in = term.inputs();
  const std::string& name = term.primitive;
  if (name == "on_circle") {
    const Vec2 o = fig.at(in[0]);
    return Circle{o, dist(o, fig.at(in[1]))};
  }
  if (name == "on_line") {
    const Vec2 x = fig.at(in[0]);
    const Vec2 y = fig.at(in[1]);
    if (dist(x, y) == 0.0) throw Error(Errc::NumericDegeneracy, "on_line through coincident points");
    return Line{x, y - x, false};
  }
  if (name == "angle_bisector") {
    const Vec2 b = fig.at(in[0]);
    const Vec2 a = fig.at(in[1]);
    const Vec2 c = fig.at(in[2]);
    const Vec2 dir = unit(b - a) + unit(c - a);
    if (norm(dir) < 1e-12) throw Error(Errc::NumericDegeneracy, "straight angle has no interior bisector ray");
    return Line{a, unit(dir), true};
  }
  // lc_tangent: tangent at C to the circle centred at A
  const Vec2 c = fig.at(in[0]);
  const Vec2 a = fig.at(in[1]);
  if (dist(a, c) == 0.0) throw Error(Errc::NumericDegeneracy, "lc_tangent with zero radius");
  return Line{c, perp(unit(c - a)), false};
}

inline std::vector<Vec2> intersect_loci(const Locus& a, const Locus& b) {
  return std::visit([](const auto& x, const auto& y) { return intersect(x, y); }, a, b);
}

/// Single random point on a lone locus.
inline Vec2 sample_locus(const dsl::Term& term, const Figure& fig, Rng& rng) {
  const auto in = term.inputs();
  const std::string& name = term.primitive;
  const Locus locus = locus_of(term, fig);
  if (name == "on_circle") {
    const auto& c = std::get<Circle>(locus);
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return c.center + Vec2{std::cos(theta), std::sin(theta)} * c.radius;
  }
  const auto& l = std::get<Line>(locus);
  if (name == "on_line") {
    return l.origin + l.dir * rng.uniform(-0.5, 1.5);
  }
  if (name == "angle_bisector") {
    const Vec2 a = fig.at(in[1]);
    const double reach = std::min(dist(a, fig.at(in[0])), dist(a, fig.at(in[2])));
    return l.origin + l.dir * (reach * rng.uniform(0.4, 1.0));
  }
  const double radius = dist(fig.at(in[0]), fig.at(in[1]));
  const double t = radius * rng.uniform(0.5, 1.0);
  return l.origin + l.dir * (rng.coin() ? t : -t);
}

}  // namespace detail

/// Position of the single point placed by a deterministic or locus term used
/// alone. Constructors go through resolve_statement.
inline Vec2 resolve_primitive(const dsl::Term& term, const Figure& fig, Rng& rng) {
  const auto in = term.inputs();
  const std::string& name = term.primitive;
  auto p = [&](std::size_t i) { return fig.at(in[i]); };
  if (name == "midpoint") return (p(0) + p(1)) / 2.0;
  if (name == "eq_triangle") {
    const Vec2 a = p(0);
    const Vec2 b = p(1);
    if (dist(a, b) == 0.0) throw Error(Errc::NumericDegeneracy, "eq_triangle on coincident base");
    const double side = rng.coin() ? 1.0 : -1.0;
    return (a + b) / 2.0 + perp(b - a) * (side * std::sqrt(3.0) / 2.0);
  }
  if (name == "circle") {
    const auto c = circumcenter(p(0), p(1), p(2));
    if (!c) throw Error(Errc::NumericDegeneracy, "circumcenter of collinear points");
    return *c;
  }
  if (name == "intersection_ll") {
    const auto x = intersect_lines(p(0), p(1), p(2), p(3));
    if (!x) throw Error(Errc::NumericDegeneracy, "intersection of parallel lines");
    return *x;
  }
  if (name == "parallelogram") return p(0) + p(2) - p(1);
  if (name == "foot") {
    if (dist(p(1), p(2)) == 0.0) throw Error(Errc::NumericDegeneracy, "foot onto a degenerate line");
    return project_onto_line(p(0), p(1), p(2));
  }
  if (name == "incenter") {
    if (std::abs(cross(p(1) - p(0), p(2) - p(0))) < 1e-12) {
      throw Error(Errc::NumericDegeneracy, "incenter of collinear points");
    }
    return incenter(p(0), p(1), p(2));
  }
  if (dsl::find_primitive(name) && term.info().kind == dsl::PrimitiveKind::Locus) {
    return detail::sample_locus(term, fig, rng);
  }
  throw Error(Errc::UnknownPrimitive, "cannot resolve primitive '" + name + "'");
}

/// Positions for every declared point of `st`, in declaration order. Throws
/// NumericDegeneracy when the geometry admits no solution.
inline std::vector<Vec2> resolve_statement(const dsl::Statement& st, const Figure& fig, Rng& rng,
                                           const LayoutConfig& config) {
  const auto& first = st.terms.front();
  const auto& cv = config.canvas;
  if (first.info().kind == dsl::PrimitiveKind::Constructor) {
    const std::string& name = first.primitive;
    const double extent = detail::drawable_extent(cv);
    if (name == "segment") return {detail::random_point(rng, cv), detail::random_point(rng, cv)};
    if (name == "triangle") {
      return {detail::random_point(rng, cv), detail::random_point(rng, cv),
              detail::random_point(rng, cv)};
    }
    if (name == "r_triangle") {
      // right angle at A, so the foot of A onto BC is an interior point
      const Vec2 a = detail::random_point(rng, cv);
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const Vec2 u{std::cos(theta), std::sin(theta)};
      const double l1 = extent * rng.uniform(0.25, 0.75);
      const double l2 = extent * rng.uniform(0.25, 0.75);
      return {a, a + u * l1, a + perp(u) * l2};
    }
    // rectangle A B C D: right angle at B, D closes the parallelogram
    const Vec2 a = detail::random_point(rng, cv);
    const Vec2 b = detail::random_point(rng, cv);
    const double len = dist(a, b);
    if (len == 0.0) throw detail::Reject{};
    const double side = len * rng.uniform(0.4, 1.2) * (rng.coin() ? 1.0 : -1.0);
    const Vec2 c = b + perp(unit(b - a)) * side;
    return {a, b, c, a + c - b};
  }
  if (st.terms.size() == 1) return {resolve_primitive(first, fig, rng)};

  const auto l1 = detail::locus_of(st.terms[0], fig);
  const auto l2 = detail::locus_of(st.terms[1], fig);
  std::vector<Vec2> roots;
  const double scale = std::max(cv.width, cv.height);
  for (const Vec2 r : detail::intersect_loci(l1, l2)) {
    // loci often pass through existing points (e.g. a bisector ray meets the
    // circumcircle at its own vertex); those roots are not new points
    const bool existing = std::any_of(fig.points.begin(), fig.points.end(), [&](const auto& p) {
      return dist(p.pos, r) < 1e-9 * scale;
    });
    if (!existing) roots.push_back(r);
  }
  if (roots.empty()) {
    throw Error(Errc::NumericDegeneracy, "conjoined constraints have no common point");
  }
  return {roots.size() == 1 ? roots.front() : roots[rng.below(roots.size())]};
}

namespace detail {

/// Adds one segment spanning all given (collinear) points.
inline void add_span(Figure& fig, std::initializer_list<char> names) {
  std::vector<char> pts(names);
  const Vec2 a = fig.at(pts[0]);
  Vec2 dir{};
  for (char c : pts) {
    if (dist(fig.at(c), a) > 0.0) {
      dir = fig.at(c) - a;
      break;
    }
  }
  char lo = pts[0];
  char hi = pts[0];
  double tlo = 0.0;
  double thi = 0.0;
  for (char c : pts) {
    const double t = dot(fig.at(c) - a, dir);
    if (t < tlo) {
      tlo = t;
      lo = c;
    }
    if (t > thi) {
      thi = t;
      hi = c;
    }
  }
  fig.add_segment(lo, hi);
}

inline void draw_term(const dsl::Term& term, char target, Figure& fig) {
  const auto in = term.inputs();
  const std::string& n = term.primitive;
  if (n == "triangle" || n == "r_triangle") {
    fig.add_segment(in[0], in[1]);
    fig.add_segment(in[1], in[2]);
    fig.add_segment(in[2], in[0]);
  } else if (n == "segment") {
    fig.add_segment(in[0], in[1]);
  } else if (n == "rectangle") {
    for (std::size_t i = 0; i < 4; ++i) fig.add_segment(in[i], in[(i + 1) % 4]);
  } else if (n == "eq_triangle") {
    fig.add_segment(in[0], in[1]);
    fig.add_segment(target, in[0]);
    fig.add_segment(target, in[1]);
  } else if (n == "midpoint") {
    add_span(fig, {in[0], in[1], target});
  } else if (n == "circle") {
    fig.add_circle(target, dist(fig.at(target), fig.at(in[0])));
  } else if (n == "intersection_ll") {
    add_span(fig, {in[0], in[1], target});
    add_span(fig, {in[2], in[3], target});
  } else if (n == "parallelogram") {
    fig.add_segment(in[0], in[1]);
    fig.add_segment(in[1], in[2]);
    fig.add_segment(in[2], target);
    fig.add_segment(target, in[0]);
  } else if (n == "foot") {
    fig.add_segment(in[0], target);
    add_span(fig, {in[1], in[2], target});
  } else if (n == "on_circle") {
    fig.add_circle(in[0], dist(fig.at(in[0]), fig.at(in[1])));
  } else if (n == "on_line") {
    add_span(fig, {in[0], in[1], target});
  } else if (n == "angle_bisector") {
    fig.add_segment(in[1], target);
  } else if (n == "lc_tangent") {
    fig.add_segment(in[1], in[0]);
    fig.add_segment(in[0], target);
  }
  // incenter draws nothing by itself
}

inline bool separated(const std::vector<NamedPoint>& pts, double min_sep) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (dist(pts[i].pos, pts[j].pos) < min_sep) return false;
    }
  }
  return true;
}

/// Uniform scale + translation of the figure (points and circles) into the
/// drawable area, centred.
inline bool fit_to_canvas(Figure& fig) {
  const auto& cv = fig.canvas;
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  double x1 = -x0;
  double y1 = -x0;
  auto grow = [&](Vec2 p, double r) {
    x0 = std::min(x0, p.x - r);
    y0 = std::min(y0, p.y - r);
    x1 = std::max(x1, p.x + r);
    y1 = std::max(y1, p.y + r);
  };
  for (const auto& p : fig.points) grow(p.pos, 0.0);
  for (const auto& c : fig.circles) grow(fig.at(c.center), c.radius);
  const double bw = x1 - x0;
  const double bh = y1 - y0;
  const double dw = cv.width - 2 * cv.margin;
  const double dh = cv.height - 2 * cv.margin;
  if (!(bw > 0.0 || bh > 0.0)) return false;
  double s = std::numeric_limits<double>::infinity();
  if (bw > 0.0) s = std::min(s, dw / bw);
  if (bh > 0.0) s = std::min(s, dh / bh);
  const Vec2 from{(x0 + x1) / 2.0, (y0 + y1) / 2.0};
  const Vec2 to{cv.width / 2.0, cv.height / 2.0};
  for (auto& p : fig.points) p.pos = to + (p.pos - from) * s;
  for (auto& c : fig.circles) c.radius *= s;
  return true;
}

}  // namespace detail

/// Seeded numeric layout of a construction program.
///
/// Each figure attempt draws from its own stream derived from (seed, attempt).
/// Within an attempt a statement whose draw is rejected (points closer than
/// min_separation, a triangle angle below min_angle_deg, an empty locus
/// intersection) is redrawn up to max_retries times. A statement that cannot
/// be placed, or a fitted figure that violates min_separation, restarts the
/// whole figure, again at most max_retries times.
inline Figure solve_program(const dsl::Program& program, const LayoutConfig& config,
                            std::uint64_t seed) {
  config.validate();
  Error last(Errc::UnsatisfiableConstruction, "no attempt made");
  for (int attempt = 0; attempt < config.max_retries; ++attempt) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
    Figure fig;
    fig.rng_seed = seed;
    fig.canvas = config.canvas;
    bool failed = false;
    for (std::size_t si = 0; si < program.statements.size() && !failed; ++si) {
      const auto& st = program.statements[si];
      const bool random = st.terms.size() > 1 || st.terms.front().info().free_dof > 0 ||
                          st.terms.front().primitive == "eq_triangle";
      int rejects = 0;
      std::optional<std::vector<Vec2>> placed;
      while (!placed) {
        if (rejects >= config.max_retries) {
          last = Error(Errc::UnsatisfiableConstruction,
                       "retries exhausted placing '" + dsl::format_statement(st) + "'",
                       std::nullopt, si);
          failed = true;
          break;
        }
        try {
          auto pos = resolve_statement(st, fig, rng, config);
          std::vector<NamedPoint> trial = fig.points;
          for (std::size_t k = 0; k < pos.size(); ++k) trial.push_back({st.declared[k], pos[k]});
          bool ok = detail::separated(trial, config.min_separation);
          if (ok && pos.size() == 3 && st.terms.front().info().kind == dsl::PrimitiveKind::Constructor) {
            ok = detail::min_triangle_angle(pos[0], pos[1], pos[2]) >= config.min_angle_deg;
          }
          if (ok) {
            placed = std::move(pos);
          } else {
            ++rejects;
          }
        } catch (const detail::Reject&) {
          ++rejects;
        } catch (const Error& e) {
          if (e.code() != Errc::NumericDegeneracy) throw;
          last = Error(e.code(), e.detail(), std::nullopt, si);
          if (!random) {
            failed = true;
            break;
          }
          ++rejects;
        }
        if (!placed && !random && !failed) {
          // a deterministic statement draws the same point again; only a
          // fresh figure can help
          last = Error(Errc::UnsatisfiableConstruction,
                       "degenerate placement of '" + dsl::format_statement(st) + "'",
                       std::nullopt, si);
          failed = true;
        }
      }
      if (failed) break;
      for (std::size_t k = 0; k < placed->size(); ++k) {
        fig.points.push_back({st.declared[k], (*placed)[k]});
      }
      fig.resamples.push_back(rejects);
      for (const auto& term : st.terms) detail::draw_term(term, st.declared.front(), fig);
    }
    if (failed) continue;
    if (!detail::fit_to_canvas(fig) || !detail::separated(fig.points, config.min_separation)) {
      last = Error(Errc::UnsatisfiableConstruction, "fitted figure violates min_separation");
      continue;
    }
    return fig;
  }
  throw last;
}

/// Replaces point names with letters drawn from a random pool of `pool_size`
/// capitals, via a uniform random injection. Geometry is unchanged.
inline Figure assign_letters(const Figure& fig, int pool_size, Rng& rng) {
  const auto n = fig.points.size();
  if (pool_size > 26 || pool_size < 0 || static_cast<std::size_t>(pool_size) < n) {
    throw Error(Errc::PoolTooSmall, "letter pool of " + std::to_string(pool_size) +
                                        " cannot label " + std::to_string(n) + " points");
  }
  std::vector<char> alphabet;
  for (char c = 'A'; c <= 'Z'; ++c) alphabet.push_back(c);
  rng.shuffle(alphabet);
  std::vector<char> pool(alphabet.begin(), alphabet.begin() + pool_size);
  rng.shuffle(pool);
  std::array<char, 128> map{};
  for (std::size_t i = 0; i < n; ++i) map[static_cast<unsigned char>(fig.points[i].name)] = pool[i];
  auto rn = [&](char c) { return map[static_cast<unsigned char>(c)]; };

  Figure out = fig;
  for (auto& p : out.points) p.name = rn(p.name);
  out.segments.clear();
  for (const auto& s : fig.segments) out.add_segment(rn(s.a), rn(s.b));
  for (auto& c : out.circles) c.center = rn(c.center);
  auto seg = [&](SegmentRef& s) { s = SegmentRef(rn(s.a), rn(s.b)); };
  auto ang = [&](AngleRef& a) { a = {rn(a.p), rn(a.q), rn(a.r)}; };
  auto& ann = out.annotations;
  for (auto& g : ann.equal_segment_groups) std::for_each(g.begin(), g.end(), seg);
  for (auto& g : ann.parallel_groups) std::for_each(g.begin(), g.end(), seg);
  for (auto& g : ann.equal_angle_groups) std::for_each(g.begin(), g.end(), ang);
  std::for_each(ann.right_angle_marks.begin(), ann.right_angle_marks.end(), ang);
  for (auto& t : ann.text_labels) {
    if (t.target == TextLabel::Target::Segment) {
      seg(t.segment);
    } else {
      ang(t.angle);
    }
  }
  return out;
}

}  // namespace geosynth::layout
