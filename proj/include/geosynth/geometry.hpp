#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace geosynth {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 unit(Vec2 a) { return a / norm(a); }
inline Vec2 rotate(Vec2 a, double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {a.x * c - a.y * s, a.x * s + a.y * c};
}

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Measure of angle PQR (vertex Q) in degrees, in [0, 180].
inline double angle_deg(Vec2 p, Vec2 q, Vec2 r) {
  const Vec2 u = p - q;
  const Vec2 v = r - q;
  return rad_to_deg(std::atan2(std::abs(cross(u, v)), dot(u, v)));
}

/// Infinite line through `origin` with direction `dir` (not normalized).
/// When `ray` is set only parameters t > 0 belong to the locus.
struct Line {
  Vec2 origin;
  Vec2 dir;
  bool ray = false;
};

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

inline Vec2 project_onto_line(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  return a + d * (dot(p - a, d) / dot(d, d));
}

inline double distance_to_line(Vec2 p, Vec2 a, Vec2 b) {
  return std::abs(cross(b - a, p - a)) / dist(a, b);
}

inline std::optional<Vec2> intersect_lines(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Vec2 r = b - a;
  const Vec2 s = d - c;
  const double denom = cross(r, s);
  const double scale = norm(r) * norm(s);
  if (scale == 0.0 || std::abs(denom) < 1e-12 * scale) return std::nullopt;
  return a + r * (cross(c - a, s) / denom);
}

inline std::optional<Vec2> circumcenter(Vec2 a, Vec2 b, Vec2 c) {
  const double d = 2.0 * cross(b - a, c - a);
  const double scale = dist(a, b) * dist(a, c);
  if (scale == 0.0 || std::abs(d) < 1e-12 * scale) return std::nullopt;
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  const double ab2 = dot(ab, ab);
  const double ac2 = dot(ac, ac);
  return a + Vec2{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
}

inline Vec2 incenter(Vec2 a, Vec2 b, Vec2 c) {
  const double la = dist(b, c);
  const double lb = dist(a, c);
  const double lc = dist(a, b);
  return (a * la + b * lb + c * lc) / (la + lb + lc);
}

/// Intersection points of two loci. Ray loci drop parameters t <= 0.
inline std::vector<Vec2> intersect(const Line& l1, const Line& l2) {
  const double denom = cross(l1.dir, l2.dir);
  const double scale = norm(l1.dir) * norm(l2.dir);
  if (scale == 0.0 || std::abs(denom) < 1e-12 * scale) return {};
  const double t = cross(l2.origin - l1.origin, l2.dir) / denom;
  const double u = cross(l2.origin - l1.origin, l1.dir) / denom;
  if ((l1.ray && t <= 0.0) || (l2.ray && u <= 0.0)) return {};
  return {l1.origin + l1.dir * t};
}

inline std::vector<Vec2> intersect(const Line& l, const Circle& c) {
  const double a = dot(l.dir, l.dir);
  const Vec2 f = l.origin - c.center;
  const double b = 2.0 * dot(f, l.dir);
  const double cc = dot(f, f) - c.radius * c.radius;
  const double disc = b * b - 4.0 * a * cc;
  if (a == 0.0 || disc < 0.0) return {};
  const double sq = std::sqrt(disc);
  std::vector<Vec2> out;
  for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
    if (l.ray && t <= 0.0) continue;
    out.push_back(l.origin + l.dir * t);
  }
  if (out.size() == 2 && disc == 0.0) out.pop_back();
  return out;
}

inline std::vector<Vec2> intersect(const Circle& c, const Line& l) { return intersect(l, c); }

inline std::vector<Vec2> intersect(const Circle& c1, const Circle& c2) {
  const Vec2 d = c2.center - c1.center;
  const double len = norm(d);
  if (len == 0.0 || len > c1.radius + c2.radius || len < std::abs(c1.radius - c2.radius)) {
    return {};
  }
  const double along = (len * len + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * len);
  const double h2 = c1.radius * c1.radius - along * along;
  const Vec2 mid = c1.center + d * (along / len);
  if (h2 <= 0.0) return {mid};
  const Vec2 off = perp(d) * (std::sqrt(h2) / len);
  return {mid + off, mid - off};
}

}  // namespace geosynth
