#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "geosynth/dsl.hpp"
#include "geosynth/hash.hpp"
#include "geosynth/layout.hpp"
#include "geosynth/render.hpp"

using namespace geosynth;
using namespace geosynth::render;

namespace {

Figure solve(const std::string& src, std::uint64_t seed = 1) {
  return layout::solve_program(dsl::parse_program(src), layout::LayoutConfig{}, seed);
}

int count(const RenderResult& r, const std::string& kind, const std::string& ref = "") {
  int n = 0;
  for (const auto& e : r.log["elements"]) {
    if (e["kind"] == kind && (ref.empty() || e["ref"] == ref)) ++n;
  }
  return n;
}

Figure points_only(std::initializer_list<NamedPoint> pts) {
  Figure f;
  f.points.assign(pts.begin(), pts.end());
  return f;
}

bool is_dark(Rgb c) { return c.r < 128 && c.g < 128 && c.b < 128; }

}  // namespace

TEST(Render, TriangleWithMidpoint) {
  const auto fig = solve("A B C = triangle A B C; D = midpoint A B");
  const auto r = render::render(fig, RenderConfig{});
  EXPECT_EQ(count(r, "point"), 4);
  EXPECT_EQ(count(r, "label"), 4);
  // AD, DB, BC, CA
  EXPECT_EQ(count(r, "segment"), 4);
  EXPECT_EQ(count(r, "circle"), 0);
  EXPECT_EQ(r.log["counts"]["svg"], r.log["counts"]["png"]);
}

TEST(Render, EqualSegmentTicks) {
  auto fig = solve("A B C = triangle A B C; D = midpoint A B");
  AnnotationSet ann;
  ann.equal_segment_groups = {{SegmentRef('A', 'D'), SegmentRef('D', 'B')}};
  const auto r = render::render(fig, ann, RenderConfig{});
  EXPECT_EQ(count(r, "tick", "AD"), 1);
  EXPECT_EQ(count(r, "tick", "BD"), 1);
  EXPECT_EQ(count(r, "tick"), 2);

  ann.equal_segment_groups.push_back({SegmentRef('B', 'C'), SegmentRef('C', 'A')});
  const auto r2 = render::render(fig, ann, RenderConfig{});
  EXPECT_EQ(count(r2, "tick", "BC"), 2);
  EXPECT_EQ(count(r2, "tick", "AC"), 2);
}

TEST(Render, RightAngleSquareAtVertex) {
  auto fig = solve("A B C = triangle A B C; D = foot C A B");
  fig.add_segment('C', 'D');
  fig.annotations.right_angle_marks = {{'C', 'D', 'B'}};
  const auto dl = build_display_list(fig, RenderConfig{});
  int squares = 0;
  for (const auto& e : dl.elements) {
    if (e.kind != Kind::RightAngle) continue;
    ++squares;
    ASSERT_EQ(e.strokes.size(), 1u);
    ASSERT_EQ(e.strokes[0].size(), 3u);
    const Vec2 d = fig.at('D');
    EXPECT_NEAR(dist(e.strokes[0][0], d), 10.0, 1e-9);
    EXPECT_NEAR(dist(e.strokes[0][1], d), 10.0 * std::sqrt(2.0), 1e-6);
    EXPECT_NEAR(dist(e.strokes[0][2], d), 10.0, 1e-9);
  }
  EXPECT_EQ(squares, 1);
}

TEST(Render, AllAnnotationKindsInBothBackends) {
  auto fig = solve("A B C D = rectangle A B C D; E = midpoint A B; O = circle O A B C");
  AnnotationSet ann;
  ann.parallel_groups = {{SegmentRef('A', 'B'), SegmentRef('C', 'D')}};
  ann.equal_angle_groups = {{{'A', 'B', 'C'}, {'B', 'C', 'D'}}};
  ann.right_angle_marks = {{'D', 'A', 'B'}};
  ann.text_labels.push_back({TextLabel::Target::Segment, SegmentRef('B', 'C'), {}, "2x+4"});
  ann.text_labels.push_back({TextLabel::Target::Angle, {}, {'B', 'C', 'D'}, "90"});
  const auto r = render::render(fig, ann, RenderConfig{});
  EXPECT_EQ(count(r, "chevron"), 2);
  EXPECT_EQ(count(r, "arc"), 2);
  EXPECT_EQ(count(r, "right_angle"), 1);
  EXPECT_EQ(count(r, "text_label"), 2);
  EXPECT_EQ(count(r, "circle"), 1);
  EXPECT_EQ(r.log["counts"]["svg"], r.log["counts"]["png"]);
  EXPECT_NE(r.svg.find("class=\"chevron\""), std::string::npos);
  EXPECT_NE(r.svg.find("class=\"text_label\" data-ref=\"BCD\""), std::string::npos);
}

TEST(Render, InvalidAnnotationsRejected) {
  auto fig = solve("A B C = triangle A B C");
  AnnotationSet ann;
  ann.equal_segment_groups = {{SegmentRef('A', 'Z')}};
  EXPECT_THROW(render::render(fig, ann, RenderConfig{}), Error);
  RenderConfig small;
  small.image_size = 64;
  EXPECT_THROW(render::render(fig, small), Error);
}

TEST(Render, RasterInk) {
  auto fig = points_only({{'A', {100, 256}}, {'B', {400, 256}}});
  fig.add_segment('A', 'B');
  const auto r = render::render(fig, RenderConfig{});
  const auto img = decode_png(r.png);
  ASSERT_EQ(img.width, 512);
  ASSERT_EQ(img.height, 512);
  EXPECT_TRUE(is_dark(img.at(250, 255)));
  EXPECT_TRUE(is_dark(img.at(100, 256)));
  EXPECT_EQ(img.at(250, 400), (Rgb{255, 255, 255}));
  EXPECT_EQ(img.at(5, 5), (Rgb{255, 255, 255}));
}

TEST(Render, Deterministic) {
  for (const auto& shape : fixtures::corpus_shapes()) {
    const auto fig = solve(shape.source, 11);
    const auto a = render::render(fig, RenderConfig{});
    const auto b = render::render(fig, RenderConfig{});
    ASSERT_EQ(sha256_hex(std::string(a.png.begin(), a.png.end())),
              sha256_hex(std::string(b.png.begin(), b.png.end())));
    ASSERT_EQ(a.svg, b.svg);
    ASSERT_EQ(a.log["counts"]["svg"], a.log["counts"]["png"]) << shape.source;
    ASSERT_EQ(count(a, "label"), static_cast<int>(fig.points.size()));
  }
}

TEST(Render, PadToSquare) {
  Figure fig = points_only({{'A', {40, 40}}, {'B', {472, 260}}});
  fig.canvas = {512, 300, 40};
  fig.add_segment('A', 'B');
  RenderConfig cfg;
  const auto padded = decode_png(render::render(fig, cfg).png);
  EXPECT_EQ(padded.width, 512);
  EXPECT_EQ(padded.height, 512);
  cfg.pad_to_square = false;
  const auto raw = decode_png(render::render(fig, cfg).png);
  EXPECT_EQ(raw.width, 512);
  EXPECT_EQ(raw.height, 300);

  const auto sq = pad_to_square(raw);
  ASSERT_EQ(sq.width, sq.height);
  const int oy = (512 - 300) / 2;
  for (int y = 0; y < raw.height; ++y) {
    for (int x = 0; x < raw.width; ++x) ASSERT_EQ(sq.at(x, y + oy), raw.at(x, y));
  }
  for (int x = 0; x < sq.width; ++x) {
    EXPECT_EQ(sq.at(x, 0), (Rgb{255, 255, 255}));
    EXPECT_EQ(sq.at(x, 511), (Rgb{255, 255, 255}));
  }
}

TEST(Labels, IsolatedPointGoesNorthEast) {
  const auto fig = points_only({{'P', {256, 256}}});
  const auto pos = place_labels(fig, RenderConfig{}).positions.at('P');
  const double r = 14.0;
  EXPECT_NEAR(pos.x, 256 + r / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(pos.y, 256 - r / std::sqrt(2.0), 1e-9);
}

TEST(Labels, HorizontalSegmentAboveOrBelow) {
  auto fig = points_only({{'A', {100, 256}}, {'M', {250, 256}}, {'B', {400, 256}}});
  fig.add_segment('A', 'B');
  const auto placed = place_labels(fig, RenderConfig{});
  EXPECT_TRUE(placed.warnings.empty());
  for (char c : {'A', 'M', 'B'}) {
    const auto pos = placed.positions.at(c);
    EXPECT_GE(std::abs(pos.y - 256), 14.0 / std::sqrt(2.0) - 1e-9) << c;
  }
  // the interior point sees the line both ways; straight up is best
  EXPECT_NEAR(placed.positions.at('M').x, 250, 1e-9);
  EXPECT_NEAR(placed.positions.at('M').y, 256 - 14, 1e-9);
}

TEST(Labels, DegreeFiveVertexMatchesBruteForce) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    Figure fig = points_only({{'O', {256, 256}}});
    std::vector<double> spokes;
    for (int k = 0; k < 5; ++k) {
      const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
      spokes.push_back(t);
      const char name = static_cast<char>('A' + k);
      fig.points.push_back({name, {256 + 150 * std::cos(t), 256 - 150 * std::sin(t)}});
      fig.add_segment('O', name);
    }
    // oracle in y-up degrees: candidate k points at 45(k+1)
    double best = -1.0;
    int best_k = -1;
    for (int k = 0; k < 8; ++k) {
      const double c = 45.0 * (k + 1);
      double m = 90.0;
      for (double t : spokes) {
        double d = std::fmod(std::abs(c - t * 180.0 / std::numbers::pi), 360.0);
        m = std::min(m, std::min(d, 360.0 - d));
      }
      if (m > best + 1e-7) {
        best = m;
        best_k = k;
      }
    }
    const auto pos = place_labels(fig, RenderConfig{}).positions.at('O');
    const double got = std::atan2(-(pos.y - 256), pos.x - 256) * 180.0 / std::numbers::pi;
    const double want = 45.0 * (best_k + 1);
    const double diff = std::fmod(std::abs(got - want) + 360.0, 360.0);
    EXPECT_LT(std::min(diff, 360.0 - diff), 1e-6) << "trial " << trial;
  }
}

TEST(Labels, CircleTangentsAvoided) {
  // P on a circle centred to its south: tangents are horizontal, the
  // radius goes down, so the label goes straight up
  Figure fig = points_only({{'O', {256, 356}}, {'P', {256, 256}}});
  fig.add_circle('O', 100);
  const auto pos = place_labels(fig, RenderConfig{}).positions.at('P');
  EXPECT_NEAR(pos.x, 256, 1e-9);
  EXPECT_NEAR(pos.y, 242, 1e-9);
}

TEST(Labels, CrowdedPointsWarnButLabelOnce) {
  Figure fig;
  for (int k = 0; k < 10; ++k) fig.points.push_back({static_cast<char>('A' + k), {256.0 + k * 0.5, 256.0}});
  const auto placed = place_labels(fig, RenderConfig{});
  EXPECT_EQ(placed.positions.size(), 10u);
  ASSERT_FALSE(placed.warnings.empty());
  EXPECT_NE(placed.warnings.front().find("LabelCollision"), std::string::npos);
  const auto r = render::render(fig, RenderConfig{});
  EXPECT_FALSE(r.warnings.empty());
  for (int k = 0; k < 10; ++k) EXPECT_EQ(count(r, "label", std::string(1, static_cast<char>('A' + k))), 1);
}

TEST(Labels, SpacedWhenNoWarning) {
  for (const auto& shape : fixtures::corpus_shapes()) {
    const auto fig = solve(shape.source, 3);
    const auto placed = place_labels(fig, RenderConfig{});
    if (!placed.warnings.empty()) continue;
    for (const auto& [a, pa] : placed.positions) {
      for (const auto& [b, pb] : placed.positions) {
        if (a < b) {
          ASSERT_GE(dist(pa, pb), 16.0 - 1e-9) << shape.source;
        }
      }
    }
  }
}

TEST(Font, CoversLabelAlphabet) {
  for (char c = 'A'; c <= 'Z'; ++c) EXPECT_FALSE(font::glyph(c).empty()) << c;
  for (char c : std::string("0123456789+-x./()")) EXPECT_FALSE(font::glyph(c).empty()) << c;
  EXPECT_TRUE(font::supported(' '));
  const auto strokes = font::layout_text("AB", {100, 100}, 12);
  double x0 = 1e9, x1 = -1e9;
  for (const auto& s : strokes) {
    for (const auto& p : s) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
    }
  }
  EXPECT_NEAR((x0 + x1) / 2, 100, 1e-9);
}

TEST(Png, RoundTrip) {
  Image img(7, 5);
  img.set(3, 2, {10, 20, 30});
  const auto back = decode_png(encode_png(img));
  EXPECT_EQ(back.width, 7);
  EXPECT_EQ(back.height, 5);
  EXPECT_EQ(back.pixels, img.pixels);
}
