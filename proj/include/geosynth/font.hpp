#pragma once

// Built-in single-stroke sans-serif font. Glyphs live on an 8 x 12 grid
// (y down, baseline at 12) so that SVG and PNG output never depend on fonts
// installed on the host.

#include <string_view>
#include <vector>

#include "geosynth/geometry.hpp"

namespace geosynth::font {

using Stroke = std::vector<Vec2>;
using Glyph = std::vector<Stroke>;

inline constexpr double kGridHeight = 12.0;
inline constexpr double kAdvance = 11.0;

namespace detail {

inline const Stroke kOval{{4, 0}, {6.8, 1.2}, {8, 4}, {8, 8}, {6.8, 10.8}, {4, 12},
                          {1.2, 10.8}, {0, 8}, {0, 4}, {1.2, 1.2}, {4, 0}};
inline const Stroke kBowl{{0, 0}, {5.5, 0}, {7.5, 1}, {8, 3}, {7.5, 5}, {5.5, 6}, {0, 6}};
inline const Stroke kArcC{{8, 2}, {6.5, 0.3}, {4, 0}, {1.5, 0.8}, {0, 3.5}, {0, 8.5},
                          {1.5, 11.2}, {4, 12}, {6.5, 11.7}, {8, 10}};

inline Glyph letter(char c) {
  switch (c) {
    case 'A': return {{{0, 12}, {4, 0}, {8, 12}}, {{1.33, 8}, {6.67, 8}}};
    case 'B': return {{{0, 12}, {0, 0}, {5, 0}, {7, 1}, {7.5, 3}, {7, 5}, {5, 6}, {0, 6}},
                      {{5, 6}, {7, 7}, {8, 9.5}, {7, 11}, {5, 12}, {0, 12}}};
    case 'C': return {kArcC};
    case 'D': return {{{0, 0}, {0, 12}, {4, 12}, {6.8, 10.8}, {8, 8}, {8, 4}, {6.8, 1.2}, {4, 0}, {0, 0}}};
    case 'E': return {{{8, 0}, {0, 0}, {0, 12}, {8, 12}}, {{0, 6}, {6, 6}}};
    case 'F': return {{{8, 0}, {0, 0}, {0, 12}}, {{0, 6}, {6, 6}}};
    case 'G': {
      Stroke s = kArcC;
      s.insert(s.end(), {{8, 7}, {4.5, 7}});
      return {s};
    }
    case 'H': return {{{0, 0}, {0, 12}}, {{8, 0}, {8, 12}}, {{0, 6}, {8, 6}}};
    case 'I': return {{{4, 0}, {4, 12}}, {{2, 0}, {6, 0}}, {{2, 12}, {6, 12}}};
    case 'J': return {{{8, 0}, {8, 9}, {7, 11.3}, {5, 12}, {3, 12}, {1, 11.3}, {0, 9}}};
    case 'K': return {{{0, 0}, {0, 12}}, {{8, 0}, {0, 8}}, {{2.5, 5.5}, {8, 12}}};
    case 'L': return {{{0, 0}, {0, 12}, {8, 12}}};
    case 'M': return {{{0, 12}, {0, 0}, {4, 8}, {8, 0}, {8, 12}}};
    case 'N': return {{{0, 12}, {0, 0}, {8, 12}, {8, 0}}};
    case 'O': return {kOval};
    case 'P': return {{{0, 12}, {0, 0}}, kBowl};
    case 'Q': return {kOval, {{5, 9}, {8, 12.5}}};
    case 'R': return {{{0, 12}, {0, 0}}, kBowl, {{4.5, 6}, {8, 12}}};
    case 'S': return {{{8, 1.5}, {6, 0}, {2, 0}, {0, 1.5}, {0, 4.5}, {2, 6}, {6, 6}, {8, 7.5}, {8, 10.5}, {6, 12}, {2, 12}, {0, 10.5}}};
    case 'T': return {{{0, 0}, {8, 0}}, {{4, 0}, {4, 12}}};
    case 'U': return {{{0, 0}, {0, 9}, {1, 11.3}, {3, 12}, {5, 12}, {7, 11.3}, {8, 9}, {8, 0}}};
    case 'V': return {{{0, 0}, {4, 12}, {8, 0}}};
    case 'W': return {{{0, 0}, {2, 12}, {4, 4}, {6, 12}, {8, 0}}};
    case 'X': return {{{0, 0}, {8, 12}}, {{8, 0}, {0, 12}}};
    case 'Y': return {{{0, 0}, {4, 6}, {8, 0}}, {{4, 6}, {4, 12}}};
    case 'Z': return {{{0, 0}, {8, 0}, {0, 12}, {8, 12}}};
    default: return {};
  }
}

inline Glyph other(char c) {
  switch (c) {
    case '0': return {{{4, 0}, {6.5, 1}, {7.5, 4}, {7.5, 8}, {6.5, 11}, {4, 12}, {1.5, 11}, {0.5, 8}, {0.5, 4}, {1.5, 1}, {4, 0}}};
    case '1': return {{{2, 2}, {4, 0}, {4, 12}}, {{2, 12}, {6, 12}}};
    case '2': return {{{0, 2}, {1.5, 0.3}, {4, 0}, {6.5, 0.3}, {8, 2.5}, {7.5, 4.5}, {0, 12}, {8, 12}}};
    case '3': return {{{0, 1}, {2, 0}, {6, 0}, {8, 1.5}, {8, 4.5}, {6, 6}, {3, 6}},
                      {{6, 6}, {8, 7.5}, {8, 10.5}, {6, 12}, {2, 12}, {0, 11}}};
    case '4': return {{{6, 12}, {6, 0}, {0, 8.5}, {8, 8.5}}};
    case '5': return {{{8, 0}, {1, 0}, {0, 5.5}, {2, 5}, {6, 5}, {8, 6.5}, {8, 10.5}, {6, 12}, {2, 12}, {0, 10.5}}};
    case '6': return {{{7.5, 1}, {5.5, 0}, {3, 0}, {1, 1.2}, {0, 4}, {0, 9}, {1, 11.3}, {3, 12}, {5.5, 12},
                       {7.5, 11}, {8, 9}, {7.5, 7}, {5.5, 6}, {3, 6}, {1, 7}, {0, 8.5}}};
    case '7': return {{{0, 0}, {8, 0}, {3, 12}}};
    case '8': return {{{4, 6}, {1.5, 5}, {0.5, 3}, {1.5, 0.8}, {4, 0}, {6.5, 0.8}, {7.5, 3}, {6.5, 5}, {4, 6},
                       {1, 7.2}, {0, 9}, {1, 11.2}, {4, 12}, {7, 11.2}, {8, 9}, {7, 7.2}, {4, 6}}};
    case '9': return {{{0.5, 11}, {2.5, 12}, {5, 12}, {7, 10.8}, {8, 8}, {8, 3}, {7, 0.7}, {5, 0}, {2.5, 0},
                       {0.5, 1}, {0, 3}, {0.5, 5}, {2.5, 6}, {5, 6}, {7, 5}, {8, 3.5}}};
    case '+': return {{{4, 3}, {4, 11}}, {{0, 7}, {8, 7}}};
    case '-': return {{{1, 7}, {7, 7}}};
    case 'x': return {{{1, 5}, {7, 12}}, {{7, 5}, {1, 12}}};
    case '.': return {{{3.6, 11.6}, {4.4, 11.6}}};
    case '/': return {{{7, 0}, {1, 12}}};
    case '(': return {{{5, 0}, {3, 2.5}, {2.5, 6}, {3, 9.5}, {5, 12}}};
    case ')': return {{{3, 0}, {5, 2.5}, {5.5, 6}, {5, 9.5}, {3, 12}}};
    default: return {};
  }
}

}  // namespace detail

/// Strokes for `c`; empty for spaces and unsupported characters. Lowercase
/// letters other than 'x' use the capital forms.
inline Glyph glyph(char c) {
  if (c >= 'A' && c <= 'Z') return detail::letter(c);
  if (c >= 'a' && c <= 'z' && c != 'x') return detail::letter(static_cast<char>(c - 'a' + 'A'));
  return detail::other(c);
}

inline bool supported(char c) { return c == ' ' || !glyph(c).empty(); }

/// Width of `text` in grid units.
inline double text_width(std::string_view text) {
  return text.empty() ? 0.0 : kAdvance * static_cast<double>(text.size()) - (kAdvance - 8.0);
}

/// Polylines for `text` centred on `center`, with cap height `size`.
inline std::vector<Stroke> layout_text(std::string_view text, Vec2 center, double size) {
  const double s = size / kGridHeight;
  const Vec2 origin = center - Vec2{text_width(text) * s / 2.0, size / 2.0};
  std::vector<Stroke> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    for (const auto& stroke : glyph(text[i])) {
      Stroke placed;
      for (const auto& p : stroke) placed.push_back(origin + Vec2{p.x + kAdvance * static_cast<double>(i), p.y} * s);
      out.push_back(std::move(placed));
    }
  }
  return out;
}

}  // namespace geosynth::font
