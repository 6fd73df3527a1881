#pragma once

// Default shape corpus: construction programs per task and curriculum stage.

#include <array>
#include <string_view>

namespace geosynth::corpus {

struct Shape {
  std::string_view task;
  int stage;
  std::string_view source;
};

inline constexpr std::array<Shape, 54> kShapes{{
    {"POL", 1, "A B C = triangle A B C; D = midpoint B C"},
    {"POL", 1, "A B C = triangle A B C; D = midpoint B C; O = circle O A B C"},
    {"POL", 2, "A B C = triangle A B C; D = midpoint A B; E = midpoint A C"},
    {"POL", 2, "A B C = triangle A B C; D = midpoint A B; E = midpoint A C; O = circle O A B C"},
    {"POL", 3, "A B C = triangle A B C; D = midpoint B C; E = midpoint A C; F = intersection_ll A D B E"},
    {"POL", 3, "A B C = triangle A B C; D = midpoint B C; E = midpoint A C; F = intersection_ll A D B E; O = circle O A B C"},
    {"POC", 1, "A B = segment A B; C = on_circle C A B"},
    {"POC", 1, "A B = segment A B; C = on_circle C A B; D = on_circle D A B"},
    {"POC", 1, "A B = segment A B; C = on_circle C A B; D = on_circle D A B; E = on_circle E A B"},
    {"POC", 1, "A B = segment A B; C = on_circle C A B; D = on_circle D A B; E = on_circle E A B; F = on_circle F A B"},
    {"POC", 1, "A B = segment A B; C = on_circle C A B; D = on_circle D A B; E = on_circle E A B; F = on_circle F A B; G = on_circle G A B"},
    {"POC", 2, "A B = segment A B; C = on_circle C A B; D = midpoint A B"},
    {"POC", 2, "A B = segment A B; C = on_circle C A B; D = midpoint A B"},
    {"POC", 2, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = on_circle E A B"},
    {"POC", 2, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = on_circle E A B; F = on_circle F A B"},
    {"POC", 2, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = on_circle E A B; F = on_circle F A B; G = on_circle G A B"},
    {"POC", 2, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = on_circle E A B; F = on_circle F A B; G = on_circle G A B; H = on_circle H A B"},
    {"POC", 3, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = midpoint A C"},
    {"POC", 3, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = midpoint A C; F = on_circle F A B"},
    {"POC", 3, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = midpoint A C; F = on_circle F A B; G = on_circle G A B"},
    {"POC", 3, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = midpoint A C; F = on_circle F A B; G = on_circle G A B; H = on_circle H A B"},
    {"POC", 3, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = midpoint A C; F = on_circle F A B; G = on_circle G A B; H = on_circle H A B; I = on_circle I A B"},
    {"POC", 3, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = on_circle E A B; F = on_circle F A B; G = on_circle G A B; H = on_circle H A B; I = midpoint B C"},
    {"POC", 3, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = midpoint B C"},
    {"POC", 3, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = lc_tangent E C A"},
    {"POC", 3, "A B = segment A B; C = on_circle C A B; D = midpoint A B; E = on_circle E A B; F = on_circle F A B; G = on_circle G A B; H = lc_tangent H C A"},
    {"ALC", 1, "A B C = triangle A B C"},
    {"ALC", 3, "A B C = triangle A B C; D = midpoint B C"},
    {"ALC", 3, "A B C = triangle A B C; D = midpoint B C; E = midpoint A C; F = intersection_ll F A D B E"},
    {"LHC", 1, "A B C = triangle A B C"},
    {"LHC", 2, "A B C = triangle A B C; D = midpoint B C"},
    {"LHC", 3, "A B C = triangle A B C; D = midpoint A B; E = midpoint A C"},
    {"PRA", 1, "A B C = triangle A B C; D = midpoint A B; E = midpoint A C"},
    {"PRA", 1, "A B C = triangle A B C; D = midpoint A B; E = midpoint A C"},
    {"PRA", 1, "A B C = triangle A B C; D = midpoint A B; E = midpoint A C"},
    {"PRA", 2, "A B C = triangle A B C; D = parallelogram A B C D"},
    {"PRA", 3, "A B C = triangle A B C; D = midpoint A B; E = midpoint A C; F = midpoint B C"},
    {"PEP", 1, "A B C = triangle A B C; D = foot A B C"},
    {"PEP", 1, "A B C = r_triangle A B C"},
    {"PEP", 1, "A B = segment A B; C = eq_triangle C A B; D = eq_triangle D A B; E = on_circle E A B"},
    {"PEP", 2, "A B C = triangle A B C; D = foot A B C; E = foot C A B"},
    {"PEP", 2, "A B C = r_triangle A B C; D = foot A B C"},
    {"PEP", 2, "A B C = triangle A B C; O = circle A B C; D = foot O A B; E = foot O C A"},
    {"PEP", 3, "A B C D = rectangle A B C D; E = intersection_ll A C B D"},
    {"PEP", 3, "A B C = triangle A B C; O = incenter A B C; D = foot O A C; E = foot O B C; F = foot O A B"},
    {"PEP", 3, "A B C = r_triangle A B C; D = foot A B C; E = foot D A B"},
    {"PEP", 3, "A B C = triangle A B C; D = foot A B C; E = foot C A B; F = foot B A C"},
    {"EQL", 1, "A B C = triangle A B C; D = midpoint C B"},
    {"EQL", 1, "A B C = triangle A B C; D = midpoint C B; O = circle O A B C"},
    {"EQL", 1, "A B C = triangle A B C; D = angle_bisector B A C, on_line D C B"},
    {"EQL", 2, "A B C = triangle A B C; D = midpoint A B; E = midpoint A C"},
    {"EQL", 2, "A B C = triangle A B C; D = midpoint A B; E = midpoint A C; O = circle O A B C"},
    {"EQL", 2, "A B C = triangle A B C; D = midpoint A B; E = midpoint A C"},
    {"EQL", 3, "A B C = triangle A B C; O = circle A B C; D = on_circle D O C, angle_bisector C A B"},
}};

}  // namespace geosynth::corpus
