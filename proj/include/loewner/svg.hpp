#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace loewner {

struct SvgCurve {
  std::vector<std::pair<double, double>> points;
  std::string stroke = "#202020";
  double stroke_width = 1.0;
  bool closed = false;
};

// Self-contained SVG with the curves auto-scaled (preserving aspect ratio)
// into a square viewport, y pointing up.  Output is deterministic: fixed
// formatting, no timestamps.
void write_svg(std::ostream& os, const std::vector<SvgCurve>& curves,
               int pixel_size = 640, double margin_fraction = 0.06);

}  // namespace loewner
