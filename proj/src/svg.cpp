#include "loewner/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_svg(std::ostream& os, const std::vector<SvgCurve>& curves,
               int pixel_size, double margin_fraction) {
  if (pixel_size < 16) {
    throw Error("invalid_config", "viewport too small");
  }
  double x_min = std::numeric_limits<double>::max();
  double x_max = std::numeric_limits<double>::lowest();
  double y_min = x_min;
  double y_max = x_max;
  bool any = false;
  for (const SvgCurve& curve : curves) {
    for (const auto& [x, y] : curve.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
      any = true;
    }
  }
  if (!any) {
    x_min = y_min = -1.0;
    x_max = y_max = 1.0;
  }
  const double span =
      std::max({x_max - x_min, y_max - y_min, 1e-12});
  const double margin = margin_fraction * span;
  const double scale = pixel_size / (span + 2.0 * margin);
  const double x0 = 0.5 * (x_min + x_max) - 0.5 * (span + 2.0 * margin);
  const double y1 = 0.5 * (y_min + y_max) + 0.5 * (span + 2.0 * margin);

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixel_size
     << "\" height=\"" << pixel_size << "\" viewBox=\"0 0 " << pixel_size
     << ' ' << pixel_size << "\">\n";
  os << "<rect width=\"" << pixel_size << "\" height=\"" << pixel_size
     << "\" fill=\"white\"/>\n";
  for (const SvgCurve& curve : curves) {
    if (curve.points.size() < 2) continue;
    os << (curve.closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\""
       << curve.stroke << "\" stroke-width=\"" << fmt(curve.stroke_width)
       << "\" points=\"";
    for (size_t i = 0; i < curve.points.size(); ++i) {
      const double px = (curve.points[i].first - x0) * scale;
      const double py = (y1 - curve.points[i].second) * scale;
      if (i > 0) os << ' ';
      os << fmt(px) << ',' << fmt(py);
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace loewner
