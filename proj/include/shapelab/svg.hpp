#pragma once

#include <string>
#include <utility>
#include <vector>

namespace shapelab {

struct SvgSeries {
  std::vector<std::pair<double, double>> points;  // (x, y), both > 0
  std::string label;
};

struct SvgGuide {
  double slope;        // reference slope in log-log space
  std::string label;
};

// Self-contained SVG 1.1 log-log scatter with a least-squares line per series
// and dashed reference-slope guides. Byte-deterministic for fixed input.
std::string emit_svg(const std::vector<SvgSeries>& series,
                     const std::vector<SvgGuide>& guides);

}  // namespace shapelab
