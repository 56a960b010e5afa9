#include "shapelab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "shapelab/error.hpp"

namespace shapelab {

namespace {

const char* kPalette[] = {"#1b6ca8", "#c2481f", "#3a7d44",
                          "#7b4fa6", "#b08900", "#555555"};
constexpr int kPaletteSize = 6;

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 64.0, kRight = 24.0, kTop = 24.0, kBottom = 48.0;

std::string fixed2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct LogRange {
  double lo, hi;
  double map(double logv, double a, double b) const {
    if (hi == lo) return 0.5 * (a + b);
    return a + (logv - lo) / (hi - lo) * (b - a);
  }
};

}  // namespace

std::string emit_svg(const std::vector<SvgSeries>& series,
                     const std::vector<SvgGuide>& guides) {
  double lx0 = 0.0, lx1 = 0.0, ly0 = 0.0, ly1 = 0.0;
  bool any = false;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0))
        throw ValidationError("log-log plot needs strictly positive data");
      const double lx = std::log10(x), ly = std::log10(y);
      if (!any) {
        lx0 = lx1 = lx;
        ly0 = ly1 = ly;
        any = true;
      } else {
        lx0 = std::min(lx0, lx);
        lx1 = std::max(lx1, lx);
        ly0 = std::min(ly0, ly);
        ly1 = std::max(ly1, ly);
      }
    }
  if (!any) throw ValidationError("nothing to plot");
  const double padx = 0.05 * std::max(lx1 - lx0, 0.5);
  const double pady = 0.05 * std::max(ly1 - ly0, 0.5);
  const LogRange rx{lx0 - padx, lx1 + padx};
  const LogRange ry{ly0 - pady, ly1 + pady};

  auto px = [&](double lx) { return rx.map(lx, kLeft, kWidth - kRight); };
  auto py = [&](double ly) { return ry.map(ly, kHeight - kBottom, kTop); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << int(kWidth)
     << "\" height=\"" << int(kHeight) << "\" viewBox=\"0 0 " << int(kWidth)
     << " " << int(kHeight) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << int(kWidth) << "\" height=\""
     << int(kHeight) << "\" fill=\"#ffffff\"/>\n";

  // decade grid lines and tick labels
  for (int e = int(std::floor(rx.lo)); e <= int(std::ceil(rx.hi)); ++e) {
    if (e < rx.lo || e > rx.hi) continue;
    const double x = px(double(e));
    os << "<line x1=\"" << fixed2(x) << "\" y1=\"" << fixed2(kTop)
       << "\" x2=\"" << fixed2(x) << "\" y2=\"" << fixed2(kHeight - kBottom)
       << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << fixed2(x) << "\" y=\"" << fixed2(kHeight - 28.0)
       << "\" font-family=\"monospace\" font-size=\"12\" fill=\"#333333\" "
          "text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = int(std::floor(ry.lo)); e <= int(std::ceil(ry.hi)); ++e) {
    if (e < ry.lo || e > ry.hi) continue;
    const double y = py(double(e));
    os << "<line x1=\"" << fixed2(kLeft) << "\" y1=\"" << fixed2(y)
       << "\" x2=\"" << fixed2(kWidth - kRight) << "\" y2=\"" << fixed2(y)
       << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << fixed2(kLeft - 6.0) << "\" y=\"" << fixed2(y + 4.0)
       << "\" font-family=\"monospace\" font-size=\"12\" fill=\"#333333\" "
          "text-anchor=\"end\">1e" << e << "</text>\n";
  }
  os << "<rect x=\"" << fixed2(kLeft) << "\" y=\"" << fixed2(kTop)
     << "\" width=\"" << fixed2(kWidth - kLeft - kRight) << "\" height=\""
     << fixed2(kHeight - kTop - kBottom)
     << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // centroid of all points in log space anchors the reference guides
  double cx = 0.0, cy = 0.0;
  int total = 0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      cx += std::log10(x);
      cy += std::log10(y);
      ++total;
    }
  cx /= total;
  cy /= total;

  for (std::size_t gi = 0; gi < guides.size(); ++gi) {
    const auto& g = guides[gi];
    const double la = rx.lo, lb = rx.hi;
    const double ya = cy + g.slope * (la - cx), yb = cy + g.slope * (lb - cx);
    os << "<line x1=\"" << fixed2(px(la)) << "\" y1=\"" << fixed2(py(ya))
       << "\" x2=\"" << fixed2(px(lb)) << "\" y2=\"" << fixed2(py(yb))
       << "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"6,4\""
          "/>\n";
    os << "<text x=\"" << fixed2(kWidth - kRight - 6.0) << "\" y=\""
       << fixed2(py(yb) - 6.0)
       << "\" font-family=\"monospace\" font-size=\"12\" fill=\"#888888\" "
          "text-anchor=\"end\">" << escape_xml(g.label) << "</text>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % kPaletteSize];

    // least-squares line in log-log coordinates
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : s.points) {
      const double lx = std::log10(x), ly = std::log10(y);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double np = double(s.points.size());
    const double det = np * sxx - sx * sx;
    if (s.points.size() >= 2 && det > 0.0) {
      const double slope = (np * sxy - sx * sy) / det;
      const double inter = (sy - slope * sx) / np;
      const double la = rx.lo, lb = rx.hi;
      os << "<line x1=\"" << fixed2(px(la)) << "\" y1=\""
         << fixed2(py(inter + slope * la)) << "\" x2=\"" << fixed2(px(lb))
         << "\" y2=\"" << fixed2(py(inter + slope * lb)) << "\" stroke=\""
         << color << "\" stroke-width=\"1\"/>\n";
    }

    for (const auto& [x, y] : s.points) {
      os << "<circle cx=\"" << fixed2(px(std::log10(x))) << "\" cy=\""
         << fixed2(py(std::log10(y))) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
    }
    os << "<text x=\"" << fixed2(kLeft + 8.0) << "\" y=\""
       << fixed2(kTop + 16.0 + 14.0 * double(si)) << "\" font-family=\""
          "monospace\" font-size=\"12\" fill=\"" << color << "\">"
       << escape_xml(s.label) << "</text>\n";
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace shapelab
