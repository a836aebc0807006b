#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "regsynth/interchange.hpp"

namespace regsynth {
namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::fixed << v;
  std::string s = ss.str();
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

Point2 position_of(const RegularityProgram& p, const LatticeIndex& q) {
  return {static_cast<double>(p.x_expr.evaluate(q)), static_cast<double>(p.y_expr.evaluate(q))};
}

}  // namespace

std::string render_svg(const RegularityProgram& program, ImageBounds bounds,
                       const CentroidSet* detected) {
  const auto draws = execute(program, bounds);
  const double r = std::max(1.5, 0.15 * std::min(std::abs(program.x_expr.coef_i),
                                                 std::abs(program.y_expr.coef_j)));
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << bounds.width << "\" height=\""
      << bounds.height << "\" viewBox=\"0 0 " << bounds.width << ' ' << bounds.height << "\">\n";
  svg << "<style>.hull{fill:none;stroke:#444;stroke-width:1;stroke-dasharray:4 2}"
         ".row{fill:none;stroke:#999;stroke-width:0.75}"
         ".detected{fill:none;stroke:#000;stroke-width:1}</style>\n";

  if (!draws.empty()) {
    std::vector<LatticeIndex> indices;
    for (const DrawCommand& d : draws) indices.push_back(d.index);
    const ConvexHull hull = convex_hull(indices);
    svg << "<polygon class=\"hull\" points=\"";
    for (std::size_t k = 0; k < hull.vertices.size(); ++k) {
      const Point2 p = position_of(program, hull.vertices[k]);
      svg << (k ? " " : "") << num(p.x) << ',' << num(p.y);
    }
    svg << "\"/>\n";

    std::map<int, std::vector<Point2>> rows;
    for (const DrawCommand& d : draws) rows[d.index.j].push_back(d.position);
    for (const auto& [j, pts] : rows) {
      if (pts.size() < 2) continue;
      svg << "<polyline class=\"row\" data-j=\"" << j << "\" points=\"";
      for (std::size_t k = 0; k < pts.size(); ++k) {
        svg << (k ? " " : "") << num(pts[k].x) << ',' << num(pts[k].y);
      }
      svg << "\"/>\n";
    }
  }
  for (const DrawCommand& d : draws) {
    svg << "<circle class=\"draw\" cx=\"" << num(d.position.x) << "\" cy=\"" << num(d.position.y)
        << "\" r=\"" << num(r) << "\" data-i=\"" << d.index.i << "\" data-j=\"" << d.index.j
        << "\" data-attribute=\"" << d.attribute << "\" fill=\""
        << kPalette[static_cast<std::size_t>(d.attribute) % kPalette.size()] << "\"/>\n";
  }
  if (detected != nullptr) {
    for (const Point2& p : detected->points()) {
      svg << "<circle class=\"detected\" cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\""
          << num(r * 1.6) << "\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace regsynth
