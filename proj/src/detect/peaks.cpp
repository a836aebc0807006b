#include <algorithm>
#include <cmath>

#include "regsynth/detect.hpp"

namespace regsynth {
namespace {

// Vertex offset of the parabola through (-1, l), (0, c), (1, r).
double parabolic_offset(double l, double c, double r) {
  const double denom = l - 2.0 * c + r;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (l - r) / denom, -0.5, 0.5);
}

}  // namespace

PeakMap extract_peaks(std::span<const float> response, int width, int height, int radius,
                      double threshold) {
  PeakMap out;
  if (width <= 0 || height <= 0) return out;
  radius = std::max(radius, 1);
  auto at = [&](int x, int y) { return response[static_cast<std::size_t>(y) * width + x]; };

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const float v = at(x, y);
      if (!(v > threshold)) continue;
      const long self = static_cast<long>(y) * width + x;
      bool is_max = true;
      for (int dy = -radius; dy <= radius && is_max; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= height) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
          if ((dx == 0 && dy == 0) || dx * dx + dy * dy > radius * radius) continue;
          const int xx = x + dx;
          if (xx < 0 || xx >= width) continue;
          const float w = at(xx, yy);
          const long other = static_cast<long>(yy) * width + xx;
          // (value, -index) order: equal values go to the earlier pixel.
          if (w > v || (w == v && other < self)) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      Peak p{static_cast<double>(x), static_cast<double>(y), static_cast<double>(v)};
      if (x > 0 && x + 1 < width) p.x += parabolic_offset(at(x - 1, y), v, at(x + 1, y));
      if (y > 0 && y + 1 < height) p.y += parabolic_offset(at(x, y - 1), v, at(x, y + 1));
      out.peaks.push_back(p);
    }
  }
  std::stable_sort(out.peaks.begin(), out.peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.strength > b.strength; });
  return out;
}

}  // namespace regsynth
