#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "regsynth/error.hpp"
#include "regsynth/raster.hpp"

namespace regsynth {

RasterImage::RasterImage(int width, int height, Rgb fill, bool valid)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    fail("invalid_bounds", "image dimensions must be positive", {{"width", width}, {"height", height}});
  }
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  data_.resize(n * 3);
  for (std::size_t k = 0; k < n; ++k) {
    data_[3 * k] = fill[0];
    data_[3 * k + 1] = fill[1];
    data_[3 * k + 2] = fill[2];
  }
  mask_.assign(n, valid ? 1 : 0);
}

std::size_t RasterImage::hole_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 0));
}

double PatchDistance::operator()(const RasterImage& image, const Point2& p, const Point2& q) const {
  const int px = static_cast<int>(std::lround(p.x));
  const int py = static_cast<int>(std::lround(p.y));
  const int qx = static_cast<int>(std::lround(q.x));
  const int qy = static_cast<int>(std::lround(q.y));
  long sum = 0;
  long count = 0;
  for (int v = -window; v <= window; ++v) {
    for (int u = -window; u <= window; ++u) {
      const int ax = px + u, ay = py + v, bx = qx + u, by = qy + v;
      if (!image.in_frame(ax, ay) || !image.in_frame(bx, by)) continue;
      if (!image.valid(ax, ay) || !image.valid(bx, by)) continue;
      const Rgb a = image.at(ax, ay);
      const Rgb b = image.at(bx, by);
      for (int c = 0; c < 3; ++c) sum += std::abs(static_cast<int>(a[c]) - static_cast<int>(b[c]));
      ++count;
    }
  }
  if (count == 0) return 1.0;
  return static_cast<double>(sum) / (static_cast<double>(count) * 3.0 * 255.0);
}

int default_patch_window(std::span<const Point2> points) {
  if (points.size() < 2) return 1;
  std::vector<double> nearest(points.size(), std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      const double d = squared_distance(points[a], points[b]);
      nearest[a] = std::min(nearest[a], d);
      nearest[b] = std::min(nearest[b], d);
    }
  }
  const auto mid = nearest.begin() + static_cast<std::ptrdiff_t>(nearest.size() / 2);
  std::nth_element(nearest.begin(), mid, nearest.end());
  return std::max(1, static_cast<int>(std::floor(std::sqrt(*mid) / 2.0)));
}

}  // namespace regsynth
