#include "regsynth/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "regsynth/error.hpp"

namespace regsynth {

CentroidSet::CentroidSet(std::vector<Point2> points, ImageBounds bounds,
                         std::vector<std::vector<double>> descriptors)
    : points_(std::move(points)), descriptors_(std::move(descriptors)), bounds_(bounds) {
  if (bounds_.width <= 0 || bounds_.height <= 0) {
    fail("invalid_bounds", "image bounds must be positive",
         {{"width", bounds_.width}, {"height", bounds_.height}});
  }
  if (!descriptors_.empty() && descriptors_.size() != points_.size()) {
    fail("invalid_centroids", "descriptor count does not match point count",
         {{"points", points_.size()}, {"descriptors", descriptors_.size()}});
  }
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const Point2& p = points_[k];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !bounds_.contains(p)) {
      fail("invalid_centroids", "centroid outside image bounds",
           {{"index", k}, {"x", p.x}, {"y", p.y}});
    }
  }

  // Sweep along x; any pair closer than one pixel must also be within one
  // pixel in x.
  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points_[a].x < points_[b].x || (points_[a].x == points_[b].x && a < b);
  });
  for (std::size_t s = 0; s < order.size(); ++s) {
    const Point2& p = points_[order[s]];
    for (std::size_t t = s + 1; t < order.size(); ++t) {
      const Point2& q = points_[order[t]];
      if (q.x - p.x >= 1.0) break;
      if (squared_distance(p, q) < 1.0) {
        fail("duplicate_centroids", "two centroids are closer than one pixel",
             {{"first", std::min(order[s], order[t])}, {"second", std::max(order[s], order[t])}});
      }
    }
  }
}

NearestPointIndex::NearestPointIndex(std::span<const Point2> points)
    : points_(points.begin(), points.end()) {
  if (points_.empty()) return;
  double max_x = points_[0].x;
  double max_y = points_[0].y;
  min_x_ = points_[0].x;
  min_y_ = points_[0].y;
  for (const Point2& p : points_) {
    min_x_ = std::min(min_x_, p.x);
    min_y_ = std::min(min_y_, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double span_x = std::max(1.0, max_x - min_x_);
  const double span_y = std::max(1.0, max_y - min_y_);
  cell_ = std::max(1.0, std::sqrt(span_x * span_y / static_cast<double>(points_.size())));
  cols_ = static_cast<int>(span_x / cell_) + 1;
  rows_ = static_cast<int>(span_y / cell_) + 1;
  buckets_.resize(static_cast<std::size_t>(cols_) * rows_);
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const int cx = std::clamp(static_cast<int>((points_[k].x - min_x_) / cell_), 0, cols_ - 1);
    const int cy = std::clamp(static_cast<int>((points_[k].y - min_y_) / cell_), 0, rows_ - 1);
    buckets_[static_cast<std::size_t>(cy) * cols_ + cx].push_back(static_cast<std::uint32_t>(k));
  }
}

std::optional<std::size_t> NearestPointIndex::nearest(const Point2& query) const {
  if (points_.empty()) return std::nullopt;
  const int qx = static_cast<int>(std::floor((query.x - min_x_) / cell_));
  const int qy = static_cast<int>(std::floor((query.y - min_y_) / cell_));
  const int cx = std::clamp(qx, 0, cols_ - 1);
  const int cy = std::clamp(qy, 0, rows_ - 1);

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  const auto visit = [&](int x, int y) {
    for (std::uint32_t k : buckets_[static_cast<std::size_t>(y) * cols_ + x]) {
      const double d = squared_distance(points_[k], query);
      if (d < best || (d == best && k < best_index)) {
        best = d;
        best_index = k;
      }
    }
  };

  const int max_ring = std::max(cols_, rows_);
  for (int r = 0; r <= max_ring; ++r) {
    const int x0 = cx - r, x1 = cx + r, y0 = cy - r, y1 = cy + r;
    for (int x = std::max(x0, 0); x <= std::min(x1, cols_ - 1); ++x) {
      if (y0 >= 0) visit(x, y0);
      if (y1 < rows_ && y1 != y0) visit(x, y1);
    }
    for (int y = std::max(y0 + 1, 0); y <= std::min(y1 - 1, rows_ - 1); ++y) {
      if (x0 >= 0) visit(x0, y);
      if (x1 < cols_ && x1 != x0) visit(x1, y);
    }
    // Every unvisited cell lies outside the box of rings 0..r; a side that
    // touches the grid edge has nothing beyond it.
    double bound = std::numeric_limits<double>::infinity();
    if (x0 > 0) bound = std::min(bound, query.x - (min_x_ + x0 * cell_));
    if (x1 < cols_ - 1) bound = std::min(bound, min_x_ + (x1 + 1) * cell_ - query.x);
    if (y0 > 0) bound = std::min(bound, query.y - (min_y_ + y0 * cell_));
    if (y1 < rows_ - 1) bound = std::min(bound, min_y_ + (y1 + 1) * cell_ - query.y);
    if (bound == std::numeric_limits<double>::infinity()) break;
    if (bound > 0.0 && bound * bound > best) break;
  }
  return best_index;
}

}  // namespace regsynth
