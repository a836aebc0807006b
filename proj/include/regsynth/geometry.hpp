#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace regsynth {

/// Pixel-space point. Integer values address pixel centers.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double squared_distance(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct ImageBounds {
  int width = 0;
  int height = 0;

  bool contains(const Point2& p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.x < width && p.y < height;
  }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  friend bool operator==(const ImageBounds&, const ImageBounds&) = default;
};

/// Loop-variable pair of a regularity program.
struct LatticeIndex {
  int i = 0;
  int j = 0;

  friend auto operator<=>(const LatticeIndex&, const LatticeIndex&) = default;
};

/// Object centroids detected in (or reconstructed for) an image, with
/// optional per-point appearance descriptors.
class CentroidSet {
 public:
  /// Validates the invariants: finite coordinates, every point inside the
  /// bounds, no two points closer than one pixel, descriptors either empty
  /// or one per point.
  CentroidSet(std::vector<Point2> points, ImageBounds bounds,
              std::vector<std::vector<double>> descriptors = {});

  const std::vector<Point2>& points() const { return points_; }
  const std::vector<std::vector<double>>& descriptors() const { return descriptors_; }
  ImageBounds bounds() const { return bounds_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point2& operator[](std::size_t k) const { return points_[k]; }

 private:
  std::vector<Point2> points_;
  std::vector<std::vector<double>> descriptors_;
  ImageBounds bounds_;
};

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (left, right), sorted by left
  double cost = 0.0;                                       // total squared distance
};

/// Exact minimum-cost one-to-one matching of min(|left|, |right|) pairs under
/// squared Euclidean distance. Throws "empty_point_set" on empty input.
Assignment min_cost_assignment(std::span<const Point2> left, std::span<const Point2> right);

/// Dense rectangular assignment over an explicit cost matrix (rows x cols,
/// row-major). Returns, for each row, its column (or -1 when rows > cols).
std::vector<long> solve_assignment(std::span<const double> costs, std::size_t rows,
                                   std::size_t cols);

/// Integer half-plane a*i + b*j + c >= 0 with gcd(a, b, c) = 1.
struct HullEdge {
  long a = 0;
  long b = 0;
  long c = 0;

  long evaluate(const LatticeIndex& p) const { return a * p.i + b * p.j + c; }
  bool axis_aligned() const { return a == 0 || b == 0; }
  friend auto operator<=>(const HullEdge&, const HullEdge&) = default;
};

struct ConvexHull {
  std::vector<LatticeIndex> vertices;  // counter-clockwise in the (i, j) plane
  std::vector<HullEdge> edges;         // all oriented inward
  bool degenerate = false;             // single point or collinear input

  bool contains(const LatticeIndex& p) const;
};

/// Convex hull of integer points. Collinear boundary points are dropped.
/// Degenerate inputs keep the containing point/segment as vertices and
/// describe it with edges whose integer solutions are exactly that set.
ConvexHull convex_hull(std::span<const LatticeIndex> points);

/// Row-major map of nearest-centroid indices.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;

  std::int32_t at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
};

/// Nearest-centroid queries backed by a uniform grid. Distances are squared
/// Euclidean; ties resolve to the lowest index.
class NearestPointIndex {
 public:
  explicit NearestPointIndex(std::span<const Point2> points);

  /// Returns the index of the nearest point, or nullopt when empty.
  std::optional<std::size_t> nearest(const Point2& query) const;

  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Point2> points_;
  double min_x_ = 0.0;
  double min_y_ = 0.0;
  double cell_ = 1.0;
  int cols_ = 1;
  int rows_ = 1;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

/// Assigns every pixel of the centroid bounds to its nearest centroid.
LabelMap voronoi_partition(const CentroidSet& centroids);

/// Same partition for an arbitrary point list (duplicates allowed; the lower
/// index wins every tie).
LabelMap voronoi_partition(std::span<const Point2> points, ImageBounds bounds);

}  // namespace regsynth
