#include "regsynth/geometry.hpp"
#include "regsynth/parallel.hpp"

namespace regsynth {

LabelMap voronoi_partition(std::span<const Point2> points, ImageBounds bounds) {
  LabelMap map{bounds.width, bounds.height, std::vector<std::int32_t>(bounds.pixel_count(), -1)};
  if (points.empty()) return map;
  const NearestPointIndex index(points);
  parallel_for(static_cast<std::size_t>(bounds.height), [&](std::size_t y) {
    for (int x = 0; x < bounds.width; ++x) {
      const auto k = index.nearest({static_cast<double>(x), static_cast<double>(y)});
      map.labels[y * bounds.width + x] = static_cast<std::int32_t>(*k);
    }
  });
  return map;
}

LabelMap voronoi_partition(const CentroidSet& centroids) {
  return voronoi_partition(centroids.points(), centroids.bounds());
}

}  // namespace regsynth
