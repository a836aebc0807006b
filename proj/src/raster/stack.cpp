#include <algorithm>
#include <cmath>
#include <numeric>

#include "regsynth/error.hpp"
#include "regsynth/parallel.hpp"
#include "regsynth/raster.hpp"

namespace regsynth {

RasterImage AggregationStack::materialize(std::size_t layer) const {
  RasterImage out(base.width(), base.height(), {0, 0, 0}, false);
  for (int y = 0; y < base.height(); ++y) {
    for (int x = 0; x < base.width(); ++x) {
      if (const auto v = sample(layer, x, y)) {
        out.set(x, y, *v);
        out.set_valid(x, y, true);
      }
    }
  }
  return out;
}

AggregationStack build_stack(const RasterImage& image, std::span<const DrawCommand> draws,
                             std::size_t target_index, const LabelMap* labels) {
  if (draws.size() < 2) fail("no_source_objects", "no source objects");
  if (target_index >= draws.size()) {
    fail("invalid_target", "target draw index out of range",
         {{"target", target_index}, {"draws", draws.size()}});
  }

  LabelMap computed;
  if (labels == nullptr) {
    std::vector<Point2> positions;
    positions.reserve(draws.size());
    for (const DrawCommand& d : draws) positions.push_back(d.position);
    computed = voronoi_partition(positions, image.bounds());
    labels = &computed;
  }

  AggregationStack stack;
  stack.base = image;
  stack.target = draws[target_index].position;
  stack.target_index = target_index;
  stack.cell.assign(image.bounds().pixel_count(), 0);
  bool touches_hole = false;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (labels->at(x, y) != static_cast<std::int32_t>(target_index)) continue;
      stack.cell[static_cast<std::size_t>(y) * image.width() + x] = 1;
      touches_hole = touches_hole || !image.valid(x, y);
    }
  }
  if (!touches_hole) {
    fail("target_without_holes", "target object's cell contains no hole pixels",
         {{"target", target_index}});
  }

  std::vector<std::size_t> sources;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    if (k != target_index) sources.push_back(k);
  }
  std::stable_sort(sources.begin(), sources.end(), [&](std::size_t a, std::size_t b) {
    return draws[a].index < draws[b].index;
  });
  for (std::size_t k : sources) {
    const Point2& s = draws[k].position;
    stack.layers.push_back({k, static_cast<int>(std::lround(stack.target.x - s.x)),
                            static_cast<int>(std::lround(stack.target.y - s.y))});
  }
  return stack;
}

AggregationStack attribute_filter(const AggregationStack& stack,
                                  std::span<const DrawCommand> draws, int target_attribute) {
  AggregationStack out = stack;
  out.layers.clear();
  for (const StackLayer& l : stack.layers) {
    if (draws[l.source].attribute == target_attribute) out.layers.push_back(l);
  }
  if (out.layers.empty()) {
    fail("no_same_attribute_sources", "no same-attribute sources",
         {{"target", stack.target_index}, {"attribute", target_attribute}});
  }
  return out;
}

}  // namespace regsynth
