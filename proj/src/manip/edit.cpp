#include <algorithm>
#include <cmath>

#include "regsynth/error.hpp"
#include "regsynth/manip.hpp"

namespace regsynth {

EditResult edit_regularity(const RasterImage& image, const RegularityProgram& program,
                           const CentroidSet& detected, double gain,
                           const CompositeConfig& config) {
  program.validate();
  if (!std::isfinite(gain)) fail("invalid_gain", "gain must be finite", {{"gain", gain}});
  if (detected.bounds() != image.bounds()) {
    fail("image_size_mismatch", "centroid bounds differ from the image size",
         {{"image", {image.width(), image.height()}},
          {"centroids", {detected.bounds().width, detected.bounds().height}}});
  }
  std::vector<DrawCommand> draws = execute(program, image.bounds());
  if (draws.empty()) fail("no_draws", "program draws nothing inside the image");
  if (detected.empty()) fail("empty_point_set", "empty point set");

  std::vector<Point2> ideal_positions;
  for (const DrawCommand& d : draws) ideal_positions.push_back(d.position);
  const Assignment match = min_cost_assignment(detected.points(), ideal_positions);

  const std::size_t n = detected.size();
  EditResult result;
  result.positions.assign(n, std::nullopt);
  result.ideal.assign(n, std::nullopt);
  std::vector<int> sx(n, 0);
  std::vector<int> sy(n, 0);
  std::vector<long> draw_of(n, -1);
  for (const auto& [c, d] : match.pairs) {
    const Point2 seen = detected[c];
    const Point2 ideal = draws[d].position;
    const double tx = ideal.x + gain * (seen.x - ideal.x);
    const double ty = ideal.y + gain * (seen.y - ideal.y);
    sx[c] = static_cast<int>(std::lround(tx - seen.x));
    sy[c] = static_cast<int>(std::lround(ty - seen.y));
    result.positions[c] = Point2{seen.x + sx[c], seen.y + sy[c]};
    result.ideal[c] = ideal;
    draw_of[c] = static_cast<long>(d);
  }

  // Unmatched cells stay put and go first; matched cells follow in draw
  // order, so later cells overwrite earlier ones.
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return draw_of[a] < draw_of[b]; });
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;

  const LabelMap cells = voronoi_partition(detected);
  RasterImage moved(image.width(), image.height(), {0, 0, 0}, false);
  std::vector<std::size_t> writer(image.bounds().pixel_count(), n);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!image.valid(x, y)) continue;
      const auto c = static_cast<std::size_t>(cells.at(x, y));
      const int tx = x + sx[c];
      const int ty = y + sy[c];
      if (!moved.in_frame(tx, ty)) continue;
      std::size_t& w = writer[static_cast<std::size_t>(ty) * image.width() + tx];
      if (w != n && rank[w] > rank[c]) continue;
      w = c;
      moved.set(tx, ty, image.at(x, y));
      moved.set_valid(tx, ty, true);
    }
  }

  // The cracks are painted around the moved objects.
  for (std::size_t c = 0; c < n; ++c) {
    if (draw_of[c] >= 0) draws[static_cast<std::size_t>(draw_of[c])].position = *result.positions[c];
  }
  result.image = inpaint_draws(moved, draws, config);
  return result;
}

}  // namespace regsynth
