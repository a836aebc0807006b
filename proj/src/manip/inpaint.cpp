#include <algorithm>
#include <deque>

#include "recurrent.hpp"
#include "regsynth/error.hpp"

namespace regsynth {

namespace detail {

std::vector<std::size_t> holes_per_cell(const RasterImage& image, const LabelMap& cells,
                                        std::size_t draw_count) {
  std::vector<std::size_t> count(draw_count, 0);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!image.valid(x, y)) ++count[static_cast<std::size_t>(cells.at(x, y))];
    }
  }
  return count;
}

RasterImage run_plan(const RasterImage& image, std::span<const DrawCommand> draws,
                     const LabelMap& cells, const EditPlan& plan, const CompositeConfig& config) {
  RasterImage current = image;
  if (draws.size() < 2) return current;
  for (const EditTask& task : plan.tasks) {
    bool has_hole = false;
    for (int y = 0; y < current.height() && !has_hole; ++y) {
      for (int x = 0; x < current.width(); ++x) {
        if (cells.at(x, y) == static_cast<std::int32_t>(task.target) && !current.valid(x, y)) {
          has_hole = true;
          break;
        }
      }
    }
    if (!has_hole) continue;
    const AggregationStack stack = attribute_filter(build_stack(current, draws, task.target, &cells),
                                                    draws, draws[task.target].attribute);
    current = composite_paint_partial(stack, config).image;
  }
  return current;
}

}  // namespace detail

EditPlan plan_inpaint(const RasterImage& image, const LabelMap& cells, std::size_t draw_count) {
  const auto count = detail::holes_per_cell(image, cells, draw_count);
  EditPlan plan;
  plan.kind = EditKind::Inpaint;
  for (std::size_t k = 0; k < draw_count; ++k) {
    if (count[k] > 0) plan.tasks.push_back({k, count[k]});
  }
  std::stable_sort(plan.tasks.begin(), plan.tasks.end(),
                   [](const EditTask& a, const EditTask& b) { return a.hole_pixels > b.hole_pixels; });
  return plan;
}

RasterImage diffuse_fill(const RasterImage& image) {
  if (!image.has_holes()) return image;
  const int w = image.width();
  const int h = image.height();
  RasterImage out = image;
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (image.valid(x, y)) queue.emplace_back(x, y);
    }
  }
  if (queue.empty()) fail("no_valid_pixels", "image has no valid pixels to diffuse from");
  constexpr int kStep[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    for (const auto& s : kStep) {
      const int nx = x + s[0];
      const int ny = y + s[1];
      if (!out.in_frame(nx, ny) || out.valid(nx, ny)) continue;
      out.set(nx, ny, out.at(x, y));
      out.set_valid(nx, ny, true);
      queue.emplace_back(nx, ny);
    }
  }
  return out;
}

RasterImage inpaint_draws(const RasterImage& image, std::span<const DrawCommand> draws,
                          const CompositeConfig& config) {
  if (!image.has_holes()) return image;
  if (draws.empty()) return diffuse_fill(image);
  std::vector<Point2> positions;
  for (const DrawCommand& d : draws) positions.push_back(d.position);
  const LabelMap cells = voronoi_partition(positions, image.bounds());
  const EditPlan plan = plan_inpaint(image, cells, draws.size());
  return diffuse_fill(detail::run_plan(image, draws, cells, plan, config));
}

RasterImage inpaint(const RasterImage& image, const RegularityProgram& program,
                    const CompositeConfig& config) {
  program.validate();
  if (!image.has_holes()) return image;
  const auto draws = execute(program, image.bounds());
  return inpaint_draws(image, draws, config);
}

}  // namespace regsynth
