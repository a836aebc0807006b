#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "regsynth/error.hpp"
#include "regsynth/manip.hpp"
#include "regsynth/parallel.hpp"

namespace regsynth {
namespace {

// Known pixels used to score layers: the known part of the target cell, or
// known pixels around it when the whole cell is a hole.
std::vector<std::size_t> ring_pixels(const AggregationStack& stack, int window) {
  const RasterImage& base = stack.base;
  const int w = base.width();
  const int h = base.height();
  std::vector<std::size_t> ring;
  int x0 = w;
  int y0 = h;
  int x1 = -1;
  int y1 = -1;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!stack.in_cell(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
      if (base.valid(x, y)) ring.push_back(static_cast<std::size_t>(y) * w + x);
    }
  }
  if (!ring.empty() || x1 < 0) return ring;
  for (int y = std::max(0, y0 - window); y <= std::min(h - 1, y1 + window); ++y) {
    for (int x = std::max(0, x0 - window); x <= std::min(w - 1, x1 + window); ++x) {
      if (base.valid(x, y)) ring.push_back(static_cast<std::size_t>(y) * w + x);
    }
  }
  return ring;
}

}  // namespace

PartialComposite composite_paint_partial(const AggregationStack& stack,
                                         const CompositeConfig& config) {
  if (!(config.temperature > 0.0)) {
    fail("invalid_config", "composite temperature must be positive",
         {{"temperature", config.temperature}});
  }
  const RasterImage& base = stack.base;
  const int w = base.width();
  const std::size_t layers = stack.layers.size();

  const std::vector<std::size_t> ring = ring_pixels(stack, config.ring_window);
  std::vector<double> dist(layers, 1.0);
  parallel_for(layers, [&](std::size_t l) {
    long sum = 0;
    long count = 0;
    for (std::size_t o : ring) {
      const int x = static_cast<int>(o % w);
      const int y = static_cast<int>(o / w);
      const auto v = stack.sample(l, x, y);
      if (!v) continue;
      const Rgb b = base.at(x, y);
      for (int c = 0; c < 3; ++c) sum += std::abs(static_cast<int>(b[c]) - static_cast<int>((*v)[c]));
      ++count;
    }
    if (count > 0) dist[l] = static_cast<double>(sum) / (static_cast<double>(count) * 3.0 * 255.0);
  });
  const double dmin = layers > 0 ? *std::min_element(dist.begin(), dist.end()) : 0.0;
  std::vector<double> weight(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    weight[l] = std::exp(-(dist[l] - dmin) / config.temperature);
  }

  std::vector<std::pair<int, int>> holes;
  for (int y = 0; y < base.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      if (stack.in_cell(x, y) && !base.valid(x, y)) holes.emplace_back(x, y);
    }
  }
  std::vector<std::optional<Rgb>> fill(holes.size());
  parallel_for(holes.size(), [&](std::size_t k) {
    const auto [x, y] = holes[k];
    double acc[3] = {0.0, 0.0, 0.0};
    double total = 0.0;
    for (std::size_t l = 0; l < layers; ++l) {
      const auto v = stack.sample(l, x, y);
      if (!v) continue;
      for (int c = 0; c < 3; ++c) acc[c] += weight[l] * (*v)[c];
      total += weight[l];
    }
    if (total <= 0.0) return;
    Rgb out;
    for (int c = 0; c < 3; ++c) {
      out[c] = static_cast<std::uint8_t>(std::clamp(std::lround(acc[c] / total), 0L, 255L));
    }
    fill[k] = out;
  });

  PartialComposite result{base, {}};
  for (std::size_t k = 0; k < holes.size(); ++k) {
    const auto [x, y] = holes[k];
    if (fill[k]) {
      result.image.set(x, y, *fill[k]);
      result.image.set_valid(x, y, true);
    } else {
      result.uncovered.push_back(holes[k]);
    }
  }
  return result;
}

RasterImage composite_paint(const AggregationStack& stack, const CompositeConfig& config) {
  PartialComposite r = composite_paint_partial(stack, config);
  if (!r.uncovered.empty()) {
    nlohmann::json where = nlohmann::json::array();
    for (std::size_t k = 0; k < r.uncovered.size() && k < 64; ++k) {
      where.push_back({r.uncovered[k].first, r.uncovered[k].second});
    }
    fail("uncovered_hole_pixel", "uncovered hole pixel",
         {{"count", r.uncovered.size()}, {"pixels", where}});
  }
  return std::move(r.image);
}

}  // namespace regsynth
