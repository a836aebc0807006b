#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "regsynth/dsl.hpp"
#include "regsynth/geometry.hpp"

namespace regsynth {

using Rgb = std::array<std::uint8_t, 3>;

/// 8-bit RGB image with a per-pixel validity mask (1 = known, 0 = hole).
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, Rgb fill = {0, 0, 0}, bool valid = true);

  int width() const { return width_; }
  int height() const { return height_; }
  ImageBounds bounds() const { return {width_, height_}; }
  bool in_frame(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  Rgb at(int x, int y) const {
    const std::size_t o = offset(x, y) * 3;
    return {data_[o], data_[o + 1], data_[o + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t o = offset(x, y) * 3;
    data_[o] = c[0];
    data_[o + 1] = c[1];
    data_[o + 2] = c[2];
  }
  bool valid(int x, int y) const { return mask_[offset(x, y)] != 0; }
  void set_valid(int x, int y, bool v) { mask_[offset(x, y)] = v ? 1 : 0; }

  /// Marks a pixel as a hole and zeroes its value.
  void erase(int x, int y) {
    set(x, y, {0, 0, 0});
    set_valid(x, y, false);
  }

  std::size_t hole_count() const;
  bool has_holes() const { return hole_count() > 0; }

  std::span<const std::uint8_t> pixels() const { return data_; }
  std::span<std::uint8_t> pixels() { return data_; }
  std::span<const std::uint8_t> mask() const { return mask_; }
  std::span<std::uint8_t> mask() { return mask_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
  std::vector<std::uint8_t> mask_;
};

/// One translated copy of the base image: layer(x, y) = base(x - dx, y - dy).
struct StackLayer {
  std::size_t source = 0;  // index of the source draw
  int dx = 0;
  int dy = 0;
};

/// The corrupted image plus one translated copy per source object, each
/// aligned so the source centroid lands on the target centroid. Layers are
/// stored as translations of `base`; materialize() renders one as an image.
struct AggregationStack {
  RasterImage base;
  Point2 target;
  std::size_t target_index = 0;
  std::vector<StackLayer> layers;
  std::vector<std::uint8_t> cell;  // target's Voronoi cell, row-major, 1 = inside

  /// Layer pixel, or nullopt when the translated source is out of frame or
  /// a hole.
  std::optional<Rgb> sample(std::size_t layer, int x, int y) const {
    const StackLayer& l = layers[layer];
    const int sx = x - l.dx;
    const int sy = y - l.dy;
    if (!base.in_frame(sx, sy) || !base.valid(sx, sy)) return std::nullopt;
    return base.at(sx, sy);
  }

  bool in_cell(int x, int y) const {
    return cell[static_cast<std::size_t>(y) * base.width() + x] != 0;
  }

  /// Full image for one layer; out-of-frame and hole pixels are 0 with mask 0.
  RasterImage materialize(std::size_t layer) const;
};

/// Builds the aggregation stack for draws[target_index]. `labels`, when
/// given, must be the Voronoi partition of the draw positions.
AggregationStack build_stack(const RasterImage& image, std::span<const DrawCommand> draws,
                             std::size_t target_index, const LabelMap* labels = nullptr);

/// Keeps only layers whose source draw carries `target_attribute`.
AggregationStack attribute_filter(const AggregationStack& stack,
                                  std::span<const DrawCommand> draws, int target_attribute);

/// Mean absolute per-channel difference of two square patches, scaled to
/// [0, 1]. Only pixels valid in both patches count; with none, the distance
/// is 1.
struct PatchDistance {
  int window = 4;  // half-size; the patch is (2 * window + 1)^2

  double operator()(const RasterImage& image, const Point2& p, const Point2& q) const;
};

/// Half of the median nearest-neighbour spacing, at least 1 px.
int default_patch_window(std::span<const Point2> points);

}  // namespace regsynth
