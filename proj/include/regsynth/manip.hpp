#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "regsynth/dsl.hpp"
#include "regsynth/geometry.hpp"
#include "regsynth/raster.hpp"

namespace regsynth {

enum class EditKind { Inpaint, Extrapolate, Edit };

struct EditTask {
  std::size_t target = 0;       // draw index
  std::size_t hole_pixels = 0;  // holes inside the target's cell when planned
};

/// Tasks in paint order. Each task fills the holes of one object's cell,
/// reading earlier results.
struct EditPlan {
  EditKind kind = EditKind::Inpaint;
  std::vector<EditTask> tasks;
};

struct CompositeConfig {
  double temperature = 0.05;  // softmax temperature over normalized ring distances
  int ring_window = 4;        // fallback ring: known pixels this close to a fully erased cell
};

/// Paints every hole of the stack's target cell with a softmax-weighted
/// blend of the layers. Throws "uncovered hole pixel" when some hole has no
/// valid layer.
RasterImage composite_paint(const AggregationStack& stack, const CompositeConfig& config = {});

struct PartialComposite {
  RasterImage image;
  std::vector<std::pair<int, int>> uncovered;  // (x, y) of holes no layer reaches
};

/// Same as composite_paint, but leaves uncovered pixels as holes.
PartialComposite composite_paint_partial(const AggregationStack& stack,
                                         const CompositeConfig& config = {});

/// Objects whose cells contain holes, most holes first (ties by draw order).
EditPlan plan_inpaint(const RasterImage& image, const LabelMap& cells, std::size_t draw_count);

/// Fills each hole with the value of its nearest valid pixel (breadth-first
/// over 4-neighbours).
RasterImage diffuse_fill(const RasterImage& image);

/// Recurrent inpainting over an explicit object list.
RasterImage inpaint_draws(const RasterImage& image, std::span<const DrawCommand> draws,
                          const CompositeConfig& config = {});

/// Recurrent inpainting with the objects of `program`. The result has no
/// holes.
RasterImage inpaint(const RasterImage& image, const RegularityProgram& program,
                    const CompositeConfig& config = {});

struct Extension {
  int left = 0;
  int right = 0;
  int top = 0;
  int bottom = 0;
  int relax_conditions = 0;  // added to every condition constant

  bool empty() const {
    return left == 0 && right == 0 && top == 0 && bottom == 0 && relax_conditions == 0;
  }
};

struct ExtrapolationResult {
  RasterImage image;
  RegularityProgram program;          // relaxed, in the enlarged canvas frame
  std::vector<LatticeIndex> new_objects;
};

/// Program with every condition constant raised by `amount`. Loop bounds
/// that only touch the region at a vertex are re-fitted to the relaxed
/// region.
RegularityProgram relax_conditions(const RegularityProgram& program, int amount);

/// Enlarges the canvas (new pixels are holes), relaxes the program so new
/// objects fall into the new area, and paints them nearest-first.
ExtrapolationResult extrapolate_program(const RasterImage& image, const RegularityProgram& program,
                                        const Extension& extension,
                                        const CompositeConfig& config = {});

RasterImage extrapolate(const RasterImage& image, const RegularityProgram& program,
                        const Extension& extension, const CompositeConfig& config = {});

struct EditResult {
  RasterImage image;
  std::vector<std::optional<Point2>> positions;  // per detected centroid after the edit
  std::vector<std::optional<Point2>> ideal;      // matched program position per centroid
};

/// Scales each centroid's displacement from its program position by
/// `gain`, moves its Voronoi cell rigidly by the rounded shift, and
/// inpaints the cracks. Later cells overwrite earlier ones.
EditResult edit_regularity(const RasterImage& image, const RegularityProgram& program,
                           const CentroidSet& detected, double gain,
                           const CompositeConfig& config = {});

}  // namespace regsynth
