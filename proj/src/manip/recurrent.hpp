#pragma once

#include "regsynth/manip.hpp"

namespace regsynth::detail {

// Hole pixels per Voronoi cell.
std::vector<std::size_t> holes_per_cell(const RasterImage& image, const LabelMap& cells,
                                        std::size_t draw_count);

// Runs the plan in order, each task reading the previous result. Holes no
// layer reaches are left for the background fill.
RasterImage run_plan(const RasterImage& image, std::span<const DrawCommand> draws,
                     const LabelMap& cells, const EditPlan& plan, const CompositeConfig& config);

}  // namespace regsynth::detail
