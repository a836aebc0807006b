#include "regsynth/error.hpp"
#include "regsynth/synth.hpp"

namespace regsynth {

SynthesisResult synthesize(const CentroidSet& centroids, const RasterImage* image,
                           const SynthConfig& config) {
  config.validate();
  SynthesisResult out;
  out.lattice = lattice_search(centroids, config);
  out.conditions = condition_search(centroids, out.lattice.model);
  out.warnings = out.conditions.warnings;

  const LatticeModel& m = out.conditions.model;
  RegularityProgram& p = out.program;
  p.outer = out.conditions.outer;
  p.inner = out.conditions.inner;
  p.conditions = out.conditions.conditions;
  p.x_expr = {m.dxi, m.dxj, m.bx};
  p.y_expr = {0, m.dyj, m.by};
  p.attribute = attr::Constant{};

  if (image != nullptr && config.attributes) {
    if (image->bounds() != centroids.bounds()) {
      fail("image_size_mismatch", "image size differs from the centroid bounds",
           {{"image", {image->width(), image->height()}},
            {"centroids", {centroids.bounds().width, centroids.bounds().height}}});
    }
    std::vector<Point2> points;
    std::vector<LatticeIndex> indices;
    for (std::size_t k = 0; k < centroids.size(); ++k) {
      if (!out.conditions.matched[k]) continue;
      points.push_back(centroids[k]);
      indices.push_back(*out.conditions.matched[k]);
    }
    PatchDistance dist;
    dist.window = config.patch_window > 0 ? config.patch_window : default_patch_window(points);
    const std::vector<LatticeIndex> domain = admitted_indices(p);
    out.attribute = attribute_search(CentroidSet(std::move(points), centroids.bounds()), *image,
                                     indices, config, dist, domain);
    p.attribute = out.attribute->expr;
  }
  p.validate();
  return out;
}

}  // namespace regsynth
