#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "regsynth/dsl.hpp"
#include "regsynth/geometry.hpp"
#include "regsynth/raster.hpp"

namespace regsynth {

/// x = bx + i * dxi + j * dxj, y = by + j * dyj
struct LatticeModel {
  int bx = 0;
  int by = 0;
  int dxi = 0;
  int dxj = 0;
  int dyj = 0;

  Point2 position(const LatticeIndex& p) const {
    return {static_cast<double>(bx + p.i * dxi + p.j * dxj), static_cast<double>(by + p.j * dyj)};
  }

  /// Same point set with 0 <= by < dyj, 0 <= bx < dxi and
  /// -dxi/2 < dxj <= dxi/2.
  LatticeModel canonical() const;

  friend auto operator<=>(const LatticeModel&, const LatticeModel&) = default;
};

struct SynthConfig {
  double lambda = 5.0;  // lattice size penalty
  double mu = 10.0;     // attribute group penalty
  int spacing_min = 4;
  int spacing_max = 64;
  int max_groups = 8;
  int coeff_range = 3;  // attribute template coefficients lie in [-coeff_range, coeff_range]
  int modulus_min = 2;
  int modulus_max = 5;
  int patch_window = 0;            // 0 selects half the median neighbour spacing
  std::size_t attribute_max_points = 256;
  bool attributes = true;

  void validate() const;
};

/// Lattice cost: squared distance of every centroid to its nearest lattice
/// point inside the image, plus lambda per lattice point inside the image.
double lattice_cost(const CentroidSet& centroids, const LatticeModel& model, double lambda);

/// Number of lattice points of `model` inside `bounds`.
std::size_t lattice_point_count(const LatticeModel& model, ImageBounds bounds);

/// Nearest in-image lattice point; nullopt when none lies inside the image.
/// Equidistant points resolve to the smallest (j, i).
std::optional<std::pair<LatticeIndex, double>> nearest_lattice_point(const LatticeModel& model,
                                                                     ImageBounds bounds,
                                                                     const Point2& p);

struct LatticeSearchResult {
  LatticeModel model;  // canonical
  double cost = 0.0;
  double data_term = 0.0;
  std::size_t lattice_points = 0;
};

/// Global minimizer of lattice_cost over canonical integer lattices with
/// spacings in [spacing_min, spacing_max]. Ties resolve to the smallest
/// (bx, by, dxi, dxj, dyj).
LatticeSearchResult lattice_search(const CentroidSet& centroids, const SynthConfig& config);

/// Lattices suggested by displacement voting and refined locally; these
/// seed the exact search.
std::vector<LatticeModel> voted_lattice_seeds(const CentroidSet& centroids, const SynthConfig& config);

struct ConditionResult {
  LoopRange outer;
  LoopRange inner;
  std::vector<LinearExpr> conditions;
  LatticeModel model;  // origin moved so both ranges start at 0
  std::vector<std::optional<LatticeIndex>> matched;  // per input centroid, in the rebased frame
  std::vector<std::size_t> dropped;                  // centroids treated as outliers
  ConvexHull hull;                                   // rebased
  bool degenerate = false;
  std::vector<std::string> warnings;
};

/// Boundary inference: match centroids to lattice points, take the convex
/// hull of the matched indices, and turn hull edges into loop ranges and
/// If-conditions.
ConditionResult condition_search(const CentroidSet& centroids, const LatticeModel& model);

struct AttributeSearchResult {
  AttributeExpr expr;
  double cost = 0.0;
  int groups = 1;
  std::size_t templates_evaluated = 0;
};

/// Enumerates attribute templates in search order (the order used to
/// break ties).
std::vector<AttributeExpr> attribute_templates(const SynthConfig& config);

/// Attribute search over the template space. `indices[k]` is the lattice
/// index of centroids[k]. Labels must also be valid (non-negative, at most
/// max_groups distinct) on every index of `domain`.
AttributeSearchResult attribute_search(const CentroidSet& centroids, const RasterImage& image,
                                       std::span<const LatticeIndex> indices,
                                       const SynthConfig& config, const PatchDistance& dist,
                                       std::span<const LatticeIndex> domain = {});

struct SynthesisResult {
  RegularityProgram program;
  LatticeSearchResult lattice;
  ConditionResult conditions;
  std::optional<AttributeSearchResult> attribute;
  std::vector<std::string> warnings;
};

/// Lattice search, condition search, then attribute search when an image
/// is supplied and attributes are enabled.
SynthesisResult synthesize(const CentroidSet& centroids, const RasterImage* image,
                           const SynthConfig& config);

}  // namespace regsynth
