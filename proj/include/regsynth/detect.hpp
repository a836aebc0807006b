#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "regsynth/geometry.hpp"
#include "regsynth/raster.hpp"

namespace regsynth {

struct Peak {
  double x = 0.0;
  double y = 0.0;
  double strength = 0.0;
};

/// Local maxima of one response map, strongest first.
struct PeakMap {
  std::vector<Peak> peaks;
};

/// Binned displacement between neighbouring peaks, canonicalized to the
/// half-plane dx > 0 or (dx == 0 and dy > 0).
struct DisplacementVote {
  Point2 vector;  // bin center
  int count = 0;
  Point2 mean;    // mean raw displacement near the bin (strongest bins only)
};

struct DetectParams {
  int peak_radius = 5;
  double vote_bin = 2.0;
  double min_angle_degrees = 15.0;  // minimum angle between the two lattice vectors
  double relative_threshold = 0.3;  // peaks weaker than this fraction of the maximum are dropped
  int neighbours = 4;               // displacements per peak that enter the vote
};

/// Canonical half-plane representative of a displacement, decided on the
/// displacement rounded to `bin_size` so that nearly vertical vectors and
/// their negations share a bin.
Point2 canonical_displacement(const Point2& d, double bin_size);

/// Accumulates nearest-neighbour displacements into bins of `bin_size` px.
/// Bins are returned by descending count, ties by bin coordinates.
std::vector<DisplacementVote> vote_displacements(std::span<const Point2> points, double bin_size,
                                                 int neighbours);

/// Means of the first vote and of the strongest vote at least
/// `min_angle_degrees` away from it, if any.
std::optional<std::pair<Point2, Point2>> dominant_vectors(std::span<const DisplacementVote> votes,
                                                          double min_angle_degrees);

/// Strict local maxima (ties broken by raster order) within `radius`,
/// above `threshold`, refined to sub-pixel precision.
PeakMap extract_peaks(std::span<const float> response, int width, int height, int radius,
                      double threshold);

/// Repeated-object detection: hand-crafted response maps, peak extraction,
/// displacement voting, and lattice-consistent peak selection.
CentroidSet detect_centroids(const RasterImage& image, const DetectParams& params = {});

}  // namespace regsynth
