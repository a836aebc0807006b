#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "regsynth/detect.hpp"
#include "regsynth/parallel.hpp"

namespace regsynth {
namespace {

std::pair<long, long> bin_key(const Point2& d, double bin_size) {
  return {std::lround(d.x / bin_size), std::lround(d.y / bin_size)};
}

bool canonical_key(std::pair<long, long> k) {
  return k.first > 0 || (k.first == 0 && k.second > 0);
}

}  // namespace

Point2 canonical_displacement(const Point2& d, double bin_size) {
  if (canonical_key(bin_key(d, bin_size))) return d;
  return {-d.x, -d.y};
}

std::vector<DisplacementVote> vote_displacements(std::span<const Point2> points, double bin_size,
                                                 int neighbours) {
  const std::size_t n = points.size();
  if (n < 2 || neighbours < 1 || !(bin_size > 0.0)) return {};
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(neighbours), n - 1);

  std::vector<std::vector<Point2>> per_point(n);
  parallel_for(n, [&](std::size_t a) {
    std::vector<std::pair<double, std::size_t>> near;
    near.reserve(n - 1);
    for (std::size_t b = 0; b < n; ++b) {
      if (b != a) near.emplace_back(squared_distance(points[a], points[b]), b);
    }
    std::partial_sort(near.begin(), near.begin() + static_cast<long>(k), near.end());
    for (std::size_t t = 0; t < k; ++t) {
      const Point2& q = points[near[t].second];
      per_point[a].push_back(
          canonical_displacement({q.x - points[a].x, q.y - points[a].y}, bin_size));
    }
  });

  std::vector<Point2> all;
  for (auto& v : per_point) all.insert(all.end(), v.begin(), v.end());

  std::map<std::pair<long, long>, int> bins;
  for (const Point2& d : all) {
    const auto key = bin_key(d, bin_size);
    if (key.first == 0 && key.second == 0) continue;
    ++bins[key];
  }
  std::vector<DisplacementVote> votes;
  for (const auto& [key, count] : bins) {
    DisplacementVote v;
    v.vector = {key.first * bin_size, key.second * bin_size};
    v.count = count;
    v.mean = v.vector;
    votes.push_back(v);
  }
  std::stable_sort(votes.begin(), votes.end(),
                   [](const auto& a, const auto& b) { return a.count > b.count; });

  // Means of the raw displacements around the strongest bin centers.
  for (std::size_t t = 0; t < std::min<std::size_t>(votes.size(), 8); ++t) {
    DisplacementVote& v = votes[t];
    const double radius = std::max(2.0 * bin_size, 0.25 * std::hypot(v.vector.x, v.vector.y));
    double sx = 0.0;
    double sy = 0.0;
    int m = 0;
    for (const Point2& d : all) {
      if (std::hypot(d.x - v.vector.x, d.y - v.vector.y) <= radius) {
        sx += d.x;
        sy += d.y;
        ++m;
      }
    }
    if (m > 0) v.mean = {sx / m, sy / m};
  }
  return votes;
}

std::optional<std::pair<Point2, Point2>> dominant_vectors(std::span<const DisplacementVote> votes,
                                                          double min_angle_degrees) {
  if (votes.empty()) return std::nullopt;
  const Point2 u = votes.front().mean;
  const double limit = std::sin(min_angle_degrees * std::numbers::pi / 180.0);
  for (std::size_t k = 1; k < votes.size(); ++k) {
    const Point2 v = votes[k].mean;
    const double norms = std::hypot(u.x, u.y) * std::hypot(v.x, v.y);
    if (norms == 0.0) continue;
    if (std::abs(u.x * v.y - u.y * v.x) / norms >= limit) return std::make_pair(u, v);
  }
  return std::nullopt;
}

}  // namespace regsynth
