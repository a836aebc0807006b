#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "regsynth/error.hpp"
#include "regsynth/synth.hpp"

namespace regsynth {
namespace {

double shortest_vector(const LatticeModel& m) {
  double best = std::numeric_limits<double>::infinity();
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      if (a == 0 && b == 0) continue;
      const double x = static_cast<double>(a) * m.dxi + static_cast<double>(b) * m.dxj;
      const double y = static_cast<double>(b) * m.dyj;
      best = std::min(best, std::hypot(x, y));
    }
  }
  return best;
}

}  // namespace

ConditionResult condition_search(const CentroidSet& centroids, const LatticeModel& model) {
  if (model.dxi <= 0 || model.dyj <= 0) {
    fail("invalid_lattice", "lattice spacings must be positive",
         {{"dxi", model.dxi}, {"dyj", model.dyj}});
  }
  const ImageBounds bounds = centroids.bounds();
  const auto& pts = centroids.points();
  const double half = 0.5 * shortest_vector(model);

  ConditionResult out;
  out.matched.assign(pts.size(), std::nullopt);

  // Nearest lattice point per centroid; far ones are outliers.
  std::vector<std::optional<LatticeIndex>> nearest(pts.size());
  std::map<LatticeIndex, std::vector<std::size_t>> claims;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto hit = nearest_lattice_point(model, bounds, pts[k]);
    if (!hit || hit->second > half * half) {
      out.dropped.push_back(k);
      continue;
    }
    nearest[k] = hit->first;
    claims[hit->first].push_back(k);
  }

  // Uncontested claims are optimal as they stand. Contested ones are
  // resolved by an exact assignment against the free sites nearby.
  std::vector<std::size_t> contested;
  std::set<LatticeIndex> taken;
  for (const auto& [site, who] : claims) {
    if (who.size() == 1) {
      out.matched[who.front()] = site;
      taken.insert(site);
    } else {
      contested.insert(contested.end(), who.begin(), who.end());
    }
  }
  if (!contested.empty()) {
    std::sort(contested.begin(), contested.end());
    std::set<LatticeIndex> free_sites;
    for (std::size_t k : contested) {
      for (int di = -2; di <= 2; ++di) {
        for (int dj = -2; dj <= 2; ++dj) {
          const LatticeIndex s{nearest[k]->i + di, nearest[k]->j + dj};
          if (taken.count(s) || !bounds.contains(model.position(s))) continue;
          free_sites.insert(s);
        }
      }
    }
    const std::vector<LatticeIndex> cols(free_sites.begin(), free_sites.end());
    std::vector<double> costs(contested.size() * cols.size());
    for (std::size_t r = 0; r < contested.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        costs[r * cols.size() + c] = squared_distance(pts[contested[r]], model.position(cols[c]));
      }
    }
    const auto match = solve_assignment(costs, contested.size(), cols.size());
    for (std::size_t r = 0; r < contested.size(); ++r) {
      if (match[r] >= 0) {
        out.matched[contested[r]] = cols[static_cast<std::size_t>(match[r])];
      } else {
        out.dropped.push_back(contested[r]);
      }
    }
    std::sort(out.dropped.begin(), out.dropped.end());
  }
  if (!out.dropped.empty()) {
    out.warnings.push_back("dropped " + std::to_string(out.dropped.size()) +
                           " centroid(s) that match no lattice point");
  }

  std::vector<LatticeIndex> indices;
  for (const auto& m : out.matched) {
    if (m) indices.push_back(*m);
  }
  if (indices.empty()) fail("no_matched_centroids", "no centroid matches the lattice");

  // Move the origin so both loop ranges start at 0.
  int imin = indices.front().i;
  int jmin = indices.front().j;
  int imax = imin;
  int jmax = jmin;
  for (const LatticeIndex& p : indices) {
    imin = std::min(imin, p.i);
    jmin = std::min(jmin, p.j);
    imax = std::max(imax, p.i);
    jmax = std::max(jmax, p.j);
  }
  out.model = model;
  out.model.bx = model.bx + imin * model.dxi + jmin * model.dxj;
  out.model.by = model.by + jmin * model.dyj;
  for (auto& m : out.matched) {
    if (m) *m = {m->i - imin, m->j - jmin};
  }
  for (LatticeIndex& p : indices) p = {p.i - imin, p.j - jmin};

  out.outer = {0, imax - imin + 1};
  out.inner = {0, jmax - jmin + 1};
  out.hull = convex_hull(indices);
  out.degenerate = out.hull.degenerate;
  for (const HullEdge& e : out.hull.edges) {
    if (e.axis_aligned()) continue;
    out.conditions.push_back(
        {static_cast<int>(e.a), static_cast<int>(e.b), static_cast<int>(e.c)});
  }
  if (out.degenerate) {
    out.warnings.push_back(indices.size() == 1 || out.hull.vertices.size() == 1
                               ? "degenerate hull: a single matched site"
                               : "degenerate hull: matched sites are collinear");
  }
  return out;
}

}  // namespace regsynth
