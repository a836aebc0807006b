#include <algorithm>
#include <numeric>

#include "regsynth/geometry.hpp"

namespace regsynth {
namespace {

long cross(const LatticeIndex& o, const LatticeIndex& a, const LatticeIndex& b) {
  return static_cast<long>(a.i - o.i) * (b.j - o.j) - static_cast<long>(a.j - o.j) * (b.i - o.i);
}

HullEdge normalized(long a, long b, long c) {
  const long g = std::gcd(std::gcd(a, b), c);
  if (g > 1) {
    a /= g;
    b /= g;
    c /= g;
  }
  return {a, b, c};
}

// Inward half-plane to the left of the directed edge p -> q.
HullEdge left_of(const LatticeIndex& p, const LatticeIndex& q) {
  const long a = -(q.j - p.j);
  const long b = q.i - p.i;
  return normalized(a, b, -(a * p.i + b * p.j));
}

}  // namespace

bool ConvexHull::contains(const LatticeIndex& p) const {
  return std::all_of(edges.begin(), edges.end(),
                     [&](const HullEdge& e) { return e.evaluate(p) >= 0; });
}

ConvexHull convex_hull(std::span<const LatticeIndex> input) {
  std::vector<LatticeIndex> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  ConvexHull hull;
  if (pts.empty()) {
    hull.degenerate = true;
    return hull;
  }
  if (pts.size() == 1) {
    const LatticeIndex& p = pts[0];
    hull.degenerate = true;
    hull.vertices = {p};
    hull.edges = {{1, 0, -p.i}, {-1, 0, p.i}, {0, 1, -p.j}, {0, -1, p.j}};
    return hull;
  }

  // Andrew's monotone chain; pops on cross <= 0 so collinear points drop out.
  std::vector<LatticeIndex> chain(2 * pts.size());
  std::size_t k = 0;
  for (const LatticeIndex& p : pts) {
    while (k >= 2 && cross(chain[k - 2], chain[k - 1], p) <= 0) --k;
    chain[k++] = p;
  }
  for (std::size_t s = pts.size() - 1, lower = k + 1; s-- > 0;) {
    const LatticeIndex& p = pts[s];
    while (k >= lower && cross(chain[k - 2], chain[k - 1], p) <= 0) --k;
    chain[k++] = p;
  }
  chain.resize(k - 1);

  if (chain.size() == 2) {
    const LatticeIndex& a = chain[0];
    const LatticeIndex& b = chain[1];
    const long g = std::gcd(static_cast<long>(b.i - a.i), static_cast<long>(b.j - a.j));
    const long dx = (b.i - a.i) / g;
    const long dy = (b.j - a.j) / g;
    const HullEdge line = normalized(-dy, dx, dy * a.i - dx * a.j);
    hull.degenerate = true;
    hull.vertices = {a, b};
    hull.edges = {line,
                  {-line.a, -line.b, -line.c},
                  normalized(dx, dy, -(dx * a.i + dy * a.j)),
                  normalized(-dx, -dy, dx * b.i + dy * b.j)};
    return hull;
  }

  hull.vertices = chain;
  for (std::size_t s = 0; s < chain.size(); ++s) {
    hull.edges.push_back(left_of(chain[s], chain[(s + 1) % chain.size()]));
  }
  return hull;
}

}  // namespace regsynth
