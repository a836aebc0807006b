#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <map>

#include "regsynth/detect.hpp"
#include "regsynth/error.hpp"
#include "regsynth/parallel.hpp"

namespace regsynth {
namespace {

using Plane = std::vector<float>;

constexpr std::size_t kMaxPeaks = 4096;

int reflect(int k, int n) {
  while (k < 0 || k >= n) k = k < 0 ? -k - 1 : 2 * n - k - 1;
  return k;
}

Plane blur(const Plane& in, int w, int h, double sigma) {
  const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<float> kernel(2 * r + 1);
  double total = 0.0;
  for (int k = -r; k <= r; ++k) {
    kernel[k + r] = static_cast<float>(std::exp(-0.5 * k * k / (sigma * sigma)));
    total += kernel[k + r];
  }
  for (float& v : kernel) v = static_cast<float>(v / total);

  Plane tmp(in.size());
  Plane out(in.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float s = 0.0f;
      for (int k = -r; k <= r; ++k) s += kernel[k + r] * in[static_cast<std::size_t>(y) * w + reflect(x + k, w)];
      tmp[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float s = 0.0f;
      for (int k = -r; k <= r; ++k) s += kernel[k + r] * tmp[static_cast<std::size_t>(reflect(y + k, h)) * w + x];
      out[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  return out;
}

// Difference of Gaussians (both polarities), color contrast and gradient
// magnitude, at two scales.
std::vector<Plane> response_maps(const RasterImage& image) {
  const int w = image.width();
  const int h = image.height();
  const std::size_t n = image.bounds().pixel_count();
  Plane luma(n);
  std::array<Plane, 3> channel{Plane(n), Plane(n), Plane(n)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Rgb c = image.at(x, y);
      const std::size_t o = static_cast<std::size_t>(y) * w + x;
      for (int k = 0; k < 3; ++k) channel[k][o] = c[k] / 255.0f;
      luma[o] = (0.299f * c[0] + 0.587f * c[1] + 0.114f * c[2]) / 255.0f;
    }
  }
  std::array<float, 3> mean{};
  for (int k = 0; k < 3; ++k) {
    double s = 0.0;
    for (float v : channel[k]) s += v;
    mean[k] = static_cast<float>(s / static_cast<double>(n));
  }

  const std::array<double, 2> scales{2.0, 4.0};
  std::vector<std::array<Plane, 4>> per_scale(scales.size());
  parallel_for(scales.size(), [&](std::size_t s) {
    const double sigma = scales[s];
    const Plane fine = blur(luma, w, h, sigma);
    const Plane coarse = blur(luma, w, h, 1.6 * sigma);
    Plane dog(n);
    Plane neg(n);
    for (std::size_t o = 0; o < n; ++o) {
      dog[o] = fine[o] - coarse[o];
      neg[o] = -dog[o];
    }

    Plane contrast(n, 0.0f);
    for (int k = 0; k < 3; ++k) {
      const Plane b = blur(channel[k], w, h, sigma);
      for (std::size_t o = 0; o < n; ++o) contrast[o] += (b[o] - mean[k]) * (b[o] - mean[k]);
    }
    for (float& v : contrast) v = std::sqrt(v);

    const Plane smooth = blur(luma, w, h, 0.5 * sigma);
    Plane grad(n);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto at = [&](int xx, int yy) {
          return smooth[static_cast<std::size_t>(reflect(yy, h)) * w + reflect(xx, w)];
        };
        const float gx = 0.5f * (at(x + 1, y) - at(x - 1, y));
        const float gy = 0.5f * (at(x, y + 1) - at(x, y - 1));
        grad[static_cast<std::size_t>(y) * w + x] = std::sqrt(gx * gx + gy * gy);
      }
    }
    per_scale[s] = {std::move(dog), std::move(neg), std::move(contrast), blur(grad, w, h, sigma)};
  });

  std::vector<Plane> maps;
  for (auto& group : per_scale) {
    for (Plane& p : group) maps.push_back(std::move(p));
  }
  return maps;
}

// Mean absolute difference between the image and itself shifted by t, over
// the overlap. Infinite when the overlap is under a quarter of the image.
double shift_error(const Plane& img, int w, int h, Point2 t) {
  const int tx = static_cast<int>(std::lround(t.x));
  const int ty = static_cast<int>(std::lround(t.y));
  const int x0 = std::max(0, -tx);
  const int x1 = std::min(w, w - tx);
  const int y0 = std::max(0, -ty);
  const int y1 = std::min(h, h - ty);
  if (x1 <= x0 || y1 <= y0) return std::numeric_limits<double>::infinity();
  const long area = static_cast<long>(x1 - x0) * (y1 - y0);
  if (4 * area < static_cast<long>(w) * h) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      s += std::abs(img[static_cast<std::size_t>(y + ty) * w + x + tx] - img[static_cast<std::size_t>(y) * w + x]);
    }
  }
  return s / static_cast<double>(area);
}

}  // namespace

CentroidSet detect_centroids(const RasterImage& image, const DetectParams& params) {
  if (image.width() < 32 || image.height() < 32) {
    fail("image_too_small", "detection needs an image of at least 32x32 pixels",
         {{"width", image.width()}, {"height", image.height()}});
  }
  const std::vector<Plane> maps = response_maps(image);

  // Each map proposes a basis. Among those under which the image best
  // repeats itself, peaks that stand out from the background win.
  Plane luma(image.bounds().pixel_count());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const Rgb c = image.at(x, y);
      luma[static_cast<std::size_t>(y) * image.width() + x] = (0.299f * c[0] + 0.587f * c[1] + 0.114f * c[2]) / 255.0f;
    }
  }
  luma = blur(luma, image.width(), image.height(), 1.0);

  struct Candidate {
    std::vector<Peak> peaks;
    std::pair<Point2, Point2> basis;
    int votes = 0;
    double error = 0.0;
    double salience = 0.0;  // mean color distance of the peaks from the background
  };
  std::array<int, 3> background{};
  for (int k = 0; k < 3; ++k) {
    std::vector<std::uint8_t> values;
    values.reserve(image.bounds().pixel_count());
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) values.push_back(image.at(x, y)[k]);
    }
    std::nth_element(values.begin(), values.begin() + static_cast<long>(values.size() / 2), values.end());
    background[k] = values[values.size() / 2];
  }
  std::vector<Candidate> candidates(maps.size());
  int top_count = 0;
  parallel_for(maps.size(), [&](std::size_t m) {
    const Plane& map = maps[m];
    Candidate& cand = candidates[m];
    cand.error = std::numeric_limits<double>::infinity();
    const float top = *std::max_element(map.begin(), map.end());
    if (!(top > 0.0f)) return;
    PeakMap pm = extract_peaks(map, image.width(), image.height(), params.peak_radius,
                               params.relative_threshold * top);
    if (pm.peaks.size() > kMaxPeaks) pm.peaks.resize(kMaxPeaks);
    std::vector<Point2> pts;
    for (const Peak& p : pm.peaks) pts.push_back({p.x, p.y});
    const auto votes = vote_displacements(pts, params.vote_bin, params.neighbours);
    cand.votes = votes.empty() ? 0 : votes.front().count;
    if (cand.votes < 4) return;
    const auto basis = dominant_vectors(votes, params.min_angle_degrees);
    if (!basis) return;
    cand.peaks = std::move(pm.peaks);
    cand.basis = *basis;
    for (const Peak& p : cand.peaks) {
      const Rgb c = image.at(std::clamp(static_cast<int>(std::lround(p.x)), 0, image.width() - 1),
                             std::clamp(static_cast<int>(std::lround(p.y)), 0, image.height() - 1));
      double d2 = 0.0;
      for (int k = 0; k < 3; ++k) d2 += (c[k] - background[k]) * (c[k] - background[k]);
      cand.salience += std::sqrt(d2);
    }
    cand.salience /= static_cast<double>(cand.peaks.size());
    cand.error = 0.5 * (shift_error(luma, image.width(), image.height(), basis->first) +
                        shift_error(luma, image.width(), image.height(), basis->second));
  });
  for (const Candidate& c : candidates) top_count = std::max(top_count, c.votes);
  if (top_count < 4) {
    fail("no_dominant_displacement", "no dominant displacement", {{"top_votes", top_count}});
  }
  const Candidate* chosen = nullptr;
  double lowest = std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) lowest = std::min(lowest, c.error);
  if (!std::isfinite(lowest)) {
    fail("no_dominant_displacement", "no dominant displacement",
         {{"top_votes", top_count}, {"reason", "all strong votes are collinear"}});
  }
  for (const Candidate& c : candidates) {
    if (c.error > 1.25 * lowest + 1e-3) continue;
    if (!chosen || c.salience > chosen->salience + 1e-9 ||
        (std::abs(c.salience - chosen->salience) <= 1e-9 && c.votes > chosen->votes)) {
      chosen = &c;
    }
  }
  const std::vector<Peak>& best_peaks = chosen->peaks;
  const std::optional<std::pair<Point2, Point2>> basis = chosen->basis;
  const auto [u, v] = *basis;
  const double det = u.x * v.y - u.y * v.x;

  // Lattice coordinates of q relative to anchor a, and whether q sits on a
  // lattice site.
  auto coords = [&](const Peak& a, const Peak& q, long& ci, long& cj) {
    const double dx = q.x - a.x;
    const double dy = q.y - a.y;
    const double alpha = (dx * v.y - dy * v.x) / det;
    const double beta = (u.x * dy - u.y * dx) / det;
    ci = std::lround(alpha);
    cj = std::lround(beta);
    return std::abs(alpha - ci) < 0.25 && std::abs(beta - cj) < 0.25;
  };

  // Anchor: the peak that puts the most peaks on lattice sites; earlier
  // (stronger) peaks win ties.
  std::vector<int> support(best_peaks.size(), 0);
  parallel_for(best_peaks.size(), [&](std::size_t a) {
    long ci = 0;
    long cj = 0;
    for (const Peak& q : best_peaks) support[a] += coords(best_peaks[a], q, ci, cj) ? 1 : 0;
  });
  const std::size_t anchor = static_cast<std::size_t>(
      std::max_element(support.begin(), support.end()) - support.begin());

  // One centroid per site: the strongest peak there.
  std::map<std::pair<long, long>, Peak> sites;
  for (const Peak& q : best_peaks) {
    long ci = 0;
    long cj = 0;
    if (!coords(best_peaks[anchor], q, ci, cj)) continue;
    sites.try_emplace({ci, cj}, q);
  }
  std::vector<Peak> kept;
  for (const auto& [site, p] : sites) kept.push_back(p);
  std::sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) {
    const long ya = std::lround(a.y);
    const long yb = std::lround(b.y);
    return ya != yb ? ya < yb : a.x < b.x;
  });

  // Each peak moves to the mean of the foreground blob around it, kept
  // inside the peak's lattice cell.
  auto cell_offset = [&](double dx, double dy) {
    const double alpha = (dx * v.y - dy * v.x) / det;
    const double beta = (u.x * dy - u.y * dx) / det;
    return std::max(std::abs(alpha), std::abs(beta));
  };
  auto distance = [&](const Rgb& c) {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) d2 += (c[k] - background[k]) * (c[k] - background[k]);
    return std::sqrt(d2);
  };
  const int w = image.width();
  const int h = image.height();
  std::vector<Point2> points(kept.size());
  parallel_for(kept.size(), [&](std::size_t k) {
    const Peak& p = kept[k];
    const int sx = std::clamp(static_cast<int>(std::lround(p.x)), 0, w - 1);
    const int sy = std::clamp(static_cast<int>(std::lround(p.y)), 0, h - 1);
    points[k] = {std::clamp(p.x, 0.0, w - 1.0), std::clamp(p.y, 0.0, h - 1.0)};
    const double seed = distance(image.at(sx, sy));
    const double threshold = std::max(24.0, 0.5 * seed);
    if (seed < threshold) return;
    std::vector<char> seen(image.bounds().pixel_count(), 0);
    std::vector<std::pair<int, int>> stack{{sx, sy}};
    seen[static_cast<std::size_t>(sy) * w + sx] = 1;
    double mx = 0.0;
    double my = 0.0;
    long count = 0;
    while (!stack.empty()) {
      const auto [x, y] = stack.back();
      stack.pop_back();
      mx += x;
      my += y;
      ++count;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          char& mark = seen[static_cast<std::size_t>(ny) * w + nx];
          if (mark) continue;
          mark = 1;
          if (cell_offset(nx - p.x, ny - p.y) >= 0.5) continue;
          if (distance(image.at(nx, ny)) < threshold) continue;
          stack.push_back({nx, ny});
        }
      }
    }
    points[k] = {mx / count, my / count};
  });

  std::vector<std::vector<double>> descriptors;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Point2 c = points[k];
    const Rgb rgb = image.at(static_cast<int>(std::lround(c.x)), static_cast<int>(std::lround(c.y)));
    descriptors.push_back({rgb[0] / 255.0, rgb[1] / 255.0, rgb[2] / 255.0, kept[k].strength});
  }
  return CentroidSet(std::move(points), image.bounds(), std::move(descriptors));
}

}  // namespace regsynth
