// One pass/fail line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "regsynth/cli.hpp"
#include "regsynth/detect.hpp"
#include "regsynth/dsl.hpp"
#include "regsynth/error.hpp"
#include "regsynth/image_io.hpp"
#include "regsynth/manip.hpp"
#include "regsynth/parallel.hpp"
#include "regsynth/synth.hpp"

using namespace regsynth;
using namespace regsynth::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using PositionSet = std::set<std::pair<double, double>>;

PositionSet position_set(const RegularityProgram& p, ImageBounds b) {
  PositionSet out;
  for (const auto& d : execute(p, b)) out.insert({d.position.x, d.position.y});
  return out;
}

void erase_rect(RasterImage& img, int x0, int y0, int w, int h) {
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) img.erase(x, y);
  }
}

std::uint8_t clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

// Tiled image with a brightness offset per tile in [-a, a].
RasterImage noisy_tiles(const RasterImage& clean, int cols, int rows, int t, int a, Rng& rng) {
  RasterImage img = clean;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      const int o = uniform_int(rng, -a, a);
      for (int y = j * t; y < (j + 1) * t; ++y) {
        for (int x = i * t; x < (i + 1) * t; ++x) {
          const Rgb c = clean.at(x, y);
          img.set(x, y, {clamp8(c[0] + o), clamp8(c[1] + o), clamp8(c[2] + o)});
        }
      }
    }
  }
  return img;
}

// Mean absolute difference per channel sample over a rectangle.
double mean_l1(const RasterImage& a, const RasterImage& b, int x0, int y0, int w, int h) {
  double s = 0.0;
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) {
      for (int c = 0; c < 3; ++c) s += std::abs(a.at(x, y)[c] - b.at(x, y)[c]);
    }
  }
  return s / (3.0 * w * h);
}

// ---------------------------------------------------------------------------

Outcome lattice_recovery() {
  Rng rng(1001);
  const int trials = 200;
  int exact = 0;
  double slowest = 0.0;
  for (int t = 0; t < trials; ++t) {
    const LatticeCase c = random_lattice_case(rng, 8, 40, 0.10, 0.20, 384, 512);
    const auto t0 = Clock::now();
    const LatticeSearchResult r = lattice_search(CentroidSet(c.points, c.bounds), {});
    slowest = std::max(slowest, seconds_since(t0));
    exact += r.model == c.model;
  }
  const bool pass = exact * 100 >= 95 * trials && slowest <= 5.0;
  return {pass, fmt("%d/%d exact (need >= 95%%), slowest %.2f s (limit 5 s)", exact, trials, slowest)};
}

Outcome lattice_oracle() {
  Rng rng(1002);
  const int trials = 50;
  int equal = 0;
  for (int t = 0; t < trials; ++t) {
    const ImageBounds b{uniform_int(rng, 24, 40), uniform_int(rng, 24, 40)};
    const int s = uniform_int(rng, 5, 12);
    const int n = uniform_int(rng, 4, 12);
    std::vector<IntPoint> ints;
    std::vector<Point2> pts;
    // Mostly near-lattice points, some anywhere.
    const int bx = uniform_int(rng, 0, s - 1);
    const int by = uniform_int(rng, 0, s - 1);
    while (static_cast<int>(ints.size()) < n) {
      IntPoint p;
      if (uniform_int(rng, 0, 4) == 0) {
        p = {uniform_int(rng, 0, b.width - 1), uniform_int(rng, 0, b.height - 1)};
      } else {
        p = {bx + s * uniform_int(rng, 0, b.width / s) + uniform_int(rng, -1, 1),
             by + s * uniform_int(rng, 0, b.height / s) + uniform_int(rng, -1, 1)};
      }
      if (p.x < 0 || p.y < 0 || p.x >= b.width || p.y >= b.height) continue;
      if (std::any_of(ints.begin(), ints.end(), [&](const IntPoint& q) { return q.x == p.x && q.y == p.y; })) continue;
      ints.push_back(p);
      pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    }
    SynthConfig cfg;
    cfg.spacing_min = 4;
    cfg.spacing_max = 15;
    const LatticeSearchResult r = lattice_search(CentroidSet(pts, b), cfg);
    const ExhaustiveLattice o = exhaustive_lattice_search(ints, b, 5, 4, 15);
    equal += r.cost == static_cast<double>(o.cost);
  }
  return {equal == trials, fmt("%d/%d costs equal to exhaustive enumeration (need all)", equal, trials)};
}

// Region generator: 0 rectangle, 1 triangle i + j <= n, 2 trapezoid.
RegularityProgram region_program(Rng& rng, int shape) {
  RegularityProgram p;
  const int dxi = uniform_int(rng, 10, 24);
  const int dyj = uniform_int(rng, 10, 24);
  const int dxj = uniform_int(rng, -dxi / 4, dxi / 4);
  if (shape == 0) {
    p.outer = {0, uniform_int(rng, 2, 7)};
    p.inner = {0, uniform_int(rng, 2, 7)};
  } else if (shape == 1) {
    const int n = uniform_int(rng, 3, 7);
    p.outer = {0, n + 1};
    p.inner = {0, n + 1};
    p.conditions.push_back({-1, -1, n});
  } else {
    const int ni = uniform_int(rng, 6, 9);
    const int nj = uniform_int(rng, 2, ni / 2);
    p.outer = {0, ni};
    p.inner = {0, nj};
    p.conditions.push_back({1, -1, 0});
    p.conditions.push_back({-1, -1, ni - 1});
  }
  // Origin placed so every draw lies half a spacing inside the frame.
  int xmin = 0;
  for (const auto& s : admitted_indices(p)) xmin = std::min(xmin, s.i * dxi + s.j * dxj);
  p.x_expr = {dxi, dxj, dxi / 2 - xmin + uniform_int(rng, 0, 2)};
  p.y_expr = {0, dyj, dyj / 2 + uniform_int(rng, 0, 2)};
  return p;
}

ImageBounds region_bounds(const RegularityProgram& p) {
  int xmax = 0;
  int ymax = 0;
  for (const auto& s : admitted_indices(p)) {
    xmax = std::max(xmax, static_cast<int>(p.x_expr.evaluate(s)));
    ymax = std::max(ymax, static_cast<int>(p.y_expr.evaluate(s)));
  }
  return {xmax + p.x_expr.coef_i / 2 + 1, ymax + p.y_expr.coef_j / 2 + 1};
}

// Jittered runs match when the draws pair one to one with the generating
// positions, each within a third of the spacing.
bool matches(const PositionSet& want, const std::vector<DrawCommand>& got, double tol) {
  if (want.size() != got.size()) return false;
  std::set<std::pair<double, double>> used;
  for (const auto& d : got) {
    bool found = false;
    for (const auto& w : want) {
      if (used.count(w)) continue;
      if (std::hypot(w.first - d.position.x, w.second - d.position.y) <= tol) {
        used.insert(w);
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

Outcome condition_recovery() {
  Rng rng(1003);
  SynthConfig cfg;
  cfg.attributes = false;
  std::array<int, 3> clean{};
  std::array<int, 3> noisy{};
  int rejected = 0;
  const int per_shape = 100;
  for (int shape = 0; shape < 3; ++shape) {
    for (int t = 0; t < per_shape; ++t) {
      // Regions whose positions a rival lattice explains more cheaply are
      // redrawn; no cost minimizer can recover them.
      RegularityProgram p = region_program(rng, shape);
      while (!identifiable(p, region_bounds(p))) {
        ++rejected;
        p = region_program(rng, shape);
      }
      const ImageBounds b = region_bounds(p);
      const PositionSet want = position_set(p, b);
      std::vector<Point2> pts;
      for (const auto& w : want) pts.push_back({w.first, w.second});
      const SynthesisResult r = synthesize(CentroidSet(pts, b), nullptr, cfg);
      clean[shape] += position_set(r.program, b) == want;

      const double sigma = 0.05 * std::min(p.x_expr.coef_i, p.y_expr.coef_j);
      std::normal_distribution<double> noise(0.0, sigma);
      std::vector<Point2> jittered;
      for (const auto& q : pts) {
        jittered.push_back({std::clamp(q.x + noise(rng), 0.0, b.width - 1.0),
                            std::clamp(q.y + noise(rng), 0.0, b.height - 1.0)});
      }
      try {
        const SynthesisResult rj = synthesize(CentroidSet(jittered, b), nullptr, cfg);
        const double tol = std::min(p.x_expr.coef_i, p.y_expr.coef_j) / 3.0;
        noisy[shape] += matches(want, execute(rj.program, b), tol);
      } catch (const Error&) {
      }
    }
  }
  bool pass = true;
  for (int s = 0; s < 3; ++s) pass = pass && clean[s] == per_shape && noisy[s] * 10 >= 9 * per_shape;
  return {pass, fmt("noiseless rect/tri/trap %d/%d/%d (need 100 each), sigma 5%% %d/%d/%d (need >= 90 each), "
                    "%d unidentifiable regions redrawn",
                    clean[0], clean[1], clean[2], noisy[0], noisy[1], noisy[2], rejected)};
}

Outcome attribute_recovery() {
  struct Pattern {
    std::string name;
    std::function<int(int, int)> variant;
  };
  const std::vector<Pattern> patterns{
      {"checkerboard", [](int i, int j) { return (i + j) % 2; }},
      {"stripes-2", [](int i, int) { return i % 2; }},
      {"stripes-3", [](int i, int) { return i % 3 == 0 ? 1 : 0; }},
      {"row-stripes-3", [](int, int j) { return j % 3 == 0 ? 1 : 0; }},
      {"conjunction-2x2", [](int i, int j) { return i % 2 == 0 && j % 2 == 0 ? 1 : 0; }},
      {"conjunction-2x3", [](int i, int j) { return i % 2 == 0 && j % 3 == 0 ? 1 : 0; }},
  };
  const PatchDistance dist{7};
  const int t = 16;
  int ok = 0;
  int total = 0;
  double smallest_gap = 1.0;
  std::string failures;
  for (const Pattern& pat : patterns) {
    for (int n = 4; n <= 6; ++n) {
      ++total;
      // Group 1 tiles are the group 0 tile brightened by 64.
      RasterImage image = tiled_image(n, n, t, t);
      for (int y = 0; y < n * t; ++y) {
        for (int x = 0; x < n * t; ++x) {
          if (pat.variant(x / t, y / t) == 0) continue;
          const Rgb c = image.at(x, y);
          image.set(x, y, {clamp8(c[0] + 64), clamp8(c[1] + 64), clamp8(c[2] + 64)});
        }
      }
      std::vector<Point2> pts;
      std::vector<LatticeIndex> sites;
      std::vector<long> truth;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          pts.push_back({i * t + 7.0, j * t + 7.0});
          sites.push_back({i, j});
          truth.push_back(pat.variant(i, j));
        }
      }
      const CentroidSet c(pts, image.bounds());
      const std::size_t m = pts.size();
      std::vector<double> d(m * m, 0.0);
      for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < m; ++q) {
          if (p != q) d[p * m + q] = dist(image, c[p], c[q]);
        }
      }
      double intra = 0.0;
      double inter = 1e300;
      for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = p + 1; q < m; ++q) {
          const double v = d[p * m + q];
          if (truth[p] == truth[q]) intra = std::max(intra, v);
          else inter = std::min(inter, v);
        }
      }
      smallest_gap = std::min(smallest_gap, inter - intra);

      const AttributeSearchResult r = attribute_search(c, image, sites, {}, dist);
      std::vector<long> labels;
      for (const auto& s : sites) labels.push_back(r.expr.evaluate(s));
      const AttributeOracle o = exhaustive_attribute_search(sites, d, 10.0, 3, 2, 5, 8);
      const bool good = canonical_partition(labels) == canonical_partition(truth) &&
                        o.partition == canonical_partition(truth) &&
                        std::abs(r.cost - o.cost) <= 1e-9 * std::max(1.0, std::abs(o.cost));
      ok += good;
      if (!good) failures += " " + pat.name + "@" + std::to_string(n);
    }
  }
  return {ok == total && smallest_gap >= 0.2,
          fmt("%d/%d patterns on 4x4..6x6 match truth and the exhaustive oracle, smallest inter-minus-intra patch distance %.3f (need >= 0.2)%s",
              ok, total, smallest_gap, failures.c_str())};
}

Outcome program_round_trip() {
  Rng rng(1005);
  SynthConfig cfg;
  cfg.attributes = false;
  int synth_ok = 0;
  for (int t = 0; t < 100; ++t) {
    const SynthCase sc = random_synth_case(rng);
    const PositionSet want = position_set(sc.program, sc.bounds);
    std::vector<Point2> pts;
    for (const auto& w : want) pts.push_back({w.first, w.second});
    try {
      const SynthesisResult r = synthesize(CentroidSet(pts, sc.bounds), nullptr, cfg);
      synth_ok += position_set(r.program, sc.bounds) == want;
    } catch (const Error&) {
    }
  }
  int parse_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    const RegularityProgram p = random_program(rng);
    parse_ok += parse_program(print_program(p)) == p;
  }
  return {synth_ok == 100 && parse_ok == 1000,
          fmt("synthesize(execute(p)) %d/100, parse(print(p)) %d/1000 (need all)", synth_ok, parse_ok)};
}

Outcome tiled_exactness() {
  const int t = 16;
  const int cols = 5;
  const int rows = 4;
  const RasterImage truth = tiled_image(cols, rows, t, t);
  const RegularityProgram p = grid_program(cols, rows, t, t);
  int exact = 0;
  for (int i = 0; i < cols; ++i) {
    for (int j = 0; j < rows; ++j) {
      RasterImage img = truth;
      erase_rect(img, i * t, j * t, t, t);
      exact += inpaint(img, p) == truth;
    }
  }
  int extra_ok = 0;
  const std::array<Extension, 4> sides{Extension{t, 0, 0, 0, 0}, Extension{0, t, 0, 0, 0},
                                       Extension{0, 0, t, 0, 0}, Extension{0, 0, 0, t, 0}};
  for (const Extension& e : sides) {
    const RasterImage want = tiled_image(cols + (e.left + e.right) / t, rows + (e.top + e.bottom) / t, t, t);
    extra_ok += extrapolate(truth, p, e) == want;
  }

  // Per-tile brightness noise: the painted tile is compared with the clean
  // tile, and also with the noisy one it replaced.
  Rng rng(1006);
  double worst_ratio = 0.0;
  double worst_vs_noisy = 0.0;
  std::string per_a;
  for (int a : {2, 5, 10}) {
    double worst = 0.0;
    double worst_noisy = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const RasterImage noisy = noisy_tiles(truth, cols, rows, t, a, rng);
      const int i = uniform_int(rng, 0, cols - 1);
      const int j = uniform_int(rng, 0, rows - 1);
      RasterImage img = noisy;
      erase_rect(img, i * t, j * t, t, t);
      const RasterImage out = inpaint(img, p);
      worst = std::max(worst, mean_l1(out, truth, i * t, j * t, t, t));
      worst_noisy = std::max(worst_noisy, mean_l1(out, noisy, i * t, j * t, t, t));
    }
    worst_ratio = std::max(worst_ratio, worst / a);
    worst_vs_noisy = std::max(worst_vs_noisy, worst_noisy / a);
    per_a += fmt(" a=%d: %.2f (vs noisy %.2f);", a, worst, worst_noisy);
  }
  const bool pass = exact == cols * rows && extra_ok == 4 && worst_ratio <= 1.0;
  return {pass, fmt("inpaint exact %d/%d, one-period extrapolation exact %d/4 sides, noisy mean L1 vs clean tile:%s "
                    "worst L1/a %.2f (need <= 1)",
                    exact, cols * rows, extra_ok, per_a.c_str(), worst_ratio)};
}

// Flat background with small objects, each displaced by an integer shift.
struct EditFixture {
  RasterImage image;
  RegularityProgram program;
  std::vector<Point2> detected;
};

EditFixture displaced_objects(const std::vector<std::pair<int, int>>& shifts) {
  const int t = 20;
  EditFixture f{RasterImage(5 * t, 4 * t, {30, 30, 40}), grid_program(5, 4, t, t), {}};
  std::size_t k = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j, ++k) {
      const int cx = i * t + 9 + shifts[k].first;
      const int cy = j * t + 9 + shifts[k].second;
      for (int y = cy - 4; y <= cy + 4; ++y) {
        for (int x = cx - 4; x <= cx + 4; ++x) {
          f.image.set(x, y, {clamp8(200 + (x - cx)), 60, clamp8(100 + (y - cy))});
        }
      }
      f.detected.push_back({static_cast<double>(cx), static_cast<double>(cy)});
    }
  }
  return f;
}

Outcome regularity_editing() {
  Rng rng(1007);
  double worst = 0.0;
  int snapped = 0;
  int gain0_objects = 0;
  int appearance_ok = 0;
  const int trials = 10;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<std::pair<int, int>> shifts;
    for (int k = 0; k < 20; ++k) shifts.push_back({uniform_int(rng, -2, 2), uniform_int(rng, -2, 2)});
    const EditFixture f = displaced_objects(shifts);
    const CentroidSet c(f.detected, f.image.bounds());
    const EditResult two = edit_regularity(f.image, f.program, c, 2.0);
    for (std::size_t k = 0; k < f.detected.size(); ++k) {
      if (!two.positions[k]) continue;
      const Point2 ideal = *two.ideal[k];
      worst = std::max({worst, std::abs(two.positions[k]->x - (ideal.x + 2 * (f.detected[k].x - ideal.x))),
                        std::abs(two.positions[k]->y - (ideal.y + 2 * (f.detected[k].y - ideal.y)))});
    }
    const EditResult zero = edit_regularity(f.image, f.program, c, 0.0);
    bool all = true;
    for (std::size_t k = 0; k < f.detected.size(); ++k) {
      ++gain0_objects;
      if (zero.positions[k] && zero.ideal[k] && *zero.positions[k] == *zero.ideal[k]) {
        ++snapped;
      } else {
        all = false;
      }
    }
    // The snapped image shows every object on its ideal site.
    const EditFixture ideal = displaced_objects(std::vector<std::pair<int, int>>(20, {0, 0}));
    for (const auto& q : ideal.detected) {
      for (int dy = -4; dy <= 4 && all; ++dy) {
        for (int dx = -4; dx <= 4; ++dx) {
          const int x = static_cast<int>(q.x) + dx;
          const int y = static_cast<int>(q.y) + dy;
          if (zero.image.at(x, y) != ideal.image.at(x, y)) all = false;
        }
      }
    }
    appearance_ok += all;
  }
  const bool pass = worst <= 1.0 && snapped == gain0_objects && appearance_ok == trials;
  return {pass, fmt("gain 2 worst deviation %.2f px (limit 1), gain 0 snapped %d/%d centroids, "
                    "snapped images pixel-exact %d/%d",
                    worst, snapped, gain0_objects, appearance_ok, trials)};
}

Outcome recurrence() {
  const int t = 16;
  const int cols = 5;
  const int rows = 4;
  const RasterImage truth = tiled_image(cols, rows, t, t);
  const RegularityProgram p = grid_program(cols, rows, t, t);
  int deterministic = 0;
  int exact = 0;
  int cases = 0;
  double worst_ratio = 0.0;
  Rng rng(1008);
  for (int i = 0; i + 1 < cols; ++i) {
    for (int j = 0; j < rows; ++j) {
      for (bool vertical : {false, true}) {
        if (vertical && j + 1 >= rows) continue;
        ++cases;
        const int w = vertical ? t : 2 * t;
        const int h = vertical ? 2 * t : t;
        RasterImage img = truth;
        erase_rect(img, i * t, j * t, w, h);
        set_worker_count(1);
        const RasterImage one = inpaint(img, p);
        set_worker_count(4);
        const RasterImage four = inpaint(img, p);
        exact += one == truth;

        const int a = 10;
        const RasterImage noisy = noisy_tiles(truth, cols, rows, t, a, rng);
        RasterImage nimg = noisy;
        erase_rect(nimg, i * t, j * t, w, h);
        set_worker_count(1);
        const RasterImage n1 = inpaint(nimg, p);
        set_worker_count(4);
        const RasterImage n4 = inpaint(nimg, p);
        set_worker_count(0);
        deterministic += one == four && n1 == n4;
        // Each erased object on its own.
        const int i2 = vertical ? i : i + 1;
        const int j2 = vertical ? j + 1 : j;
        worst_ratio = std::max({worst_ratio, mean_l1(n1, truth, i * t, j * t, t, t) / a,
                                mean_l1(n1, truth, i2 * t, j2 * t, t, t) / a});
      }
    }
  }
  const bool pass = deterministic == cases && exact == cases && worst_ratio <= 1.0;
  return {pass, fmt("identical across 1 and 4 workers %d/%d, noiseless pairs exact %d/%d, "
                    "noise a=10 worst per-object L1/a %.2f (need <= 1)",
                    deterministic, cases, exact, cases, worst_ratio)};
}

Outcome end_to_end() {
  const int t = 24;
  const int n = 5;
  const auto dir = std::filesystem::temp_directory_path() / "regsynth_acceptance";
  std::filesystem::create_directories(dir);
  const RasterImage img = tiled_image(n, n, t, t);
  write_png(img, dir / "tiles.png");

  const auto t0 = Clock::now();
  std::ostringstream out;
  std::ostringstream err;
  const auto s = [](const std::filesystem::path& p) { return p.string(); };
  int code = run_cli({"detect", s(dir / "tiles.png"), "-o", s(dir / "c.json")}, out, err);
  if (code == 0) code = run_cli({"synth", s(dir / "c.json"), "--image", s(dir / "tiles.png"), "-o", s(dir / "p.rpg")}, out, err);
  if (code == 0) code = run_cli({"render", s(dir / "c.json"), s(dir / "p.rpg"), "-o", s(dir / "r.svg")}, out, err);
  const double elapsed = seconds_since(t0);
  if (code != 0) return {false, "pipeline failed: " + err.str()};

  std::ifstream in(dir / "r.svg");
  std::stringstream svg;
  svg << in.rdbuf();
  const std::string text = svg.str();
  const std::regex circle(R"re(<circle class="draw" cx="([-0-9.]+)" cy="([-0-9.]+)")re");
  std::vector<Point2> drawn;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), circle); it != std::sregex_iterator(); ++it) {
    drawn.push_back({std::stod((*it)[1]), std::stod((*it)[2])});
  }
  // Every tile center has its own draw within 2 px, and nothing else is drawn.
  double worst = 0.0;
  std::set<std::size_t> used;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point2 centre{i * t + (t - 1) / 2.0, j * t + (t - 1) / 2.0};
      double best = 1e300;
      std::size_t pick = drawn.size();
      for (std::size_t k = 0; k < drawn.size(); ++k) {
        if (used.count(k)) continue;
        const double dd = std::hypot(drawn[k].x - centre.x, drawn[k].y - centre.y);
        if (dd < best) {
          best = dd;
          pick = k;
        }
      }
      if (pick < drawn.size()) used.insert(pick);
      worst = std::max(worst, best);
    }
  }
  const bool pass = elapsed <= 10.0 && drawn.size() == static_cast<std::size_t>(n * n) && worst <= 2.0;
  return {pass, fmt("%.2f s (limit 10 s), %zu draws for %d tiles, worst center error %.2f px (limit 2)",
                    elapsed, drawn.size(), n * n, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"lattice recovery", lattice_recovery},
      {"lattice cost oracle", lattice_oracle},
      {"condition recovery", condition_recovery},
      {"attribute recovery", attribute_recovery},
      {"program round trip", program_round_trip},
      {"tiled-image exactness", tiled_exactness},
      {"regularity editing", regularity_editing},
      {"recurrence determinism", recurrence},
      {"end-to-end pipeline", end_to_end},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
