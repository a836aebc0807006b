#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <tuple>

#include "regsynth/detect.hpp"
#include "regsynth/error.hpp"
#include "regsynth/parallel.hpp"
#include "regsynth/synth.hpp"

namespace regsynth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long ceil_div(long a, long b) { return -floor_div(-a, b); }

// Pruning slack: lower bounds are summed in a different order than exact
// costs, so compare with a relative tolerance.
double slack(double best) { return 1e-9 * std::max(1.0, std::abs(best)); }

// In-image lattice points of one model, row by row.
class LatticeRows {
 public:
  LatticeRows(const LatticeModel& m, ImageBounds b) : m_(m), b_(b) {
    jlo_ = ceil_div(-m.by, m.dyj);
    jhi_ = floor_div(static_cast<long>(b.height) - 1 - m.by, m.dyj);
  }

  bool empty_rows() const { return jlo_ > jhi_; }

  bool row_span(long j, long& ilo, long& ihi) const {
    const long o = m_.bx + j * m_.dxj;
    ilo = ceil_div(-o, m_.dxi);
    ihi = floor_div(static_cast<long>(b_.width) - 1 - o, m_.dxi);
    return ilo <= ihi;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (long j = jlo_; j <= jhi_; ++j) {
      long ilo = 0;
      long ihi = 0;
      if (row_span(j, ilo, ihi)) n += static_cast<std::size_t>(ihi - ilo + 1);
    }
    return n;
  }

  // Nearest in-image point with ties resolved to the smallest (j, i).
  bool nearest(const Point2& p, LatticeIndex& best_index, double& best_d) const {
    if (empty_rows()) return false;
    best_d = kInf;
    bool found = false;
    auto visit = [&](long j) {
      long ilo = 0;
      long ihi = 0;
      if (!row_span(j, ilo, ihi)) return;
      const double dy = p.y - static_cast<double>(m_.by + j * m_.dyj);
      const double o = static_cast<double>(m_.bx + j * m_.dxj);
      const long base = static_cast<long>(std::floor((p.x - o) / m_.dxi));
      for (long i : {base, base + 1}) {
        const long c = std::clamp(i, ilo, ihi);
        const double dx = p.x - (o + static_cast<double>(c * m_.dxi));
        const double d = dx * dx + dy * dy;
        const LatticeIndex idx{static_cast<int>(c), static_cast<int>(j)};
        if (!found || d < best_d ||
            (d == best_d && std::tie(idx.j, idx.i) < std::tie(best_index.j, best_index.i))) {
          best_d = d;
          best_index = idx;
          found = true;
        }
      }
    };
    const long j0 = std::clamp(static_cast<long>(std::floor((p.y - m_.by) / m_.dyj)), jlo_, jhi_);
    long down = j0;
    long up = j0 + 1;
    while (down >= jlo_ || up <= jhi_) {
      const double dd = down >= jlo_ ? p.y - static_cast<double>(m_.by + down * m_.dyj) : kInf;
      const double du = up <= jhi_ ? static_cast<double>(m_.by + up * m_.dyj) - p.y : kInf;
      const bool take_down = std::abs(dd) <= std::abs(du);
      const double gap = take_down ? dd : du;
      if (found && gap * gap > best_d) break;
      if (take_down) {
        visit(down--);
      } else {
        visit(up++);
      }
    }
    return found;
  }

 private:
  LatticeModel m_;
  ImageBounds b_;
  long jlo_ = 0;
  long jhi_ = -1;
};

struct Evaluation {
  double cost = kInf;
  double data = kInf;
  std::size_t count = 0;
};

// Full cost; returns early (with cost > cutoff) once the partial sum
// exceeds the cutoff.
Evaluation evaluate(std::span<const Point2> points, ImageBounds bounds, const LatticeModel& m,
                    double lambda, double cutoff = kInf) {
  Evaluation e;
  const LatticeRows rows(m, bounds);
  e.count = rows.count();
  if (e.count == 0) return e;
  const double penalty = lambda * static_cast<double>(e.count);
  if (penalty > cutoff) {
    e.cost = penalty;
    return e;
  }
  double data = 0.0;
  LatticeIndex idx;
  double d = 0.0;
  for (const Point2& p : points) {
    rows.nearest(p, idx, d);
    data += d;
    if (data + penalty > cutoff) {
      e.cost = data + penalty;
      return e;
    }
  }
  e.data = data;
  e.cost = data + penalty;
  return e;
}

bool in_spacing_range(const LatticeModel& m, const SynthConfig& c) {
  return m.dxi >= c.spacing_min && m.dxi <= c.spacing_max && m.dyj >= c.spacing_min &&
         m.dyj <= c.spacing_max;
}

// Shared best-so-far with the total order (cost, tuple).
class Incumbent {
 public:
  double cost() const { return cost_.load(); }

  void offer(const LatticeModel& m, const Evaluation& e) {
    if (e.cost > cost_.load()) return;
    std::lock_guard lock(mutex_);
    if (e.cost < best_.cost || (e.cost == best_.cost && (!has_ || m < model_))) {
      best_ = e;
      model_ = m;
      has_ = true;
      cost_.store(e.cost);
    }
  }

  bool has() const { return has_; }
  const LatticeModel& model() const { return model_; }
  const Evaluation& evaluation() const { return best_; }

 private:
  std::mutex mutex_;
  std::atomic<double> cost_{kInf};
  Evaluation best_;
  LatticeModel model_;
  bool has_ = false;
};

// Integer basis (dxi, 0), (dxj, dyj) spanning the same lattice as v1, v2.
std::optional<LatticeModel> basis_from_vectors(long x1, long y1, long x2, long y2) {
  const long det = x1 * y2 - x2 * y1;
  if (det == 0) return std::nullopt;
  // Extended gcd on the y components.
  long a = y1;
  long b = y2;
  long pa = 1;
  long pb = 0;
  long qa = 0;
  long qb = 1;
  while (b != 0) {
    const long q = floor_div(a, b);
    std::tie(a, b) = std::make_tuple(b, a - q * b);
    std::tie(pa, pb) = std::make_tuple(pb, pa - q * pb);
    std::tie(qa, qb) = std::make_tuple(qb, qa - q * qb);
  }
  long g = a;
  long wx = pa * x1 + qa * x2;
  if (g < 0) {
    g = -g;
    wx = -wx;
  }
  if (g == 0) return std::nullopt;
  LatticeModel m;
  m.dxi = static_cast<int>(std::abs(det) / g);
  m.dyj = static_cast<int>(g);
  m.dxj = static_cast<int>(wx);
  if (m.dxi == 0) return std::nullopt;
  return m;
}

LatticeModel local_refine(std::span<const Point2> points, ImageBounds bounds, LatticeModel start,
                          const SynthConfig& config) {
  LatticeModel best = start.canonical();
  Evaluation best_e = evaluate(points, bounds, best, config.lambda);
  for (int round = 0; round < 16; ++round) {
    LatticeModel round_best = best;
    Evaluation round_e = best_e;
    for (int s0 = -1; s0 <= 1; ++s0)
      for (int s1 = -1; s1 <= 1; ++s1)
        for (int s2 = -1; s2 <= 1; ++s2)
          for (int s3 = -1; s3 <= 1; ++s3)
            for (int s4 = -1; s4 <= 1; ++s4) {
              LatticeModel m{best.bx + s0, best.by + s1, best.dxi + s2, best.dxj + s3,
                             best.dyj + s4};
              if (!in_spacing_range(m, config)) continue;
              m = m.canonical();
              const Evaluation e = evaluate(points, bounds, m, config.lambda, round_e.cost);
              if (e.cost < round_e.cost || (e.cost == round_e.cost && m < round_best)) {
                round_best = m;
                round_e = e;
              }
            }
    if (round_best == best) break;
    best = round_best;
    best_e = round_e;
  }
  return best;
}

}  // namespace

LatticeModel LatticeModel::canonical() const {
  LatticeModel m = *this;
  if (m.dxi <= 0 || m.dyj <= 0) return m;
  const long shift = floor_div(m.by, m.dyj);
  m.by = static_cast<int>(m.by - shift * m.dyj);
  m.bx = static_cast<int>(m.bx - shift * m.dxj);
  // dxj into (-dxi/2, dxi/2]
  const long k = ceil_div(2L * m.dxj - m.dxi, 2L * m.dxi);
  m.dxj = static_cast<int>(m.dxj - k * m.dxi);
  m.bx = static_cast<int>(py_mod(m.bx, m.dxi));
  return m;
}

void SynthConfig::validate() const {
  auto bad = [](const std::string& what) {
    throw Error(ErrorKind::Domain, "invalid_config", "invalid synthesis config: " + what);
  };
  if (!(lambda > 0.0) || !std::isfinite(lambda)) bad("lambda must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu)) bad("mu must be positive");
  if (spacing_min < 2) bad("spacing_min must be at least 2");
  if (spacing_max < spacing_min) bad("spacing_max must not be below spacing_min");
  if (max_groups < 1) bad("max_groups must be at least 1");
  if (coeff_range < 0) bad("coeff_range must be non-negative");
  if (modulus_min < 2 || modulus_max < modulus_min) bad("modulus range must satisfy 2 <= min <= max");
  if (patch_window < 0) bad("patch_window must be non-negative");
}

std::size_t lattice_point_count(const LatticeModel& model, ImageBounds bounds) {
  return LatticeRows(model, bounds).count();
}

std::optional<std::pair<LatticeIndex, double>> nearest_lattice_point(const LatticeModel& model,
                                                                     ImageBounds bounds,
                                                                     const Point2& p) {
  LatticeIndex idx;
  double d = 0.0;
  if (!LatticeRows(model, bounds).nearest(p, idx, d)) return std::nullopt;
  return std::make_pair(idx, d);
}

double lattice_cost(const CentroidSet& centroids, const LatticeModel& model, double lambda) {
  if (model.dxi <= 0 || model.dyj <= 0) {
    fail("invalid_lattice", "lattice spacings must be positive",
         {{"dxi", model.dxi}, {"dyj", model.dyj}});
  }
  return evaluate(centroids.points(), centroids.bounds(), model, lambda).cost;
}

std::vector<LatticeModel> voted_lattice_seeds(const CentroidSet& centroids,
                                              const SynthConfig& config) {
  const auto& pts = centroids.points();
  const auto votes = vote_displacements(pts, 2.0, 4);
  const std::size_t top = std::min<std::size_t>(votes.size(), 5);
  std::set<LatticeModel> spacings;
  for (std::size_t a = 0; a < top; ++a) {
    for (std::size_t b = a + 1; b < top; ++b) {
      const Point2 u = votes[a].mean;
      const Point2 v = votes[b].mean;
      const double cross = u.x * v.y - u.y * v.x;
      const double norms = std::hypot(u.x, u.y) * std::hypot(v.x, v.y);
      if (norms == 0.0 || std::abs(cross) / norms < std::sin(15.0 * std::numbers::pi / 180.0)) continue;
      const auto m = basis_from_vectors(std::lround(u.x), std::lround(u.y), std::lround(v.x),
                                        std::lround(v.y));
      if (m && in_spacing_range(*m, config)) spacings.insert(m->canonical());
    }
  }

  std::set<LatticeModel> seeds;
  for (const LatticeModel& s : spacings) {
    // Origin: the most common residue of the centroids modulo the lattice.
    std::map<std::pair<long, long>, int> residues;
    for (const Point2& p : pts) {
      const long x = std::lround(p.x);
      const long y = std::lround(p.y);
      const long by = py_mod(y, s.dyj);
      const long j = floor_div(y - by, s.dyj);
      const long bx = py_mod(x - j * s.dxj, s.dxi);
      ++residues[{bx, by}];
    }
    std::pair<long, long> mode{0, 0};
    int votes_for_mode = -1;
    for (const auto& [key, n] : residues) {
      if (n > votes_for_mode) {
        mode = key;
        votes_for_mode = n;
      }
    }
    LatticeModel m = s;
    m.bx = static_cast<int>(mode.first);
    m.by = static_cast<int>(mode.second);
    seeds.insert(local_refine(pts, centroids.bounds(), m, config));
  }
  return {seeds.begin(), seeds.end()};
}

LatticeSearchResult lattice_search(const CentroidSet& centroids, const SynthConfig& config) {
  config.validate();
  if (centroids.size() < 4) {
    fail("insufficient_centroids", "insufficient centroids", {{"count", centroids.size()}});
  }
  const auto& pts = centroids.points();
  const ImageBounds bounds = centroids.bounds();
  const double lambda = config.lambda;
  const int smin = config.spacing_min;
  const int smax = config.spacing_max;
  const long width = bounds.width;
  const long height = bounds.height;

  Incumbent best;
  for (const LatticeModel& seed : voted_lattice_seeds(centroids, config)) {
    best.offer(seed, evaluate(pts, bounds, seed, lambda));
  }

  // Level 1: row structure (dyj, by). Each centroid pays at least its
  // squared vertical distance to the nearest in-image row, and every row
  // holds at least floor(W / smax) points.
  struct RowCandidate {
    double bound;
    int dyj;
    int by;
  };
  std::vector<std::pair<int, int>> row_keys;
  for (int dyj = smin; dyj <= smax; ++dyj) {
    for (int by = 0; by < dyj && by < height; ++by) row_keys.emplace_back(dyj, by);
  }
  std::vector<RowCandidate> row_candidates(row_keys.size());
  parallel_for(row_keys.size(), [&](std::size_t k) {
    const auto [dyj, by] = row_keys[k];
    const long rows = floor_div(height - 1 - by, dyj) + 1;
    double ycost = 0.0;
    for (const Point2& p : pts) {
      const long j = std::clamp(std::lround((p.y - by) / dyj), 0L, rows - 1);
      const double dy = p.y - static_cast<double>(by + j * dyj);
      ycost += dy * dy;
    }
    row_candidates[k] = {ycost + lambda * static_cast<double>(rows) * static_cast<double>(width / smax),
                         dyj, by};
  });
  std::sort(row_candidates.begin(), row_candidates.end(), [](const auto& a, const auto& b) {
    return std::tie(a.bound, a.dyj, a.by) < std::tie(b.bound, b.dyj, b.by);
  });

  std::vector<int> spacings;
  for (int d = smin; d <= smax; ++d) spacings.push_back(d);

  for (const RowCandidate& rc : row_candidates) {
    if (rc.bound > best.cost() + slack(best.cost())) break;
    const int dyj = rc.dyj;
    const int by = rc.by;
    const long rows = floor_div(height - 1 - by, dyj) + 1;

    // Per centroid: nearest row, squared distance to it, and squared
    // distance to the second nearest row.
    struct RowFit {
      long row;
      double near2;
      double far2;
      double x;
    };
    std::vector<RowFit> fits;
    fits.reserve(pts.size());
    double ycost = 0.0;
    for (const Point2& p : pts) {
      const long j = std::clamp(std::lround((p.y - by) / dyj), 0L, rows - 1);
      const double dy = p.y - static_cast<double>(by + j * dyj);
      double far2 = kInf;
      for (long jj : {j - 1, j + 1}) {
        if (jj < 0 || jj >= rows) continue;
        const double d = p.y - static_cast<double>(by + jj * dyj);
        far2 = std::min(far2, d * d);
      }
      fits.push_back({j, dy * dy, far2, p.x});
      ycost += dy * dy;
    }
    std::vector<long> occupied;
    for (const RowFit& f : fits) occupied.push_back(f.row);
    std::sort(occupied.begin(), occupied.end());
    occupied.erase(std::unique(occupied.begin(), occupied.end()), occupied.end());
    std::vector<std::size_t> slot(fits.size());
    for (std::size_t k = 0; k < fits.size(); ++k) {
      slot[k] = static_cast<std::size_t>(
          std::lower_bound(occupied.begin(), occupied.end(), fits[k].row) - occupied.begin());
    }

    // Level 2: horizontal spacing. T[r][o] lower-bounds the data cost of
    // occupied row r when its points sit at x = o (mod dxi).
    parallel_for(spacings.size(), [&](std::size_t s) {
      const int dxi = spacings[s];
      const double count_floor = static_cast<double>(rows) * static_cast<double>(width / dxi);
      if (ycost + lambda * count_floor > best.cost() + slack(best.cost())) return;
      std::vector<double> table(occupied.size() * static_cast<std::size_t>(dxi), 0.0);
      for (std::size_t k = 0; k < fits.size(); ++k) {
        const RowFit& f = fits[k];
        double* row = &table[slot[k] * dxi];
        const double r = std::fmod(f.x, static_cast<double>(dxi));
        for (int o = 0; o < dxi; ++o) {
          double t = r - o;
          if (t < 0) t += dxi;
          const double circ = std::min(t, dxi - t);
          row[o] += std::min(f.near2 + circ * circ, f.far2);
        }
      }
      double data_floor = 0.0;
      for (std::size_t r = 0; r < occupied.size(); ++r) {
        data_floor += *std::min_element(&table[r * dxi], &table[r * dxi] + dxi);
      }
      if (data_floor + lambda * count_floor > best.cost() + slack(best.cost())) return;

      // Level 3: shear and horizontal origin.
      const int dxj_lo = (dxi % 2 == 0) ? -dxi / 2 + 1 : -(dxi / 2);
      const int dxj_hi = dxi / 2;
      for (int dxj = dxj_lo; dxj <= dxj_hi; ++dxj) {
        for (int bx = 0; bx < dxi; ++bx) {
          double bound = 0.0;
          for (std::size_t r = 0; r < occupied.size(); ++r) {
            const long o = py_mod(bx + occupied[r] * dxj, dxi);
            bound += table[r * dxi + o];
          }
          const double limit = best.cost() + slack(best.cost());
          if (bound + lambda * count_floor > limit) continue;
          std::size_t count = 0;
          for (long j = 0; j < rows; ++j) {
            const long o = py_mod(bx + j * dxj, dxi);
            if (o <= width - 1) count += static_cast<std::size_t>((width - 1 - o) / dxi + 1);
          }
          if (bound + lambda * static_cast<double>(count) > limit) continue;
          const LatticeModel m{bx, by, dxi, dxj, dyj};
          const Evaluation e = evaluate(pts, bounds, m, lambda, limit);
          if (e.cost <= best.cost()) best.offer(m, e);
        }
      }
    });
  }

  if (!best.has() || !std::isfinite(best.cost())) {
    fail("no_lattice_found", "no lattice found",
         {{"spacing_min", smin}, {"spacing_max", smax}});
  }
  LatticeSearchResult result;
  result.model = best.model();
  result.cost = best.evaluation().cost;
  result.data_term = best.evaluation().data;
  result.lattice_points = best.evaluation().count;
  return result;
}

}  // namespace regsynth
