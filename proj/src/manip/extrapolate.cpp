#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "recurrent.hpp"
#include "regsynth/error.hpp"

namespace regsynth {
namespace {

// e(i + si, j + sj)
LinearExpr shifted(LinearExpr e, int si, int sj) {
  e.constant += e.coef_i * si + e.coef_j * sj;
  return e;
}

AttributeExpr shifted(const AttributeExpr& a, int si, int sj) {
  return std::visit(
      [&](const auto& v) -> AttributeExpr {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, attr::Constant>) {
          return v;
        } else if constexpr (std::is_same_v<T, attr::Quotient>) {
          return attr::Quotient{shifted(v.expr, si, sj), v.divisor};
        } else if constexpr (std::is_same_v<T, attr::IsZero>) {
          return attr::IsZero{shifted(v.expr, si, sj)};
        } else if constexpr (std::is_same_v<T, attr::IsZeroBoth>) {
          return attr::IsZeroBoth{shifted(v.first, si, sj), shifted(v.second, si, sj)};
        } else if constexpr (std::is_same_v<T, attr::Modulo>) {
          return attr::Modulo{shifted(v.expr, si, sj), v.modulus};
        } else {
          return attr::ModuloBoth{shifted(v.first, si, sj), v.first_modulus,
                                  shifted(v.second, si, sj), v.second_modulus};
        }
      },
      a.value());
}

// Same draws with both loop ranges starting at 0.
RegularityProgram rebased(const RegularityProgram& p) {
  const int si = p.outer.lo;
  const int sj = p.inner.lo;
  RegularityProgram q = p;
  q.outer = {0, p.outer.hi - si};
  q.inner = {0, p.inner.hi - sj};
  for (LinearExpr& c : q.conditions) c = shifted(c, si, sj);
  q.x_expr = shifted(p.x_expr, si, sj);
  q.y_expr = shifted(p.y_expr, si, sj);
  q.attribute = shifted(p.attribute, si, sj);
  return q;
}

// Raises condition constants and re-fits the loop bounds that touch the
// original region in fewer than two sites.
RegularityProgram relax_by(const RegularityProgram& program, const std::vector<int>& amounts) {
  RegularityProgram p = program;
  int largest = 0;
  for (std::size_t k = 0; k < p.conditions.size(); ++k) {
    p.conditions[k].constant += amounts[k];
    largest = std::max(largest, amounts[k]);
  }
  const auto original = admitted_indices(program);
  if (original.empty() || largest == 0) return p;

  auto on = [&](auto pred) {
    return std::count_if(original.begin(), original.end(), pred) >= 2;
  };
  const bool facet_ilo = on([&](const LatticeIndex& q) { return q.i == program.outer.lo; });
  const bool facet_ihi = on([&](const LatticeIndex& q) { return q.i == program.outer.hi - 1; });
  const bool facet_jlo = on([&](const LatticeIndex& q) { return q.j == program.inner.lo; });
  const bool facet_jhi = on([&](const LatticeIndex& q) { return q.j == program.inner.hi - 1; });

  const int margin = 2 * (largest + std::max(program.outer.hi - program.outer.lo,
                                             program.inner.hi - program.inner.lo)) + 8;
  RegularityProgram wide = p;
  if (!facet_ilo) wide.outer.lo -= margin;
  if (!facet_ihi) wide.outer.hi += margin;
  if (!facet_jlo) wide.inner.lo -= margin;
  if (!facet_jhi) wide.inner.hi += margin;
  const auto grown = admitted_indices(wide);
  if (grown.empty()) return p;
  int ilo = grown.front().i;
  int ihi = ilo;
  int jlo = grown.front().j;
  int jhi = jlo;
  for (const LatticeIndex& q : grown) {
    ilo = std::min(ilo, q.i);
    ihi = std::max(ihi, q.i);
    jlo = std::min(jlo, q.j);
    jhi = std::max(jhi, q.j);
  }
  // A side that runs into the widened bound is unbounded by the
  // conditions; it keeps its original bound.
  if (!facet_ilo && ilo > wide.outer.lo) p.outer.lo = ilo;
  if (!facet_ihi && ihi < wide.outer.hi - 1) p.outer.hi = ihi + 1;
  if (!facet_jlo && jlo > wide.inner.lo) p.inner.lo = jlo;
  if (!facet_jhi && jhi < wide.inner.hi - 1) p.inner.hi = jhi + 1;
  return p;
}

enum class Side { Left, Right, Top, Bottom };

// Relaxes the constraint facing `side` one step at a time while the number
// of in-canvas draws keeps growing.
RegularityProgram relax_toward(const RegularityProgram& program, Side side, ImageBounds bounds) {
  const double xi = program.x_expr.coef_i;
  const double xj = program.x_expr.coef_j;
  const double yi = program.y_expr.coef_i;
  const double yj = program.y_expr.coef_j;
  const double det = xi * yj - xj * yi;
  if (det == 0.0) fail("degenerate_program", "program draws lie on a line; cannot extrapolate");

  const double dir_x = side == Side::Left ? -1.0 : side == Side::Right ? 1.0 : 0.0;
  const double dir_y = side == Side::Top ? -1.0 : side == Side::Bottom ? 1.0 : 0.0;
  // Inward normals in index space: i >= lo, i <= hi - 1, j >= lo, j <= hi - 1,
  // then the conditions.
  std::vector<std::pair<double, double>> normals = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const LinearExpr& c : program.conditions) normals.emplace_back(c.coef_i, c.coef_j);

  std::size_t pick = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < normals.size(); ++k) {
    const auto [a, b] = normals[k];
    // Pixel-space gradient of a*i + b*j is A^-T (a, b); outward is its negation.
    const double nx = -(yj * a - yi * b) / det;
    const double ny = -(-xj * a + xi * b) / det;
    const double len = std::hypot(nx, ny);
    if (len == 0.0) continue;
    const double cosine = (nx * dir_x + ny * dir_y) / len;
    if (cosine > best + 1e-9) {
      best = cosine;
      pick = k;
    }
  }

  auto step = [&](const RegularityProgram& p) {
    RegularityProgram q = p;
    switch (pick) {
      case 0: --q.outer.lo; break;
      case 1: ++q.outer.hi; break;
      case 2: --q.inner.lo; break;
      case 3: ++q.inner.hi; break;
      default: {
        std::vector<int> amounts(p.conditions.size(), 0);
        amounts[pick - 4] = 1;
        q = relax_by(p, amounts);
      }
    }
    return q;
  };

  RegularityProgram current = program;
  std::size_t count = execute(current, bounds).size();
  for (int guard = 0; guard < 4096; ++guard) {
    RegularityProgram next = step(current);
    const std::size_t n = execute(next, bounds).size();
    if (n <= count) break;
    current = std::move(next);
    count = n;
  }
  return current;
}

}  // namespace

RegularityProgram relax_conditions(const RegularityProgram& program, int amount) {
  if (amount < 0) fail("invalid_extension", "condition relaxation must be non-negative", {{"amount", amount}});
  return relax_by(program, std::vector<int>(program.conditions.size(), amount));
}

ExtrapolationResult extrapolate_program(const RasterImage& image, const RegularityProgram& program,
                                        const Extension& ext, const CompositeConfig& config) {
  program.validate();
  if (ext.left < 0 || ext.right < 0 || ext.top < 0 || ext.bottom < 0 || ext.relax_conditions < 0) {
    fail("invalid_extension", "extension amounts must be non-negative",
         {{"left", ext.left}, {"right", ext.right}, {"top", ext.top}, {"bottom", ext.bottom},
          {"relax_conditions", ext.relax_conditions}});
  }
  if (ext.empty()) return {image, program, {}};

  const int w = image.width() + ext.left + ext.right;
  const int h = image.height() + ext.top + ext.bottom;
  const ImageBounds bounds{w, h};
  RasterImage canvas(w, h, {0, 0, 0}, false);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!image.valid(x, y)) continue;
      canvas.set(x + ext.left, y + ext.top, image.at(x, y));
      canvas.set_valid(x + ext.left, y + ext.top, true);
    }
  }
  const double fx0 = ext.left;
  const double fy0 = ext.top;
  const double fx1 = ext.left + image.width() - 1;
  const double fy1 = ext.top + image.height() - 1;
  auto in_frame = [&](const Point2& p) {
    return p.x >= fx0 && p.x <= fx1 && p.y >= fy0 && p.y <= fy1;
  };

  RegularityProgram p = program;
  p.x_expr.constant += ext.left;
  p.y_expr.constant += ext.top;
  std::set<LatticeIndex> existing;
  for (const DrawCommand& d : execute(p, bounds)) {
    if (in_frame(d.position)) existing.insert(d.index);
  }

  RegularityProgram q = p;
  if (ext.relax_conditions > 0) q = relax_conditions(q, ext.relax_conditions);
  if (ext.left > 0) q = relax_toward(q, Side::Left, bounds);
  if (ext.right > 0) q = relax_toward(q, Side::Right, bounds);
  if (ext.top > 0) q = relax_toward(q, Side::Top, bounds);
  if (ext.bottom > 0) q = relax_toward(q, Side::Bottom, bounds);

  const auto draws = execute(q, bounds);
  std::vector<std::size_t> fresh;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    if (!existing.count(draws[k].index)) fresh.push_back(k);
  }
  if (fresh.empty()) fail("no_new_draws", "no new draws in extension");

  std::vector<Point2> positions;
  for (const DrawCommand& d : draws) positions.push_back(d.position);
  const LabelMap cells = voronoi_partition(positions, bounds);

  // New objects over existing content: their fundamental tile within the
  // cell is repainted.
  const double ux = q.x_expr.coef_i;
  const double uy = q.y_expr.coef_i;
  const double vx = q.x_expr.coef_j;
  const double vy = q.y_expr.coef_j;
  const double det = ux * vy - uy * vx;
  for (std::size_t k : fresh) {
    const Point2 c = draws[k].position;
    if (!in_frame(c)) continue;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (cells.at(x, y) != static_cast<std::int32_t>(k)) continue;
        const double dx = x - c.x;
        const double dy = y - c.y;
        const double alpha = (dx * vy - dy * vx) / det;
        const double beta = (ux * dy - uy * dx) / det;
        if (alpha >= -0.5 && alpha < 0.5 && beta >= -0.5 && beta < 0.5) canvas.erase(x, y);
      }
    }
  }

  // Paint nearest to the original frame first, then larger holes first.
  const auto holes = detail::holes_per_cell(canvas, cells, draws.size());
  std::vector<std::tuple<double, long, std::size_t>> order;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    if (holes[k] == 0) continue;
    const Point2 c = draws[k].position;
    const double ox = std::max({fx0 - c.x, 0.0, c.x - fx1});
    const double oy = std::max({fy0 - c.y, 0.0, c.y - fy1});
    order.emplace_back(std::hypot(ox, oy), -static_cast<long>(holes[k]), k);
  }
  std::sort(order.begin(), order.end());
  EditPlan plan;
  plan.kind = EditKind::Extrapolate;
  for (const auto& [d, neg, k] : order) plan.tasks.push_back({k, holes[k]});

  ExtrapolationResult result;
  result.image = diffuse_fill(detail::run_plan(canvas, draws, cells, plan, config));
  result.program = rebased(q);
  for (std::size_t k : fresh) {
    result.new_objects.push_back({draws[k].index.i - q.outer.lo, draws[k].index.j - q.inner.lo});
  }
  return result;
}

RasterImage extrapolate(const RasterImage& image, const RegularityProgram& program,
                        const Extension& extension, const CompositeConfig& config) {
  return extrapolate_program(image, program, extension, config).image;
}

}  // namespace regsynth
