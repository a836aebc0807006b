#include <algorithm>
#include <limits>
#include <vector>

#include "regsynth/error.hpp"
#include "regsynth/geometry.hpp"

namespace regsynth {
namespace {

// Shortest augmenting path with dual potentials (Kuhn-Munkres in the
// Jonker-Volgenant formulation), O(rows^2 * cols). Requires rows <= cols.
std::vector<long> hungarian(std::span<const double> a, std::size_t n, std::size_t m) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<long> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<long>(j - 1);
  }
  return row_to_col;
}

// Nearest-neighbour map from `from` into `to`; returns it only when it is
// injective, in which case every term of the matching sits at its own
// minimum and the matching is optimal.
std::optional<std::vector<std::size_t>> injective_nearest(std::span<const Point2> from,
                                                          std::span<const Point2> to) {
  NearestPointIndex index(to);
  std::vector<std::size_t> target(from.size());
  std::vector<char> taken(to.size(), 0);
  for (std::size_t k = 0; k < from.size(); ++k) {
    target[k] = *index.nearest(from[k]);
    if (taken[target[k]]) return std::nullopt;
    taken[target[k]] = 1;
  }
  return target;
}

}  // namespace

std::vector<long> solve_assignment(std::span<const double> costs, std::size_t rows,
                                   std::size_t cols) {
  if (rows == 0 || cols == 0) return std::vector<long>(rows, -1);
  if (rows <= cols) return hungarian(costs, rows, cols);
  std::vector<double> transposed(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) transposed[c * rows + r] = costs[r * cols + c];
  }
  const std::vector<long> col_to_row = hungarian(transposed, cols, rows);
  std::vector<long> row_to_col(rows, -1);
  for (std::size_t c = 0; c < cols; ++c) {
    if (col_to_row[c] >= 0) row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<long>(c);
  }
  return row_to_col;
}

Assignment min_cost_assignment(std::span<const Point2> left, std::span<const Point2> right) {
  if (left.empty() || right.empty()) fail("empty_point_set", "empty point set");

  Assignment result;
  const bool left_smaller = left.size() <= right.size();
  if (auto fast = left_smaller ? injective_nearest(left, right) : injective_nearest(right, left)) {
    for (std::size_t k = 0; k < fast->size(); ++k) {
      if (left_smaller) {
        result.pairs.emplace_back(k, (*fast)[k]);
      } else {
        result.pairs.emplace_back((*fast)[k], k);
      }
    }
  } else {
    std::vector<double> costs(left.size() * right.size());
    for (std::size_t r = 0; r < left.size(); ++r) {
      for (std::size_t c = 0; c < right.size(); ++c) {
        costs[r * right.size() + c] = squared_distance(left[r], right[c]);
      }
    }
    const std::vector<long> match = solve_assignment(costs, left.size(), right.size());
    for (std::size_t r = 0; r < match.size(); ++r) {
      if (match[r] >= 0) result.pairs.emplace_back(r, static_cast<std::size_t>(match[r]));
    }
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  for (const auto& [l, r] : result.pairs) result.cost += squared_distance(left[l], right[r]);
  return result;
}

}  // namespace regsynth
