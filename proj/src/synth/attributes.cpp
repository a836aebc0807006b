#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <tuple>
#include <unordered_set>
#include <variant>

#include "regsynth/error.hpp"
#include "regsynth/parallel.hpp"
#include "regsynth/synth.hpp"

namespace regsynth {
namespace {

// Sort position of an integer: 0, 1, -1, 2, -2, ...
int preference(int v) { return v == 0 ? 0 : (v > 0 ? 2 * v - 1 : -2 * v); }

// Non-constant linear expressions in search order: lower total coefficient
// magnitude first, then by constant, j and i coefficient preference.
std::vector<LinearExpr> ordered_exprs(int range) {
  std::vector<LinearExpr> out;
  for (int a = -range; a <= range; ++a) {
    for (int b = -range; b <= range; ++b) {
      if (a == 0 && b == 0) continue;
      for (int c = -range; c <= range; ++c) out.push_back({a, b, c});
    }
  }
  auto key = [](const LinearExpr& e) {
    return std::make_tuple(std::abs(e.coef_i) + std::abs(e.coef_j) + std::abs(e.constant),
                           preference(e.constant), preference(e.coef_j), preference(e.coef_i));
  };
  std::sort(out.begin(), out.end(),
            [&](const LinearExpr& x, const LinearExpr& y) { return key(x) < key(y); });
  return out;
}

// Calls fn(template) for every candidate, in tie-break order; stops early
// when fn returns false.
void for_each_template(const SynthConfig& config, const std::function<bool(const AttributeExpr&)>& fn) {
  const auto exprs = ordered_exprs(config.coeff_range);
  std::vector<attr::Modulo> modulo;
  for (const LinearExpr& e : exprs) {
    for (int m = config.modulus_min; m <= config.modulus_max; ++m) modulo.push_back({e, m});
  }

  if (!fn(attr::Constant{})) return;
  for (const auto& t : modulo) {
    if (!fn(t)) return;
  }
  for (const LinearExpr& e : exprs) {
    if (!fn(attr::IsZero{e})) return;
  }
  for (const LinearExpr& e : exprs) {
    for (int d = config.modulus_min; d <= config.modulus_max; ++d) {
      if (!fn(attr::Quotient{e, d})) return;
    }
  }
  for (std::size_t a = 0; a < modulo.size(); ++a) {
    for (std::size_t b = a + 1; b < modulo.size(); ++b) {
      if (!fn(attr::ModuloBoth{modulo[a].expr, modulo[a].modulus, modulo[b].expr, modulo[b].modulus})) return;
    }
  }
  for (std::size_t a = 0; a < exprs.size(); ++a) {
    for (std::size_t b = a + 1; b < exprs.size(); ++b) {
      if (!fn(attr::IsZeroBoth{exprs[a], exprs[b]})) return;
    }
  }
}

// Keeps at most `limit` points: a square block of lattice sites around the
// median site.
std::vector<std::size_t> sample_points(std::span<const LatticeIndex> indices, std::size_t limit) {
  std::vector<std::size_t> all(indices.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  if (indices.size() <= limit) return all;
  std::vector<int> is;
  std::vector<int> js;
  for (const auto& p : indices) {
    is.push_back(p.i);
    js.push_back(p.j);
  }
  std::nth_element(is.begin(), is.begin() + static_cast<long>(is.size() / 2), is.end());
  std::nth_element(js.begin(), js.begin() + static_cast<long>(js.size() / 2), js.end());
  const int ci = is[is.size() / 2];
  const int cj = js[js.size() / 2];
  std::vector<std::size_t> best;
  for (int h = 0;; ++h) {
    std::vector<std::size_t> pick;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (std::abs(indices[k].i - ci) <= h && std::abs(indices[k].j - cj) <= h) pick.push_back(k);
    }
    if (pick.size() > limit) break;
    best = std::move(pick);
    if (best.size() == indices.size()) break;
  }
  return best;
}

}  // namespace

std::vector<AttributeExpr> attribute_templates(const SynthConfig& config) {
  config.validate();
  std::vector<AttributeExpr> out;
  for_each_template(config, [&](const AttributeExpr& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

AttributeSearchResult attribute_search(const CentroidSet& centroids, const RasterImage& image,
                                       std::span<const LatticeIndex> indices,
                                       const SynthConfig& config, const PatchDistance& dist,
                                       std::span<const LatticeIndex> domain) {
  config.validate();
  if (indices.size() != centroids.size()) {
    fail("invalid_indices", "one lattice index per centroid is required",
         {{"centroids", centroids.size()}, {"indices", indices.size()}});
  }
  AttributeSearchResult best;
  best.expr = attr::Constant{};
  const std::vector<std::size_t> chosen = sample_points(indices, config.attribute_max_points);
  const std::size_t n = chosen.size();
  if (n < 2) return best;

  // Pairwise patch distances, upper triangle.
  std::vector<double> d(n * n, 0.0);
  parallel_for(n, [&](std::size_t a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      d[a * n + b] = dist(image, centroids[chosen[a]], centroids[chosen[b]]);
    }
  });
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) total += d[a * n + b];
  }
  best.cost = total + config.mu;
  best.groups = 1;

  std::vector<LatticeIndex> sites;
  for (std::size_t k : chosen) sites.push_back(indices[k]);

  std::unordered_set<std::string> seen;
  std::vector<long> labels(n);
  std::string key(n, '\0');
  std::vector<std::vector<std::size_t>> members;
  for_each_template(config, [&](const AttributeExpr& t) {
    ++best.templates_evaluated;
    if (t.is_constant()) return true;
    for (std::size_t k = 0; k < n; ++k) labels[k] = t.evaluate(sites[k]);

    // Canonical relabeling by first occurrence.
    std::vector<long> order;
    for (std::size_t k = 0; k < n; ++k) {
      if (labels[k] < 0) return true;
      auto it = std::find(order.begin(), order.end(), labels[k]);
      if (it == order.end()) {
        if (static_cast<int>(order.size()) >= config.max_groups) return true;
        order.push_back(labels[k]);
        it = order.end() - 1;
      }
      key[k] = static_cast<char>(it - order.begin());
    }
    const int groups = static_cast<int>(order.size());
    if (groups < 2) return true;
    // Only quotients can leave the sample's label range on other sites.
    if (!domain.empty() && std::holds_alternative<attr::Quotient>(t.value())) {
      std::vector<long> values;
      for (const LatticeIndex& p : domain) {
        const long v = t.evaluate(p);
        if (v < 0) return true;
        if (std::find(values.begin(), values.end(), v) == values.end()) {
          if (static_cast<int>(values.size()) >= config.max_groups) return true;
          values.push_back(v);
        }
      }
    }
    if (!seen.insert(key).second) return true;

    members.assign(static_cast<std::size_t>(groups), {});
    for (std::size_t k = 0; k < n; ++k) members[static_cast<unsigned char>(key[k])].push_back(k);
    double same = 0.0;
    for (const auto& g : members) {
      for (std::size_t x = 0; x < g.size(); ++x) {
        for (std::size_t y = x + 1; y < g.size(); ++y) same += d[g[x] * n + g[y]];
      }
    }
    const double cost = 2.0 * same - total + config.mu * groups;
    const double tol = 1e-9 * std::max(1.0, std::abs(best.cost));
    if (cost < best.cost - tol || (std::abs(cost - best.cost) <= tol && groups < best.groups)) {
      best.expr = t;
      best.cost = cost;
      best.groups = groups;
    }
    return true;
  });
  return best;
}

}  // namespace regsynth
