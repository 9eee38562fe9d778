#include "tpb/scalarize.hpp"

#include <algorithm>
#include <stdexcept>

#include "tpb/bezier.hpp"

namespace tpb {

std::vector<Vec> weight_set(int count, int objective_dim) {
  if (objective_dim < 2) throw ConfigError("weight_set: need at least 2 objectives");
  if (count < objective_dim)
    throw ConfigError("weight_set: count must be >= the number of objectives "
                      "so every unit vector is included");

  if (objective_dim == 2) {
    // Sweep from (1,0) to (0,1).
    std::vector<Vec> weights;
    weights.reserve(count);
    const double denom = static_cast<double>(count - 1);
    for (int k = 0; k < count; ++k) {
      Vec w(2);
      w[0] = static_cast<double>(count - 1 - k) / denom;
      w[1] = static_cast<double>(k) / denom;
      weights.push_back(std::move(w));
    }
    return weights;
  }

  // Lattice design; unit-vector first ordering comes from reversing the
  // ascending-lexicographic grid.
  auto grid = simplex_grid(objective_dim, count - objective_dim, false);
  std::reverse(grid.begin(), grid.end());
  return grid;
}

double weighted_sum(const Vec& w, const Vec& f) {
  if (w.size() != f.size())
    throw std::invalid_argument("weighted_sum: dimension mismatch");
  return w.dot(f);
}

Vec normalize(const Vec& f, const RefPoints& ref) {
  Vec out(f.size());
  for (int m = 0; m < f.size(); ++m) {
    double denom = ref.nadir[m] - ref.ideal[m];
    if (denom < 1e-12) denom = 1.0; // degenerate-dimension guard
    out[m] = (f[m] - ref.ideal[m]) / denom;
  }
  return out;
}

double normalized_weighted_sum(const Vec& w, const Vec& f, const RefPoints& ref) {
  return weighted_sum(w, normalize(f, ref));
}

RefPoints update_ref_points(const EvaluationLedger& ledger) {
  if (ledger.empty())
    throw std::invalid_argument("update_ref_points: empty ledger");
  RefPoints ref;
  ref.ideal = ledger[0].f;
  ref.nadir = ledger[0].f;
  for (const auto& entry : ledger) {
    ref.ideal = ref.ideal.cwiseMin(entry.f);
    ref.nadir = ref.nadir.cwiseMax(entry.f);
  }
  return ref;
}

} // namespace tpb
