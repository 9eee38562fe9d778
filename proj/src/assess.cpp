#include "tpb/assess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tpb/scalarize.hpp"

namespace tpb {

namespace {
bool vec_equal(const Vec& a, const Vec& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}
} // namespace

bool dominates(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dominates: dimension mismatch");
  bool strictly_better = false;
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly_better = true;
  }
  return strictly_better;
}

std::vector<Vec> nondominated_filter(const std::vector<Vec>& points) {
  if (points.empty()) return {};

  auto lex_less = [](const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  };

  if (points[0].size() == 2) {
    // Sort by f1 then f2 and keep the strictly descending-f2 staircase.
    std::vector<Vec> sorted = points;
    std::sort(sorted.begin(), sorted.end(), lex_less);
    std::vector<Vec> front;
    double best_f2 = std::numeric_limits<double>::infinity();
    for (const auto& f : sorted) {
      if (f[1] < best_f2) {
        front.push_back(f);
        best_f2 = f[1];
      }
    }
    return front;
  }

  // General dimension: pairwise filter with duplicate collapse.
  std::vector<Vec> unique = points;
  std::sort(unique.begin(), unique.end(), lex_less);
  unique.erase(std::unique(unique.begin(), unique.end(), vec_equal), unique.end());
  std::vector<Vec> front;
  for (const auto& f : unique) {
    bool dominated = false;
    for (const auto& g : unique) {
      if (dominates(g, f)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(f);
  }
  return front;
}

bool Archive::insert(Vec x, Vec f) {
  for (const auto& [px, pf] : points_) {
    if (vec_equal(pf, f) || dominates(pf, f)) return false;
  }
  std::erase_if(points_, [&](const auto& p) { return dominates(f, p.second); });
  points_.emplace_back(std::move(x), std::move(f));
  return true;
}

Archive archive_insert(Archive archive, Vec x, Vec f) {
  archive.insert(std::move(x), std::move(f));
  return archive;
}

double hypervolume_2d(const std::vector<Vec>& points, const Vec& ref) {
  if (ref.size() != 2)
    throw std::invalid_argument("hypervolume_2d: reference must be 2-D");
  std::vector<Vec> inside;
  inside.reserve(points.size());
  for (const auto& f : points) {
    if (f.size() != 2)
      throw std::invalid_argument("hypervolume_2d: points must be 2-D");
    if (f[0] < ref[0] && f[1] < ref[1]) inside.push_back(f);
  }
  std::sort(inside.begin(), inside.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  double hv = 0.0;
  double prev_f2 = ref[1];
  for (const auto& f : inside) {
    if (f[1] < prev_f2) {
      hv += (ref[0] - f[0]) * (prev_f2 - f[1]);
      prev_f2 = f[1];
    }
  }
  return hv;
}

double indicator_value(const Archive& archive, const ReferenceData& refdata) {
  if (archive.empty()) return std::numeric_limits<double>::infinity();

  std::vector<Vec> normalized;
  normalized.reserve(archive.points().size());
  for (const auto& [x, f] : archive.points())
    normalized.push_back(normalize(f, refdata.ref));

  const Vec unit_ref = Vec::Constant(2, 1.0);
  bool any_inside = false;
  for (const auto& f : normalized) {
    if (f[0] < 1.0 && f[1] < 1.0) {
      any_inside = true;
      break;
    }
  }
  if (any_inside)
    return refdata.ref_hv - hypervolume_2d(normalized, unit_ref);

  // Distance to the region of interest {y : y <= (1,1)}: only exceedances
  // over the normalized nadir count.
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& f : normalized) {
    double d2 = 0.0;
    for (int m = 0; m < 2; ++m) {
      const double over = std::max(0.0, f[m] - 1.0);
      d2 += over * over;
    }
    best_dist = std::min(best_dist, std::sqrt(d2));
  }
  return refdata.ref_hv + best_dist;
}

std::vector<double> indicator_targets(double ref_hv) {
  std::vector<double> targets(31);
  for (int i = 0; i < 31; ++i) {
    const double expo = -4.0 + 4.0 * i / 30.0;
    targets[i] = ref_hv * std::pow(10.0, expo);
  }
  return targets;
}

IndicatorTrace build_trace(const EvaluationLedger& ledger,
                           const ReferenceData& refdata) {
  IndicatorTrace trace;
  trace.targets = indicator_targets(refdata.ref_hv);
  trace.hit_at.assign(trace.targets.size(), -1);
  trace.series.reserve(static_cast<std::size_t>(ledger.size()));

  Archive archive;
  for (const auto& entry : ledger) {
    archive.insert(entry.x, entry.f);
    const double value = indicator_value(archive, refdata);
    trace.series.emplace_back(entry.eval_index, value);
    for (std::size_t i = 0; i < trace.targets.size(); ++i) {
      if (trace.hit_at[i] < 0 && value <= trace.targets[i])
        trace.hit_at[i] = entry.eval_index;
    }
  }
  return trace;
}

std::vector<std::pair<int, double>> ecdf(const std::vector<IndicatorTrace>& traces,
                                         const std::vector<int>& eval_grid) {
  if (traces.empty()) throw std::invalid_argument("ecdf: no traces");
  const std::size_t n_targets = traces[0].targets.size();
  for (const auto& t : traces) {
    if (t.targets.size() != n_targets)
      throw std::invalid_argument("ecdf: traces disagree on targets");
  }

  const double total = static_cast<double>(traces.size() * n_targets);
  std::vector<std::pair<int, double>> curve;
  curve.reserve(eval_grid.size());
  for (int evals : eval_grid) {
    long hits = 0;
    for (const auto& t : traces)
      for (int h : t.hit_at)
        if (h >= 0 && h <= evals) ++hits;
    curve.emplace_back(evals, static_cast<double>(hits) / total);
  }
  return curve;
}

} // namespace tpb
