#pragma once

#include <utility>
#include <vector>

#include "tpb/ledger.hpp"
#include "tpb/problems.hpp"
#include "tpb/types.hpp"

namespace tpb {

/// Strict Pareto dominance: a is no worse in every objective and strictly
/// better in at least one. Throws std::invalid_argument on dimension mismatch.
bool dominates(const Vec& a, const Vec& b);

/// The subset of points not dominated by any other input point; duplicates
/// collapse to one. For two objectives this is a sort-and-sweep; the general
/// path is pairwise.
std::vector<Vec> nondominated_filter(const std::vector<Vec>& points);

/// Unbounded archive of all mutually nondominated (x, f) pairs seen so far.
class Archive {
public:
  /// Ignores dominated points; otherwise inserts and evicts everything the
  /// new point dominates. Returns true when the archive changed.
  bool insert(Vec x, Vec f);

  int size() const { return static_cast<int>(points_.size()); }
  bool empty() const { return points_.empty(); }
  const std::vector<std::pair<Vec, Vec>>& points() const { return points_; }

private:
  std::vector<std::pair<Vec, Vec>> points_; // (x, f)
};

/// Functional form of Archive::insert.
Archive archive_insert(Archive archive, Vec x, Vec f);

/// 2-D hypervolume by sort-and-sweep. Only points strictly dominating `ref`
/// contribute; anything else adds nothing.
double hypervolume_2d(const std::vector<Vec>& points, const Vec& ref);

/// Anytime quality value, smaller is better. Archive objectives are
/// normalized by the reference ideal/nadir; when some normalized point
/// strictly dominates (1,1) the value is the hypervolume regret
/// ref_hv - hv(archive), otherwise ref_hv plus the smallest distance from
/// the archive to the region of interest {y : y <= (1,1)}. Both regimes
/// meet at ref_hv. Empty archive yields +infinity.
double indicator_value(const Archive& archive, const ReferenceData& refdata);

/// 31 target precisions, geometrically spaced from ref_hv * 1e-4 to ref_hv.
std::vector<double> indicator_targets(double ref_hv);

struct IndicatorTrace {
  std::vector<std::pair<int, double>> series; // (eval_index, indicator value)
  std::vector<double> targets;
  std::vector<int> hit_at; // first eval index reaching each target, -1 = never
};

/// Streams the ledger through an archive and records the indicator after
/// every evaluation, plus first-hit indices for all targets.
IndicatorTrace build_trace(const EvaluationLedger& ledger,
                           const ReferenceData& refdata);

/// Fraction of (trace, target) pairs hit by each evaluation count in
/// eval_grid. All traces must share the same target list; throws
/// std::invalid_argument when traces is empty.
std::vector<std::pair<int, double>> ecdf(const std::vector<IndicatorTrace>& traces,
                                         const std::vector<int>& eval_grid);

} // namespace tpb
