#pragma once

#include <vector>

#include "tpb/ledger.hpp"
#include "tpb/types.hpp"

namespace tpb {

/// Estimated best/worst objective values seen so far, used to normalize
/// objectives before scalarizing.
struct RefPoints {
  Vec ideal;
  Vec nadir;
};

/// `count` uniformly spaced weight vectors on the standard simplex, always
/// including all unit vectors. Ordered by descending lexicographic weight, so
/// for two objectives the set sweeps from (1,0) to (0,1).
/// Throws ConfigError when count < objective_dim (the unit vectors would not
/// all fit), and for objective_dim > 2 when count is not a lattice size.
std::vector<Vec> weight_set(int count, int objective_dim);

double weighted_sum(const Vec& w, const Vec& f);

/// Component-wise (f - ideal) / (nadir - ideal). Denominators below 1e-12 are
/// replaced by 1 so degenerate dimensions never abort a run.
Vec normalize(const Vec& f, const RefPoints& ref);

double normalized_weighted_sum(const Vec& w, const Vec& f, const RefPoints& ref);

/// Component-wise min/max of the objective vectors evaluated so far.
/// Throws std::invalid_argument on an empty ledger.
RefPoints update_ref_points(const EvaluationLedger& ledger);

} // namespace tpb
