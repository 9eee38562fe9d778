#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tpb/types.hpp"

namespace tpb {

/// Exponent tuple of one Bernstein term; entries are non-negative and sum to
/// the model degree.
using MultiIndex = std::vector<int>;

/// D! / (d_1! ... d_M!), exact integer arithmetic.
/// Throws std::invalid_argument unless sum(d) == degree and all entries >= 0.
std::int64_t multinomial_coefficient(int degree, const MultiIndex& d);

/// All multi-indices of the given dimension summing to `degree`, in ascending
/// lexicographic order. Fitting matrices depend on this order being fixed.
std::vector<MultiIndex> enumerate_multi_indices(int dim, int degree);

/// True when t is on the standard simplex: t >= 0 and sum(t) == 1 within tol.
bool is_simplex_param(const Vec& t, double tol = 1e-12);

/// Polynomial map from the standard (M-1)-simplex into R^N, determined by one
/// control point per multi-index. Control points are stored in
/// enumerate_multi_indices order.
struct BezierSimplexModel {
  int objective_dim = 0; // M
  int degree = 0;        // D
  int decision_dim = 0;  // N
  std::vector<MultiIndex> index_set;
  std::vector<Vec> control_points;

  bool well_formed() const;
  const Vec& control_point(const MultiIndex& d) const;
};

/// Sum over the index set of multinomial(D,d) * t^d * p_d, with 0^0 = 1 so
/// extreme parameters need no special casing.
Vec evaluate(const BezierSimplexModel& model, const Vec& t);

struct FitResult {
  BezierSimplexModel model;
  /// Design matrix was rank deficient; a minimum-norm solve was used instead
  /// of the normal equations. Never fatal.
  bool degenerate = false;
  /// Sum of squared residuals at the solution.
  double residual = 0.0;
};

/// Least-squares fit of the control points to (parameter, point) samples.
/// The loss is convex quadratic in the control points, so the normal
/// equations solve it; on rank deficiency we fall back to a minimum-norm
/// least-squares solution and set `degenerate`.
FitResult fit_ols(const std::vector<std::pair<Vec, Vec>>& samples,
                  int objective_dim, int degree, int decision_dim);

/// Equally spaced parameters on the standard simplex.
///
/// For dim == 2: count + 2 points (i/(count+1), (count+1-i)/(count+1)) in
/// ascending first coordinate; drop_extremes removes the two unit vectors,
/// leaving exactly `count` points. For dim > 2 a simplex-lattice design is
/// used and (count + dim) must match a lattice size binom(n+dim-1, dim-1).
std::vector<Vec> simplex_grid(int dim, int count, bool drop_extremes);

/// Flat text record: one line per control point, multi-index entries followed
/// by the N coordinates, in enumerate_multi_indices order.
std::string dump_model(const BezierSimplexModel& model);
BezierSimplexModel parse_model(const std::string& text);

} // namespace tpb
