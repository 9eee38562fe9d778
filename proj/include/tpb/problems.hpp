#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpb/scalarize.hpp"
#include "tpb/types.hpp"

namespace tpb {

/// Single-objective base functions the bi-objective benchmarks are built
/// from. All have a known global minimum of 0 at the instance shift:
///   sphere        |z|^2
///   ellipsoid     sum_i 10^{6(i-1)/(N-1)} z_i^2                  (rotated)
///   rosenbrock    sum_i 100 (z_i^2 - z_{i+1})^2 + (z_i - 1)^2,
///                 applied to z + 1 so the minimum lands on the shift (rotated)
///   rastrigin     10 (N - sum_i cos 2 pi z_i) + |z|^2
///   schwefel-like deceptive multimodal with a weak quadratic envelope:
///                 sum_i 0.1 z_i^2 + 10 (1 - cos 2 pi z_i)        (rotated)
enum class FunctionKind { Sphere, Ellipsoid, Rosenbrock, Rastrigin, SchwefelLike };

FunctionKind parse_function_kind(const std::string& name);
std::string to_string(FunctionKind kind);
bool is_multimodal(FunctionKind kind);

/// One seeded bi-objective problem: a pair of base functions with independent
/// shifts (drawn uniformly in [-4,4]^N) and, for non-separable kinds,
/// independent random rotations. Search box is [-5,5]^N.
struct ProblemInstance {
  int dim = 0; // N
  static constexpr int objective_dim = 2;
  Vec lower;
  Vec upper;
  FunctionKind f1_kind = FunctionKind::Sphere;
  FunctionKind f2_kind = FunctionKind::Sphere;
  Vec shift1;
  Vec shift2;
  Mat rot1;
  Mat rot2;
  std::uint64_t seed = 0;

  /// Stable identity string, e.g. "sphere_ellipsoid_n5_s3"; keys the
  /// reference-front cache.
  std::string key() const;
};

/// Deterministic in (kinds, dim, instance_seed).
ProblemInstance make_problem(FunctionKind f1, FunctionKind f2, int dim,
                             std::uint64_t instance_seed);

Vec evaluate_objectives(const ProblemInstance& instance, const Vec& x);

/// For a sphere/sphere instance the optimal set is the segment between the
/// two shifts; returns shift1 + t * (shift2 - shift1). Throws
/// std::invalid_argument for any other kind pair.
Vec analytic_pareto_point(const ProblemInstance& instance, double t);

/// Discretized optimal front plus the normalization constants derived from
/// it. ref_hv is the hypervolume of the normalized front w.r.t. (1,1).
struct ReferenceData {
  std::vector<Vec> front;
  double ref_hv = 0.0;
  RefPoints ref;
};

/// Front oracle. sphere/sphere instances are sampled exactly along the
/// analytic segment; all other pairs use a brute-force scan (resolution^2
/// quasi-random points plus scalarized local refinements) filtered to the
/// nondominated set. When cache_dir is non-empty the result is stored on
/// disk keyed by the instance identity and reloaded on later calls.
ReferenceData reference_front(const ProblemInstance& instance, int resolution,
                              const std::string& cache_dir = "");

/// Cache file round trip (format: comment header, then ref_hv / z_ideal /
/// z_nadir lines, then one "f1 f2" line per front point).
std::string dump_reference(const ReferenceData& data);
ReferenceData parse_reference(const std::string& text);

} // namespace tpb
