#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tpb/bezier.hpp"
#include "tpb/dfo.hpp"
#include "tpb/ledger.hpp"
#include "tpb/problems.hpp"
#include "tpb/scalarize.hpp"

namespace tpb {

struct TpbConfig {
  int num_weights = 3;            // scalar problems solved in phase one
  int degree = 2;                 // interpolation model degree
  double first_phase_ratio = 0.9; // share of the budget phase one may spend
  int budget = 0;                 // total objective-vector evaluations
  OptimizerKind optimizer = OptimizerKind::TrustRegion;
  std::uint64_t seed = 1;

  /// Throws ConfigError on invalid settings (num_weights < M+1, degree < 1,
  /// ratio outside (0,1), budget < num_weights).
  void validate(int objective_dim) const;
};

/// floor(budget * first_phase_ratio / num_weights): the evaluation cap for
/// each scalar-problem run in phase one. Throws ConfigError when it is 0.
int phase_budget(int budget, double first_phase_ratio, int num_weights);

struct PhaseOneResult {
  std::vector<Vec> best_per_weight; // k-th entry matches the k-th weight
  RefPoints ref;                    // from the full phase-one ledger
  int evals_used = 0;
};

/// Phase one: optimize each pure objective from the box center, then each
/// remaining weight's normalized weighted sum warm-started from the ledger
/// argmin, all capped at phase_budget evaluations per run. The best point per
/// weight is re-selected from the whole ledger under the final ref points.
PhaseOneResult first_phase(const ProblemInstance& problem, const TpbConfig& cfg,
                           EvaluationLedger& ledger);

/// As first_phase, accumulating time spent inside objective evaluations into
/// *eval_seconds when non-null.
PhaseOneResult first_phase_timed(const ProblemInstance& problem,
                                 const TpbConfig& cfg, EvaluationLedger& ledger,
                                 double* eval_seconds);

struct InterpolatedPoint {
  Vec x; // clipped into the box
  Vec f;
  Vec t; // simplex parameter it was generated from
};

/// Phase two: fit the interpolation model to the phase-one solutions (the
/// weight vectors double as fitting parameters), then evaluate it on an
/// equally spaced parameter grid of size budget - evals_used, consuming
/// parameters from the grid center outward. Returns the evaluated points;
/// empty when no budget remains.
std::vector<InterpolatedPoint> second_phase(const PhaseOneResult& phase1,
                                            const TpbConfig& cfg,
                                            EvaluationLedger& ledger,
                                            const ProblemInstance& problem);

/// As second_phase, optionally exposing the model fit and accumulating
/// objective-evaluation time.
std::vector<InterpolatedPoint> second_phase_timed(
    const PhaseOneResult& phase1, const TpbConfig& cfg, EvaluationLedger& ledger,
    const ProblemInstance& problem, FitResult* fit_out, double* eval_seconds);

struct RunMetadata {
  std::string algorithm;        // "tpb", "tpb1" or "tpb2"
  int budget_opt = 0;           // per-run phase-one cap (0 for tpb2)
  int phase1_evals = 0;
  int phase2_evals = 0;
  std::vector<Vec> best_per_weight;
  BezierSimplexModel model;     // fitted interpolation model; empty for tpb1
  bool fit_degenerate = false;
  double wall_seconds = 0.0;    // whole run
  double eval_seconds = 0.0;    // time spent inside objective evaluations
};

struct RunResult {
  EvaluationLedger ledger;
  RunMetadata meta;
};

/// Both phases under one budget. Same (problem, cfg) always reproduces the
/// same ledger bit for bit.
RunResult run_tpb(const ProblemInstance& problem, const TpbConfig& cfg);

/// Phase one only; the remaining budget is left unspent.
RunResult run_tpb1(const ProblemInstance& problem, const TpbConfig& cfg);

/// Phase two only: a Latin hypercube sample of 11*N - 1 points replaces phase
/// one, the per-weight best sample points are fitted, and the remaining
/// budget is interpolated. Throws ConfigError when budget <= 11*N - 1.
RunResult run_tpb2(const ProblemInstance& problem, const TpbConfig& cfg);

/// Seeded Latin hypercube sample: per coordinate, exactly one point falls in
/// each of the `count` equal-width strata.
std::vector<Vec> latin_hypercube_sample(int count, const Vec& lower,
                                        const Vec& upper, std::uint64_t seed);

} // namespace tpb
