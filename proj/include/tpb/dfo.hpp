#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tpb/types.hpp"

namespace tpb {

/// Box-constrained single-objective minimization task with a hard call budget.
struct ScalarProblem {
  std::function<double(const Vec&)> objective;
  Vec lower;
  Vec upper;
  int max_evals = 0;
};

struct EvaluationTrace {
  std::vector<std::pair<Vec, double>> records; // every call, in order
  Vec best_x;
  double best_value = 0.0;
  bool terminated_early = false; // stopped on its own criterion, budget left
  bool init_clipped = false;     // x_init was outside the box and got clipped
};

enum class OptimizerKind { TrustRegion, NelderMead };

OptimizerKind parse_optimizer_kind(const std::string& name);
std::string to_string(OptimizerKind kind);

/// Model-based trust-region minimizer. Maintains a 2N+1 interpolation
/// stencil, fits a quadratic with diagonal curvature, and steps within the
/// intersection of the trust region and the box. Steps are accepted when the
/// achieved reduction exceeds 0.1 of the predicted one; the radius doubles
/// above ratio 0.7 and halves below 0.1. Stops when the radius falls under
/// rho_end (terminated_early) or the budget runs out.
EvaluationTrace tr_quadratic_optimize(const ScalarProblem& problem,
                                      const Vec& x_init, double rho_begin,
                                      double rho_end);

/// Classic simplex search (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5); candidates outside the box are clipped.
EvaluationTrace nelder_mead_optimize(const ScalarProblem& problem,
                                     const Vec& x_init);

/// Default entry point: trust-region optimizer with rho_begin set to a tenth
/// of the narrowest box width and rho_end = 1e-8.
EvaluationTrace optimize(const ScalarProblem& problem, const Vec& x_init);
EvaluationTrace optimize(OptimizerKind kind, const ScalarProblem& problem,
                         const Vec& x_init);

} // namespace tpb
