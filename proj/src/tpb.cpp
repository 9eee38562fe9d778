#include "tpb/tpb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tpb/rng.hpp"

namespace tpb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Internal signal: the ledger hit its capacity inside an optimizer run.
struct LedgerFull {};

bool is_extreme_weight(const Vec& w) { return w.maxCoeff() == 1.0; }

std::vector<Vec> select_best_per_weight(const EvaluationLedger& ledger,
                                        const std::vector<Vec>& weights,
                                        const RefPoints& ref) {
  std::vector<Vec> best;
  best.reserve(weights.size());
  for (const auto& w : weights) {
    int best_i = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ledger.size(); ++i) {
      const double v = normalized_weighted_sum(w, ledger[i].f, ref);
      if (v < best_v) {
        best_v = v;
        best_i = i;
      }
    }
    best.push_back(ledger[best_i].x);
  }
  return best;
}

} // namespace

void TpbConfig::validate(int objective_dim) const {
  if (num_weights < objective_dim + 1)
    throw ConfigError("config: num_weights must be at least M+1");
  if (degree < 1) throw ConfigError("config: degree must be >= 1");
  if (!(first_phase_ratio > 0.0 && first_phase_ratio < 1.0))
    throw ConfigError("config: first_phase_ratio must lie in (0,1)");
  if (budget < num_weights)
    throw ConfigError("config: budget must be at least num_weights");
}

int phase_budget(int budget, double first_phase_ratio, int num_weights) {
  if (num_weights < 1) throw ConfigError("phase_budget: num_weights must be >= 1");
  if (budget < num_weights)
    throw ConfigError("phase_budget: budget smaller than the number of scalar problems");
  if (!(first_phase_ratio > 0.0 && first_phase_ratio < 1.0))
    throw ConfigError("phase_budget: first_phase_ratio must lie in (0,1)");
  // The nudge keeps decimal ratios like 0.7 from flooring one below their
  // mathematical value.
  const int cap = static_cast<int>(
      std::floor(budget * first_phase_ratio / num_weights + 1e-9));
  if (cap == 0)
    throw ConfigError("phase_budget: budget too small, per-run cap would be 0");
  return cap;
}

PhaseOneResult first_phase(const ProblemInstance& problem, const TpbConfig& cfg,
                           EvaluationLedger& ledger) {
  return first_phase_timed(problem, cfg, ledger, nullptr);
}

PhaseOneResult first_phase_timed(const ProblemInstance& problem,
                                 const TpbConfig& cfg, EvaluationLedger& ledger,
                                 double* eval_seconds) {
  if (!ledger.empty())
    throw std::invalid_argument("first_phase: ledger must start empty");

  constexpr int M = ProblemInstance::objective_dim;
  const int budget_opt = phase_budget(cfg.budget, cfg.first_phase_ratio, cfg.num_weights);
  const auto weights = weight_set(cfg.num_weights, M);

  auto spend = [&](const Vec& x) -> Vec {
    if (ledger.full()) throw LedgerFull{};
    const auto t0 = Clock::now();
    Vec f = evaluate_objectives(problem, x);
    if (eval_seconds) *eval_seconds += seconds_since(t0);
    ledger.push(x, f);
    return f;
  };

  const Vec x_center = 0.5 * (problem.lower + problem.upper);

  try {
    for (int m = 0; m < M; ++m) {
      const int cap = std::min(budget_opt, ledger.capacity() - ledger.size());
      if (cap <= 0) break;
      ScalarProblem sp;
      sp.lower = problem.lower;
      sp.upper = problem.upper;
      sp.max_evals = cap;
      sp.objective = [&, m](const Vec& x) { return spend(x)[m]; };
      (void)optimize(cfg.optimizer, sp, x_center);
    }

    for (const auto& w : weights) {
      if (is_extreme_weight(w)) continue;
      const int cap = std::min(budget_opt, ledger.capacity() - ledger.size());
      if (cap <= 0) break;
      const RefPoints ref = update_ref_points(ledger);
      int warm_i = 0;
      double warm_v = std::numeric_limits<double>::infinity();
      for (int i = 0; i < ledger.size(); ++i) {
        const double v = normalized_weighted_sum(w, ledger[i].f, ref);
        if (v < warm_v) {
          warm_v = v;
          warm_i = i;
        }
      }
      ScalarProblem sp;
      sp.lower = problem.lower;
      sp.upper = problem.upper;
      sp.max_evals = cap;
      sp.objective = [&, w, ref](const Vec& x) {
        return normalized_weighted_sum(w, spend(x), ref);
      };
      (void)optimize(cfg.optimizer, sp, ledger[warm_i].x);
    }
  } catch (const LedgerFull&) {
    // Capacity reached mid-run: truncate the remaining runs and fall through
    // to the selection step.
  }

  PhaseOneResult out;
  out.evals_used = ledger.size();
  out.ref = update_ref_points(ledger);
  out.best_per_weight = select_best_per_weight(ledger, weights, out.ref);
  return out;
}

std::vector<InterpolatedPoint> second_phase(const PhaseOneResult& phase1,
                                            const TpbConfig& cfg,
                                            EvaluationLedger& ledger,
                                            const ProblemInstance& problem) {
  return second_phase_timed(phase1, cfg, ledger, problem, nullptr, nullptr);
}

std::vector<InterpolatedPoint> second_phase_timed(
    const PhaseOneResult& phase1, const TpbConfig& cfg, EvaluationLedger& ledger,
    const ProblemInstance& problem, FitResult* fit_out, double* eval_seconds) {
  const int remaining = ledger.capacity() - ledger.size();
  if (remaining <= 0) return {};

  constexpr int M = ProblemInstance::objective_dim;
  const auto weights = weight_set(cfg.num_weights, M);
  if (weights.size() != phase1.best_per_weight.size())
    throw std::invalid_argument("second_phase: phase-one result does not match the weight set");

  // The weight vectors double as the fitting parameters.
  std::vector<std::pair<Vec, Vec>> samples;
  samples.reserve(weights.size());
  for (std::size_t k = 0; k < weights.size(); ++k)
    samples.emplace_back(weights[k], phase1.best_per_weight[k]);
  FitResult fit = fit_ols(samples, M, cfg.degree, problem.dim);
  if (fit_out) *fit_out = fit;

  const auto grid = simplex_grid(M, remaining, true);

  // Consume from the grid center outward so a truncated budget still covers
  // the middle of the front.
  const double center = 1.0 / M;
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double da = 0.0, db = 0.0;
    for (int m = 0; m < M; ++m) {
      da += (grid[a][m] - center) * (grid[a][m] - center);
      db += (grid[b][m] - center) * (grid[b][m] - center);
    }
    if (da != db) return da < db;
    return grid[a][0] < grid[b][0];
  });

  std::vector<InterpolatedPoint> out;
  out.reserve(grid.size());
  for (std::size_t idx : order) {
    if (ledger.full()) break;
    Vec x = evaluate(fit.model, grid[idx]);
    x = x.cwiseMax(problem.lower).cwiseMin(problem.upper);
    const auto t0 = Clock::now();
    Vec f = evaluate_objectives(problem, x);
    if (eval_seconds) *eval_seconds += seconds_since(t0);
    ledger.push(x, f);
    out.push_back(InterpolatedPoint{std::move(x), std::move(f), grid[idx]});
  }
  return out;
}

RunResult run_tpb(const ProblemInstance& problem, const TpbConfig& cfg) {
  cfg.validate(ProblemInstance::objective_dim);
  RunResult result;
  result.ledger = EvaluationLedger(cfg.budget);
  result.meta.algorithm = "tpb";
  result.meta.budget_opt =
      phase_budget(cfg.budget, cfg.first_phase_ratio, cfg.num_weights);

  const auto t0 = Clock::now();
  const auto phase1 =
      first_phase_timed(problem, cfg, result.ledger, &result.meta.eval_seconds);
  result.meta.phase1_evals = phase1.evals_used;
  result.meta.best_per_weight = phase1.best_per_weight;

  FitResult fit;
  (void)second_phase_timed(phase1, cfg, result.ledger, problem, &fit,
                           &result.meta.eval_seconds);
  result.meta.phase2_evals = result.ledger.size() - phase1.evals_used;
  result.meta.model = std::move(fit.model);
  result.meta.fit_degenerate = fit.degenerate;
  result.meta.wall_seconds = seconds_since(t0);
  return result;
}

RunResult run_tpb1(const ProblemInstance& problem, const TpbConfig& cfg) {
  cfg.validate(ProblemInstance::objective_dim);
  RunResult result;
  result.ledger = EvaluationLedger(cfg.budget);
  result.meta.algorithm = "tpb1";
  result.meta.budget_opt =
      phase_budget(cfg.budget, cfg.first_phase_ratio, cfg.num_weights);

  const auto t0 = Clock::now();
  const auto phase1 =
      first_phase_timed(problem, cfg, result.ledger, &result.meta.eval_seconds);
  result.meta.phase1_evals = phase1.evals_used;
  result.meta.best_per_weight = phase1.best_per_weight;
  result.meta.wall_seconds = seconds_since(t0);
  return result;
}

RunResult run_tpb2(const ProblemInstance& problem, const TpbConfig& cfg) {
  cfg.validate(ProblemInstance::objective_dim);
  const int initial_count = 11 * problem.dim - 1;
  if (cfg.budget <= initial_count)
    throw ConfigError("run_tpb2: budget must exceed the initial sample size 11*N-1");

  RunResult result;
  result.ledger = EvaluationLedger(cfg.budget);
  result.meta.algorithm = "tpb2";

  const auto t0 = Clock::now();
  const auto sample =
      latin_hypercube_sample(initial_count, problem.lower, problem.upper, cfg.seed);
  for (const auto& x : sample) {
    const auto te = Clock::now();
    Vec f = evaluate_objectives(problem, x);
    result.meta.eval_seconds += seconds_since(te);
    result.ledger.push(x, f);
  }

  constexpr int M = ProblemInstance::objective_dim;
  PhaseOneResult phase1;
  phase1.evals_used = result.ledger.size();
  phase1.ref = update_ref_points(result.ledger);
  phase1.best_per_weight = select_best_per_weight(
      result.ledger, weight_set(cfg.num_weights, M), phase1.ref);
  result.meta.phase1_evals = phase1.evals_used;
  result.meta.best_per_weight = phase1.best_per_weight;

  FitResult fit;
  (void)second_phase_timed(phase1, cfg, result.ledger, problem, &fit,
                           &result.meta.eval_seconds);
  result.meta.phase2_evals = result.ledger.size() - phase1.evals_used;
  result.meta.model = std::move(fit.model);
  result.meta.fit_degenerate = fit.degenerate;
  result.meta.wall_seconds = seconds_since(t0);
  return result;
}

std::vector<Vec> latin_hypercube_sample(int count, const Vec& lower,
                                        const Vec& upper, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("latin_hypercube_sample: count must be >= 1");
  const int dim = static_cast<int>(lower.size());
  Rng rng(seed);
  std::vector<Vec> points(count, Vec(dim));

  std::vector<int> strata(count);
  for (int j = 0; j < dim; ++j) {
    std::iota(strata.begin(), strata.end(), 0);
    rng.shuffle(strata);
    const double width = upper[j] - lower[j];
    for (int i = 0; i < count; ++i) {
      const double u = rng.uniform();
      points[i][j] = lower[j] + width * (strata[i] + u) / count;
    }
  }
  return points;
}

} // namespace tpb
