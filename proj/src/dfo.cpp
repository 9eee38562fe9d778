#include "tpb/dfo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tpb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem(const ScalarProblem& problem, const Vec& x_init) {
  if (!problem.objective) throw std::invalid_argument("optimizer: no objective");
  if (problem.lower.size() != problem.upper.size() ||
      problem.lower.size() != x_init.size())
    throw std::invalid_argument("optimizer: bound/initial dimensions disagree");
  for (int i = 0; i < problem.lower.size(); ++i)
    if (!(problem.lower[i] < problem.upper[i]))
      throw std::invalid_argument("optimizer: lower bound must be below upper bound");
  if (problem.max_evals < 1)
    throw std::invalid_argument("optimizer: max_evals must be >= 1");
}

Vec clip_to_box(const Vec& x, const ScalarProblem& problem) {
  return x.cwiseMax(problem.lower).cwiseMin(problem.upper);
}

// Owns the budget: every objective call goes through try_eval, which refuses
// to exceed max_evals and tracks the incumbent.
class Recorder {
public:
  Recorder(const ScalarProblem& problem, EvaluationTrace& trace)
      : problem_(problem), trace_(trace) {}

  bool try_eval(const Vec& x, double& value) {
    if (static_cast<int>(trace_.records.size()) >= problem_.max_evals) return false;
    value = problem_.objective(x);
    trace_.records.emplace_back(x, value);
    // A NaN incumbent loses to any finite value.
    if (trace_.records.size() == 1 || value < trace_.best_value ||
        (std::isnan(trace_.best_value) && !std::isnan(value))) {
      trace_.best_value = value;
      trace_.best_x = x;
    }
    return true;
  }

  bool exhausted() const {
    return static_cast<int>(trace_.records.size()) >= problem_.max_evals;
  }

private:
  const ScalarProblem& problem_;
  EvaluationTrace& trace_;
};

// Quadratic model with diagonal curvature, anchored at one interpolation
// point: m(y) = f_anchor + g.(y - anchor) + 1/2 sum_i q_i (y_i - anchor_i)^2.
struct DiagModel {
  Vec anchor;
  double f_anchor = 0.0;
  Vec grad;
  Vec curv;

  double value(const Vec& y) const {
    const Vec s = y - anchor;
    return f_anchor + grad.dot(s) + 0.5 * s.cwiseProduct(s).dot(curv);
  }

  bool finite() const {
    return std::isfinite(f_anchor) && grad.allFinite() && curv.allFinite();
  }
};

// Two extra points per coordinate around `center`, kept inside the box; fits
// gradient and curvature per coordinate through the resulting triples.
// Returns false when the budget ran out mid-build.
bool build_stencil(const ScalarProblem& problem, Recorder& rec, const Vec& center,
                   double f_center, double step, DiagModel& model) {
  const int n = static_cast<int>(center.size());
  model.anchor = center;
  model.f_anchor = f_center;
  model.grad = Vec::Zero(n);
  model.curv = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    const double width = problem.upper[i] - problem.lower[i];
    const double h = std::min(step, 0.5 * width);
    double a = std::min(h, problem.upper[i] - center[i]);
    double b = -std::min(h, center[i] - problem.lower[i]);
    // At a bound one side vanishes; take both points on the interior side.
    const double tiny = 1e-12 * width;
    if (a < tiny) a = 0.5 * b;
    if (-b < tiny) b = 0.5 * a;

    Vec xa = center;
    xa[i] += a;
    Vec xb = center;
    xb[i] += b;
    double fa = 0.0, fb = 0.0;
    if (!rec.try_eval(xa, fa)) return false;
    if (!rec.try_eval(xb, fb)) return false;

    const double ya = fa - f_center;
    const double yb = fb - f_center;
    const double det = a * b * (b - a);
    model.grad[i] = (ya * b * b - yb * a * a) / det;
    model.curv[i] = 2.0 * (a * yb - b * ya) / det;
  }
  return true;
}

// Minimizer of the model over box ∩ {|y - center|_inf <= radius}; separable,
// so each coordinate is solved in closed form on its interval.
Vec model_step(const DiagModel& model, const ScalarProblem& problem,
               const Vec& center, double radius) {
  const int n = static_cast<int>(center.size());
  Vec y = center;
  for (int i = 0; i < n; ++i) {
    const double lo = std::max(problem.lower[i], center[i] - radius);
    const double hi = std::min(problem.upper[i], center[i] + radius);
    const double g = model.grad[i];
    const double q = model.curv[i];
    const double a0 = model.anchor[i];
    auto m1 = [&](double v) { return g * (v - a0) + 0.5 * q * (v - a0) * (v - a0); };
    if (q > 0.0) {
      y[i] = std::clamp(a0 - g / q, lo, hi);
    } else if (g != 0.0 || q < 0.0) {
      y[i] = (m1(lo) <= m1(hi)) ? lo : hi;
    } // flat coordinate: stay at the center
  }
  return y;
}

} // namespace

OptimizerKind parse_optimizer_kind(const std::string& name) {
  if (name == "tr" || name == "trust-region") return OptimizerKind::TrustRegion;
  if (name == "nelder-mead" || name == "nm") return OptimizerKind::NelderMead;
  throw ConfigError("unknown optimizer '" + name + "' (expected tr or nelder-mead)");
}

std::string to_string(OptimizerKind kind) {
  return kind == OptimizerKind::TrustRegion ? "tr" : "nelder-mead";
}

EvaluationTrace tr_quadratic_optimize(const ScalarProblem& problem,
                                      const Vec& x_init, double rho_begin,
                                      double rho_end) {
  check_problem(problem, x_init);
  if (!(0.0 < rho_end && rho_end < rho_begin))
    throw std::invalid_argument("tr_quadratic_optimize: need 0 < rho_end < rho_begin");

  EvaluationTrace trace;
  Recorder rec(problem, trace);

  Vec x0 = clip_to_box(x_init, problem);
  trace.init_clipped = (x0 - x_init).cwiseAbs().maxCoeff() > 0.0;

  double f0 = 0.0;
  if (!rec.try_eval(x0, f0)) return trace;

  DiagModel model;
  double stencil_step = rho_begin;
  if (!build_stencil(problem, rec, x0, f0, stencil_step, model)) return trace;

  const double radius_cap = (problem.upper - problem.lower).maxCoeff();
  double radius = rho_begin;
  int rejects_in_a_row = 0;

  while (radius >= rho_end && !rec.exhausted()) {
    if (!model.finite()) {
      // Stencil collapse (non-finite objective or degenerate fit): restart the
      // interpolation set around the incumbent at a fraction of the initial radius.
      stencil_step = rho_begin / 10.0;
      if (!build_stencil(problem, rec, trace.best_x, trace.best_value,
                         stencil_step, model))
        return trace;
      continue;
    }

    const Vec center = trace.best_x;
    const double f_center = trace.best_value;
    const Vec trial = model_step(model, problem, center, radius);
    const double predicted = model.value(center) - model.value(trial);
    const double step_len = (trial - center).cwiseAbs().maxCoeff();

    if (step_len == 0.0 || predicted <= 0.0) {
      // The model sees nothing to gain at this radius; no evaluation spent.
      radius *= 0.5;
      continue;
    }

    double f_trial = 0.0;
    if (!rec.try_eval(trial, f_trial)) return trace;
    const double actual = f_center - f_trial;
    // A non-finite trial value counts as a failed step.
    const double ratio = std::isfinite(actual) ? actual / predicted : -1.0;

    // Least-change update: tilt the gradient so the model reproduces the new
    // value, leaving the curvature untouched.
    {
      const Vec s = trial - model.anchor;
      const double s2 = s.squaredNorm();
      const double diff = f_trial - model.value(trial);
      if (s2 > 0.0 && std::isfinite(diff)) model.grad += (diff / s2) * s;
    }

    if (ratio > 0.1) {
      // Re-anchor at the accepted point; the shifted gradient keeps the same
      // quadratic.
      const Vec s = trial - model.anchor;
      model.grad += model.curv.cwiseProduct(s);
      model.anchor = trial;
      model.f_anchor = f_trial;
      rejects_in_a_row = 0;
    } else {
      ++rejects_in_a_row;
    }

    if (ratio > 0.7) {
      radius = std::min(radius * 2.0, radius_cap);
    } else if (ratio < 0.1) {
      radius *= 0.5;
    }

    // The model was built at a much coarser scale than the region we are now
    // probing; refresh the stencil around the incumbent.
    if (rejects_in_a_row >= 2 && radius < 0.25 * stencil_step) {
      stencil_step = std::max(radius, rho_end);
      if (!build_stencil(problem, rec, trace.best_x, trace.best_value,
                         stencil_step, model))
        return trace;
      rejects_in_a_row = 0;
    }
  }

  trace.terminated_early = !rec.exhausted();
  return trace;
}

EvaluationTrace nelder_mead_optimize(const ScalarProblem& problem, const Vec& x_init) {
  check_problem(problem, x_init);

  EvaluationTrace trace;
  Recorder rec(problem, trace);

  const int n = static_cast<int>(x_init.size());
  Vec x0 = clip_to_box(x_init, problem);
  trace.init_clipped = (x0 - x_init).cwiseAbs().maxCoeff() > 0.0;

  std::vector<Vec> simplex;
  std::vector<double> values;
  double f0 = 0.0;
  if (!rec.try_eval(x0, f0)) return trace;
  simplex.push_back(x0);
  values.push_back(f0);

  for (int i = 0; i < n; ++i) {
    Vec xi = x0;
    const double step = 0.05 * (problem.upper[i] - problem.lower[i]);
    xi[i] = (x0[i] + step <= problem.upper[i]) ? x0[i] + step : x0[i] - step;
    double fi = 0.0;
    if (!rec.try_eval(xi, fi)) return trace;
    simplex.push_back(xi);
    values.push_back(fi);
  }

  const double scale = (problem.upper - problem.lower).maxCoeff();
  std::vector<int> order(simplex.size());

  while (!rec.exhausted()) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });

    const int best = order.front();
    const int worst = order.back();
    const int second_worst = order[order.size() - 2];

    double spread = 0.0;
    for (std::size_t i = 0; i < simplex.size(); ++i)
      spread = std::max(spread, (simplex[i] - simplex[best]).cwiseAbs().maxCoeff());
    if (spread < 1e-10 * scale ||
        std::abs(values[worst] - values[best]) < 1e-12 * (1.0 + std::abs(values[best]))) {
      trace.terminated_early = true;
      return trace;
    }

    Vec centroid = Vec::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i)
      if (static_cast<int>(i) != worst) centroid += simplex[i];
    centroid /= static_cast<double>(simplex.size() - 1);

    const Vec reflected = clip_to_box(centroid + (centroid - simplex[worst]), problem);
    double f_reflected = 0.0;
    if (!rec.try_eval(reflected, f_reflected)) return trace;

    if (f_reflected < values[best]) {
      const Vec expanded =
          clip_to_box(centroid + 2.0 * (centroid - simplex[worst]), problem);
      double f_expanded = 0.0;
      if (!rec.try_eval(expanded, f_expanded)) return trace;
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }

    const bool outside = f_reflected < values[worst];
    const Vec raw_contracted =
        outside ? Vec(centroid + 0.5 * (centroid - simplex[worst]))
                : Vec(centroid - 0.5 * (centroid - simplex[worst]));
    const Vec contracted = clip_to_box(raw_contracted, problem);
    double f_contracted = 0.0;
    if (!rec.try_eval(contracted, f_contracted)) return trace;
    if (f_contracted < std::min(f_reflected, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }

    // Shrink everything toward the best vertex.
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (static_cast<int>(i) == best) continue;
      simplex[i] = clip_to_box(simplex[best] + 0.5 * (simplex[i] - simplex[best]), problem);
      if (!rec.try_eval(simplex[i], values[i])) return trace;
    }
  }
  return trace;
}

EvaluationTrace optimize(const ScalarProblem& problem, const Vec& x_init) {
  return optimize(OptimizerKind::TrustRegion, problem, x_init);
}

EvaluationTrace optimize(OptimizerKind kind, const ScalarProblem& problem,
                         const Vec& x_init) {
  if (kind == OptimizerKind::NelderMead) return nelder_mead_optimize(problem, x_init);
  const double rho_begin = 0.1 * (problem.upper - problem.lower).minCoeff();
  return tr_quadratic_optimize(problem, x_init, rho_begin, 1e-8);
}

} // namespace tpb
