#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tpb/assess.hpp"
#include "tpb/bezier.hpp"
#include "tpb/dfo.hpp"
#include "tpb/experiment.hpp"
#include "tpb/problems.hpp"
#include "tpb/scalarize.hpp"
#include "tpb/tpb.hpp"

namespace py = pybind11;
using namespace tpb;

PYBIND11_MODULE(_tpb, m) {
  m.doc() = "Two-phase Bezier-simplex interpolation for expensive bi-objective "
            "optimization";

  py::register_exception<ConfigError>(m, "ConfigError");

  // ---- bezier ----
  py::class_<BezierSimplexModel>(m, "BezierSimplexModel")
      .def(py::init<>())
      .def_readwrite("objective_dim", &BezierSimplexModel::objective_dim)
      .def_readwrite("degree", &BezierSimplexModel::degree)
      .def_readwrite("decision_dim", &BezierSimplexModel::decision_dim)
      .def_readwrite("index_set", &BezierSimplexModel::index_set)
      .def_readwrite("control_points", &BezierSimplexModel::control_points)
      .def("control_point", &BezierSimplexModel::control_point)
      .def("well_formed", &BezierSimplexModel::well_formed);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("model", &FitResult::model)
      .def_readonly("degenerate", &FitResult::degenerate)
      .def_readonly("residual", &FitResult::residual);

  m.def("multinomial_coefficient", &multinomial_coefficient);
  m.def("enumerate_multi_indices", &enumerate_multi_indices);
  m.def("evaluate_bezier", &evaluate, py::arg("model"), py::arg("t"));
  m.def("fit_ols", &fit_ols, py::arg("samples"), py::arg("objective_dim"),
        py::arg("degree"), py::arg("decision_dim"));
  m.def("simplex_grid", &simplex_grid, py::arg("dim"), py::arg("count"),
        py::arg("drop_extremes"));
  m.def("dump_model", &dump_model);
  m.def("parse_model", &parse_model);

  // ---- scalarize ----
  py::class_<RefPoints>(m, "RefPoints")
      .def(py::init<>())
      .def_readwrite("ideal", &RefPoints::ideal)
      .def_readwrite("nadir", &RefPoints::nadir);

  m.def("weight_set", &weight_set, py::arg("count"), py::arg("objective_dim"));
  m.def("weighted_sum", &weighted_sum);
  m.def("normalize", &normalize);
  m.def("normalized_weighted_sum", &normalized_weighted_sum);
  m.def("update_ref_points", &update_ref_points);

  // ---- ledger ----
  py::class_<LedgerEntry>(m, "LedgerEntry")
      .def_readonly("x", &LedgerEntry::x)
      .def_readonly("f", &LedgerEntry::f)
      .def_readonly("eval_index", &LedgerEntry::eval_index);

  py::class_<EvaluationLedger>(m, "EvaluationLedger")
      .def(py::init<int>(), py::arg("capacity"))
      .def("push", &EvaluationLedger::push)
      .def("full", &EvaluationLedger::full)
      .def("capacity", &EvaluationLedger::capacity)
      .def("__len__", &EvaluationLedger::size)
      .def("__getitem__",
           [](const EvaluationLedger& ledger, int i) {
             if (i < 0 || i >= ledger.size()) throw py::index_error();
             return ledger[i];
           });

  // ---- dfo ----
  py::enum_<OptimizerKind>(m, "OptimizerKind")
      .value("TrustRegion", OptimizerKind::TrustRegion)
      .value("NelderMead", OptimizerKind::NelderMead);

  py::class_<EvaluationTrace>(m, "EvaluationTrace")
      .def_readonly("records", &EvaluationTrace::records)
      .def_readonly("best_x", &EvaluationTrace::best_x)
      .def_readonly("best_value", &EvaluationTrace::best_value)
      .def_readonly("terminated_early", &EvaluationTrace::terminated_early)
      .def_readonly("init_clipped", &EvaluationTrace::init_clipped);

  auto make_scalar_problem = [](const std::function<double(const Vec&)>& objective,
                                const Vec& lower, const Vec& upper, int max_evals) {
    ScalarProblem sp;
    sp.objective = objective;
    sp.lower = lower;
    sp.upper = upper;
    sp.max_evals = max_evals;
    return sp;
  };
  m.def("optimize",
        [make_scalar_problem](const std::function<double(const Vec&)>& objective,
                              const Vec& lower, const Vec& upper, int max_evals,
                              const Vec& x_init) {
          return optimize(make_scalar_problem(objective, lower, upper, max_evals),
                          x_init);
        },
        py::arg("objective"), py::arg("lower"), py::arg("upper"),
        py::arg("max_evals"), py::arg("x_init"));
  m.def("tr_quadratic_optimize",
        [make_scalar_problem](const std::function<double(const Vec&)>& objective,
                              const Vec& lower, const Vec& upper, int max_evals,
                              const Vec& x_init, double rho_begin, double rho_end) {
          return tr_quadratic_optimize(
              make_scalar_problem(objective, lower, upper, max_evals), x_init,
              rho_begin, rho_end);
        },
        py::arg("objective"), py::arg("lower"), py::arg("upper"),
        py::arg("max_evals"), py::arg("x_init"), py::arg("rho_begin"),
        py::arg("rho_end"));
  m.def("nelder_mead_optimize",
        [make_scalar_problem](const std::function<double(const Vec&)>& objective,
                              const Vec& lower, const Vec& upper, int max_evals,
                              const Vec& x_init) {
          return nelder_mead_optimize(
              make_scalar_problem(objective, lower, upper, max_evals), x_init);
        },
        py::arg("objective"), py::arg("lower"), py::arg("upper"),
        py::arg("max_evals"), py::arg("x_init"));

  // ---- problems ----
  py::enum_<FunctionKind>(m, "FunctionKind")
      .value("Sphere", FunctionKind::Sphere)
      .value("Ellipsoid", FunctionKind::Ellipsoid)
      .value("Rosenbrock", FunctionKind::Rosenbrock)
      .value("Rastrigin", FunctionKind::Rastrigin)
      .value("SchwefelLike", FunctionKind::SchwefelLike);

  m.def("parse_function_kind", &parse_function_kind);
  m.def("is_multimodal", &is_multimodal);

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def_readonly("dim", &ProblemInstance::dim)
      .def_readonly("lower", &ProblemInstance::lower)
      .def_readonly("upper", &ProblemInstance::upper)
      .def_readonly("f1_kind", &ProblemInstance::f1_kind)
      .def_readonly("f2_kind", &ProblemInstance::f2_kind)
      .def_readonly("shift1", &ProblemInstance::shift1)
      .def_readonly("shift2", &ProblemInstance::shift2)
      .def_readonly("rot1", &ProblemInstance::rot1)
      .def_readonly("rot2", &ProblemInstance::rot2)
      .def_readonly("seed", &ProblemInstance::seed)
      .def("key", &ProblemInstance::key)
      .def("__repr__", [](const ProblemInstance& p) {
        return "<ProblemInstance " + p.key() + ">";
      });

  py::class_<ReferenceData>(m, "ReferenceData")
      .def_readonly("front", &ReferenceData::front)
      .def_readonly("ref_hv", &ReferenceData::ref_hv)
      .def_readonly("ref", &ReferenceData::ref);

  m.def("make_problem", &make_problem, py::arg("f1"), py::arg("f2"),
        py::arg("dim"), py::arg("instance_seed"));
  m.def("evaluate_objectives", &evaluate_objectives);
  m.def("analytic_pareto_point", &analytic_pareto_point);
  m.def("reference_front", &reference_front, py::arg("instance"),
        py::arg("resolution"), py::arg("cache_dir") = std::string());

  // ---- tpb ----
  py::class_<TpbConfig>(m, "TpbConfig")
      .def(py::init<>())
      .def_readwrite("num_weights", &TpbConfig::num_weights)
      .def_readwrite("degree", &TpbConfig::degree)
      .def_readwrite("first_phase_ratio", &TpbConfig::first_phase_ratio)
      .def_readwrite("budget", &TpbConfig::budget)
      .def_readwrite("optimizer", &TpbConfig::optimizer)
      .def_readwrite("seed", &TpbConfig::seed);

  py::class_<PhaseOneResult>(m, "PhaseOneResult")
      .def_readonly("best_per_weight", &PhaseOneResult::best_per_weight)
      .def_readonly("ref", &PhaseOneResult::ref)
      .def_readonly("evals_used", &PhaseOneResult::evals_used);

  py::class_<InterpolatedPoint>(m, "InterpolatedPoint")
      .def_readonly("x", &InterpolatedPoint::x)
      .def_readonly("f", &InterpolatedPoint::f)
      .def_readonly("t", &InterpolatedPoint::t);

  py::class_<RunMetadata>(m, "RunMetadata")
      .def_readonly("algorithm", &RunMetadata::algorithm)
      .def_readonly("budget_opt", &RunMetadata::budget_opt)
      .def_readonly("phase1_evals", &RunMetadata::phase1_evals)
      .def_readonly("phase2_evals", &RunMetadata::phase2_evals)
      .def_readonly("best_per_weight", &RunMetadata::best_per_weight)
      .def_readonly("model", &RunMetadata::model)
      .def_readonly("fit_degenerate", &RunMetadata::fit_degenerate)
      .def_readonly("wall_seconds", &RunMetadata::wall_seconds)
      .def_readonly("eval_seconds", &RunMetadata::eval_seconds);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("ledger", &RunResult::ledger)
      .def_readonly("meta", &RunResult::meta);

  m.def("phase_budget", &phase_budget, py::arg("budget"),
        py::arg("first_phase_ratio"), py::arg("num_weights"));
  m.def("run_tpb", &run_tpb);
  m.def("run_tpb1", &run_tpb1);
  m.def("run_tpb2", &run_tpb2);
  m.def("latin_hypercube_sample", &latin_hypercube_sample, py::arg("count"),
        py::arg("lower"), py::arg("upper"), py::arg("seed"));

  // ---- assess ----
  py::class_<Archive>(m, "Archive")
      .def(py::init<>())
      .def("insert", &Archive::insert)
      .def("__len__", &Archive::size)
      .def("points", &Archive::points);

  py::class_<IndicatorTrace>(m, "IndicatorTrace")
      .def_readonly("series", &IndicatorTrace::series)
      .def_readonly("targets", &IndicatorTrace::targets)
      .def_readonly("hit_at", &IndicatorTrace::hit_at);

  m.def("dominates", &dominates);
  m.def("nondominated_filter", &nondominated_filter);
  m.def("hypervolume_2d", &hypervolume_2d, py::arg("points"), py::arg("ref"));
  m.def("indicator_value", &indicator_value);
  m.def("indicator_targets", &indicator_targets);
  m.def("build_trace", &build_trace);
  m.def("ecdf", &ecdf, py::arg("traces"), py::arg("eval_grid"));

  // ---- experiment ----
  m.def("run_experiment_from_file",
        [](const std::string& config_path) {
          return run_experiment(parse_config(config_path));
        },
        py::arg("config_path"));
  m.def("emit_reports", &emit_reports, py::arg("out_dir"));
}
