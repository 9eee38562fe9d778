"""Smoke tests for the _tpb extension module."""

import numpy as np
import pytest

import _tpb as t


def test_bezier_roundtrip():
    assert t.multinomial_coefficient(2, [1, 1]) == 2
    assert t.enumerate_multi_indices(2, 2) == [[0, 2], [1, 1], [2, 0]]

    samples = [
        (np.array([1.0, 0.0]), np.array([0.0, 0.0])),
        (np.array([0.5, 0.5]), np.array([0.5, 1.0])),
        (np.array([0.0, 1.0]), np.array([1.0, 0.0])),
    ]
    fit = t.fit_ols(samples, 2, 2, 2)
    assert not fit.degenerate
    for param, x in samples:
        np.testing.assert_allclose(t.evaluate_bezier(fit.model, param), x, atol=1e-10)

    reparsed = t.parse_model(t.dump_model(fit.model))
    np.testing.assert_array_equal(
        reparsed.control_points[0], fit.model.control_points[0]
    )


def test_weights_and_grid():
    weights = t.weight_set(3, 2)
    np.testing.assert_array_equal(weights[0], [1.0, 0.0])
    np.testing.assert_array_equal(weights[1], [0.5, 0.5])
    grid = t.simplex_grid(2, 4, True)
    assert [g[0] for g in grid] == [0.2, 0.4, 0.6, 0.8]


def test_optimizer_on_quadratic():
    trace = t.optimize(
        lambda x: float(np.sum((x - 1.0) ** 2)),
        np.full(3, -5.0),
        np.full(3, 5.0),
        80,
        np.zeros(3),
    )
    assert trace.best_value < 1e-6
    assert len(trace.records) <= 80


def test_full_run_and_indicator():
    problem = t.make_problem(t.FunctionKind.Sphere, t.FunctionKind.Sphere, 2, 1)
    cfg = t.TpbConfig()
    cfg.budget = 40
    run = t.run_tpb(problem, cfg)
    assert len(run.ledger) <= 40
    assert t.phase_budget(40, 0.9, 3) == run.meta.budget_opt == 12

    refdata = t.reference_front(problem, 500)
    archive = t.Archive()
    for i in range(len(run.ledger)):
        entry = run.ledger[i]
        archive.insert(entry.x, entry.f)
    value = t.indicator_value(archive, refdata)
    assert np.isfinite(value)
    assert value < refdata.ref_hv  # the run reaches the region of interest

    replay = t.run_tpb(problem, cfg)
    assert len(replay.ledger) == len(run.ledger)
    np.testing.assert_array_equal(replay.ledger[0].x, run.ledger[0].x)


def test_hypervolume_hand_case():
    assert t.hypervolume_2d([np.array([0.25, 0.25])], np.ones(2)) == pytest.approx(
        0.5625
    )


def test_config_error_surfaces_as_python_exception():
    problem = t.make_problem(t.FunctionKind.Sphere, t.FunctionKind.Sphere, 2, 1)
    cfg = t.TpbConfig()
    cfg.budget = 2  # too small for three scalar problems
    with pytest.raises(t.ConfigError):
        t.run_tpb(problem, cfg)
