import warnings

import numpy as np
import pytest

from rwlab.characteristics import (CharacteristicCurve, Direction, random_anchors, speed_sandwich_ok, trace,
                                   weighted_monotonicity_report)
from rwlab.errors import CurveLeftDomain
from rwlab.initial_data import gaussian_bump, zero_data
from rwlab.solver import Grid, SolverConfig, simulate
from rwlab.wavespeed import constant_speed


@pytest.fixture(scope="module")
def const_run():
    ws = constant_speed(2.0)
    g = Grid(-20, 20, 800)
    return simulate(gaussian_bump(1.0, 0.0, 2.0, 0.3, g.x), g, ws, SolverConfig(2.0, output_every=4))


@pytest.fixture(scope="module")
def zero_run(tanh21):
    g = Grid(-10, 10, 200)
    return simulate(zero_data(g.x), g, tanh21, SolverConfig(1.0, output_every=2))


@pytest.mark.parametrize("direction, end", [("minus", 2.0), ("plus", -2.0)])
def test_straight_lines_constant_speed(const_run, direction, end):
    anchor_t = float(const_run.times[np.searchsorted(const_run.times, 1.0)])
    c = trace(const_run, (anchor_t, 0.0), direction)
    assert c.tau[0] == 0.0 and c.tau[-1] == anchor_t
    assert c.X[0] == pytest.approx(end * anchor_t, rel=1e-12)
    assert np.all(np.diff(c.tau) > 0)


@pytest.mark.parametrize("direction", list(Direction))
def test_zero_solution_lines(zero_run, direction):
    c = trace(zero_run, (1.0, 0.0), direction)
    np.testing.assert_allclose(c.X, -direction.sign * 2.0 * (1.0 - c.tau), atol=1e-12)
    rep = weighted_monotonicity_report(c)
    assert rep.passed and rep.max_increase_rate == 0.0 and rep.applicable


def test_anchor_is_last_sample(const_run):
    c = trace(const_run, (1.2345, 0.321), "minus")
    assert (c.tau[-1], c.X[-1]) == (1.2345, 0.321)


def test_constant_speed_value_conserved(const_run):
    rng = np.random.default_rng(0)
    for t, x in random_anchors(const_run, "minus", 10, rng):
        c = trace(const_run, (t, x), "minus")
        rep = weighted_monotonicity_report(c)
        assert rep.passed and rep.max_increase_rate < 1e-2
        assert speed_sandwich_ok(c, 2.0, 2.0)


def test_small_run_monotone_and_sandwich(small_lambda0_run, tanh21):
    rng = np.random.default_rng(1)
    for direction in Direction:
        for t, x in random_anchors(small_lambda0_run, direction, 8, rng):
            c = trace(small_lambda0_run, (t, x), direction)
            assert weighted_monotonicity_report(c).passed
            assert speed_sandwich_ok(c, tanh21.c_star, tanh21.c_sup)


def test_curve_leaving_domain(const_run):
    with pytest.raises(CurveLeftDomain):
        trace(const_run, (2.0, 19.0), "minus")


@pytest.mark.parametrize("anchor", [(-0.1, 0.0), (5.0, 0.0), (1.0, 25.0)])
def test_bad_anchor(const_run, anchor):
    with pytest.raises(ValueError):
        trace(const_run, anchor, "plus")


def test_sparse_frames_warn():
    ws = constant_speed(2.0)
    g = Grid(-10, 10, 200)
    traj = simulate(zero_data(g.x), g, ws, SolverConfig(1.0, output_every=50))
    with pytest.warns(UserWarning, match="10 time steps"):
        trace(traj, (1.0, 0.0), "plus")


def test_report_flags_increase():
    curve = CharacteristicCurve(Direction.MINUS, (1.0, 0.0), np.array([0.0, 0.5, 1.0]), np.zeros(3),
                                np.array([0.0, 0.1, 0.0]), 0.001, 0.001, 0.0)
    rep = weighted_monotonicity_report(curve, kappa=5)
    assert not rep.passed and rep.max_increase_rate == pytest.approx(0.2) and rep.tol == pytest.approx(0.01)
    curve.lam = 1.0
    assert not weighted_monotonicity_report(curve).applicable


def test_random_anchors_stay_inside(small_lambda0_run):
    rng = np.random.default_rng(2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for direction in Direction:
            for a in random_anchors(small_lambda0_run, direction, 30, rng):
                trace(small_lambda0_run, a, direction)
