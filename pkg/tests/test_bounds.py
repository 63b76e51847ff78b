import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rwlab.bounds import (BoundConstants, bound_constants, certify, comparison_gap, default_tolerance,
                          envelope_y, envelope_y_eta)
from rwlab.errors import DomainViolation
from rwlab.initial_data import gaussian_bump, initial_riemann, zero_data
from rwlab.oracles import envelope_rhs, ode_reference
from rwlab.solver import Grid, SolverConfig, simulate
from rwlab.wavespeed import constant_speed, construct


def K(P=1.0, m0=-1.0, A=0.5):
    return BoundConstants(P, 0.0, P, m0, A)


def test_constants_example():
    ws = construct("custom", c=lambda t: 2 + np.tanh(t), c_prime=lambda t: 1 / np.cosh(t) ** 2,
                   c_star=1.0, c_sup=3.0)
    k = bound_constants(np.array([-1.0, 0.5, 0.2]), np.array([-0.3, -2.0, 0.0]), ws)
    assert k.P_R == pytest.approx(0.86603, abs=1e-5) and k.P_S == 0.0 and k.P == k.P_R
    assert k.m0 == -2.0


def test_constants_nonnegative_data_and_zero(tanh21):
    assert bound_constants(np.array([0.0, 1.0]), np.array([2.0, 0.0]), tanh21).m0 == 0.0
    k = bound_constants(np.zeros(5), np.zeros(5), tanh21)
    assert (k.P, k.m0) == (0.0, 0.0)
    with pytest.raises(ValueError):
        bound_constants(np.array([]), np.zeros(1), tanh21)


def test_envelope_y_examples():
    assert envelope_y(K(), 0.0) == -1.0
    assert envelope_y(K(), 4 * math.log(2)) == pytest.approx(-7.0, rel=1e-14)
    assert envelope_y(K(), 2 * math.log(2)) == pytest.approx(-3.0, rel=1e-14)
    assert envelope_y(K(A=0.0), 7.0) == -1.0
    assert envelope_y(K(P=0.0), 7.0) == -1.0
    with pytest.raises(ValueError):
        envelope_y(K(), -1.0)


def test_envelope_y_eta_examples():
    t = np.linspace(0, 3, 7)
    np.testing.assert_allclose(envelope_y_eta(K(), 0.1, t), 1.2 - 2.3 * np.exp(0.5 * t), rtol=1e-14)
    assert envelope_y_eta(K(m0=0.0, A=0.0), 0.1, 2.0) == pytest.approx(-0.3)
    assert envelope_y_eta(K(), 1e-12, 3.0) == pytest.approx(envelope_y(K(), 3.0), abs=1e-9)
    with pytest.raises(ValueError):
        envelope_y_eta(K(), 0.0, 1.0)


def test_envelopes_match_rk4():
    t, y = ode_reference(envelope_rhs(0.5, 1.0), -1.0, 4.0, 4000)
    np.testing.assert_allclose(envelope_y(K(), t), y, rtol=1e-8)
    t, y = ode_reference(envelope_rhs(0.5, 1.0, 0.1), -1.1, 4.0, 4000)
    np.testing.assert_allclose(envelope_y_eta(K(), 0.1, t), y, rtol=1e-8)


@given(P=st.floats(0, 2), m0=st.floats(-3, 0), A=st.floats(0, 1), eta=st.floats(1e-6, 0.5))
def test_envelope_ordering(P, m0, A, eta):
    k = K(P, m0, A)
    t = np.linspace(0, 10, 41)
    y = envelope_y(k, t)
    assert np.all(np.diff(y) <= 0) and np.all(y <= m0)
    assert np.all(envelope_y_eta(k, eta, t) < y)


def test_envelope_gap_linear_in_eta():
    k = K(1.3, -0.7, 0.4)
    t = np.linspace(0, 5, 501)
    gaps = [np.max(envelope_y(k, t) - envelope_y_eta(k, eta, t)) for eta in (0.1, 0.05, 0.025, 0.0125)]
    ratios = np.array(gaps[:-1]) / np.array(gaps[1:])
    assert np.all((ratios >= 1.9) & (ratios <= 2.1))


@given(P=st.floats(0, 2), m0=st.floats(-3, 0), A=st.floats(0, 1), t=st.floats(0, 20))
def test_scale_coherence(P, m0, A, t):
    assert envelope_y(K(2 * P, 2 * m0, A / 2), t) == pytest.approx(2 * envelope_y(K(P, m0, A), t),
                                                                   rel=1e-12, abs=1e-12)


def test_scaling_data_doubles_constants(tanh21):
    rng = np.random.default_rng(3)
    R0, S0 = rng.normal(size=(2, 100))
    a, b = bound_constants(R0, S0, tanh21), bound_constants(2 * R0, 2 * S0, tanh21)
    assert (b.P, b.m0, b.A) == (2 * a.P, 2 * a.m0, a.A)


def test_comparison_gap_examples():
    assert comparison_gap(1.0, -2.0, 1.0) == 0.0
    assert comparison_gap(1.0, -2.0, -2.0) == pytest.approx(3.0)
    assert comparison_gap(1.0, -2.0, 0.5) == 1.75
    s, y, P = 0.5, -2.0, 1.0
    assert s * (y - s) - (P * y - P * P) == 1.75


@pytest.mark.parametrize("P, y, s", [(-1, -2, -1.5), (1, 0, -1), (1, -1, 2)])
def test_comparison_gap_domain(P, y, s):
    with pytest.raises(DomainViolation):
        comparison_gap(P, y, s)


@given(P=st.floats(0, 1e3), a=st.floats(0, 1), b=st.floats(0, 1e3))
def test_comparison_gap_nonnegative(P, a, b):
    y = -b
    s = y + a * (P - y)
    s = min(max(s, y), P)
    assert comparison_gap(P, y, s) >= 0.0


def test_default_tolerance():
    assert default_tolerance(0.01) == pytest.approx(0.1)
    assert default_tolerance(1e-12) == 1e-8


def _run(data, grid, ws, **kw):
    return simulate(data, grid, ws, SolverConfig(**kw))


def test_certify_zero_solution(tanh21):
    g = Grid(-10, 10, 200)
    traj = _run(zero_data(g.x), g, tanh21, t_end=1.0)
    cert = certify(traj, bound_constants(traj.frames[0].R, traj.frames[0].S, tanh21))
    assert cert.passed and cert.verdict == "pass"
    assert cert.max_upper_violation == 0.0 and cert.max_lower_violation == 0.0


def test_certify_constant_speed_exact():
    ws = constant_speed(2.0)
    g = Grid(-20, 20, 800)
    d = gaussian_bump(1.0, 0.0, 1.5, 0.7, g.x)
    traj = _run(d, g, ws, t_end=3.0)
    k = bound_constants(*initial_riemann(d, ws), ws)
    cert = certify(traj, k, tol=0.0)
    assert k.A == 0.0 and cert.passed
    assert cert.max_upper_violation <= 0.0 and cert.max_lower_violation <= 0.0


def test_certify_small_run(small_lambda0_run, tanh21):
    f0 = small_lambda0_run.frames[0]
    cert = certify(small_lambda0_run, bound_constants(f0.R, f0.S, tanh21))
    assert cert.passed and cert.applicable and cert.first_failure is None
    d = cert.to_dict()
    assert set(d) == {"P_R", "P_S", "P", "m0", "A", "tol", "verdict", "applicable", "first_failure", "frames"}
    assert set(d["frames"][0]) == {"t", "minR_minus_y", "minS_minus_y", "maxR_minus_P", "maxS_minus_P"}


def test_certify_records_first_failure(small_lambda0_run, tanh21):
    f0 = small_lambda0_run.frames[0]
    k = bound_constants(f0.R, f0.S, tanh21)
    shrunk = BoundConstants(k.P_R / 2, k.P_S / 2, k.P / 2, k.m0, k.A)
    cert = certify(small_lambda0_run, shrunk, tol=1e-8)
    assert not cert.passed and cert.verdict == "fail"
    ff = cert.first_failure
    assert ff["t"] == 0.0 and ff["bound"] in {"upper_R", "upper_S"} and ff["value"] > shrunk.P


def test_certify_nonzero_lambda_not_applicable(tanh21):
    g = Grid(-10, 10, 200)
    traj = _run(gaussian_bump(0.5, 0, 1.5, 0.2, g.x), g, tanh21, t_end=0.5, lam=1.0)
    f0 = traj.frames[0]
    cert = certify(traj, bound_constants(f0.R, f0.S, tanh21))
    assert not cert.applicable and cert.verdict.endswith("(n/a)")
