import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rwlab.errors import BlowThresholdExceeded, NonFiniteState, WrapHazard
from rwlab.initial_data import InitialData, gaussian_bump, zero_data
from rwlab.oracles import LinearWaveOracle, dalembert_periodic
from rwlab.solver import (FieldState, Grid, Order, SolverConfig, cfl_dt, dt_summary, initial_state,
                          rhs, simulate, step)
from rwlab.wavespeed import constant_speed, tanh_speed


def test_grid_validation():
    g = Grid(-1.0, 1.0, 16)
    assert g.dx == 0.125 and g.x[0] == -1.0 and len(g.x) == 16 and g.x[-1] == 1.0 - g.dx
    for args in [(-1, 1, 15), (1, 1, 32)]:
        with pytest.raises(ValueError):
            Grid(*args)
    with pytest.raises(ValueError):
        Grid(0, 1, 32, boundary="outflow")


@pytest.mark.parametrize("kw", [dict(cfl=0.0), dict(cfl=1.0), dict(t_end=0.0), dict(lam=2.5),
                                dict(output_every=0), dict(blow_threshold=0.0), dict(limiter="superbee")])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        SolverConfig(**{"t_end": 1.0, **kw})


def test_cfl_dt_examples():
    g = Grid(0, 1, 100)
    ws = constant_speed(3.0)
    st0 = FieldState(0.0, np.zeros(100), np.zeros(100), np.zeros(100))
    assert cfl_dt(st0, g, ws, 0.45) == pytest.approx(0.0015, rel=1e-14)
    assert cfl_dt(st0, Grid(0, 10, 100), constant_speed(2.0), 0.5) == pytest.approx(0.025)
    assert cfl_dt(st0, g, tanh_speed(2, 1), 0.3) == pytest.approx(0.3 * 0.01 / 2)
    with pytest.raises(ValueError):
        cfl_dt(st0, g, ws, 1.2)


def test_cfl_dt_bounded_by_cstar(tanh21):
    g = Grid(0, 1, 64)
    u = np.linspace(-5, 5, 64)
    s = FieldState(0.0, u, np.zeros(64), np.zeros(64))
    assert cfl_dt(s, g, tanh21, 0.45) <= 0.45 * g.dx / tanh21.c_star


def test_step_constant_state():
    g = Grid(0, 1, 32)
    a = 0.7
    s = FieldState(0.0, np.zeros(32), np.full(32, a), np.full(32, a))
    for order in Order:
        new = step(s, g, tanh_speed(), SolverConfig(1.0, order=order, lam=1.0), 0.01)
        np.testing.assert_array_equal(new.R, s.R)
        np.testing.assert_array_equal(new.S, s.S)
        np.testing.assert_allclose(new.u, a * 0.01, rtol=1e-15)


def test_step_zero_state():
    g = Grid(0, 1, 32)
    z = np.zeros(32)
    new = step(FieldState(0.0, z, z, z), g, tanh_speed(), SolverConfig(1.0), 0.01)
    assert new.t == 0.01 and not new.u.any() and not new.R.any() and not new.S.any()


def test_step_translates_R_left():
    g = Grid(0, 1, 100)
    R = np.where((g.x > 0.3) & (g.x < 0.6), 1.0, 0.0)
    s = FieldState(0.0, np.zeros(100), R, np.zeros(100))
    ws = constant_speed(1.0)
    dt = 0.5 * g.dx
    new = step(s, g, ws, SolverConfig(1.0), dt)
    assert not new.S.any()
    # the centre of mass moves left by c*dt; upwind differences telescope exactly
    shift = (np.sum(g.x * new.R) - np.sum(g.x * s.R)) / np.sum(s.R)
    assert shift == pytest.approx(-1.0 * dt, rel=1e-10)
    assert np.sum(new.R) == pytest.approx(np.sum(s.R), rel=1e-14)
    assert new.R.max() <= 1.0 and new.R.min() >= 0.0


def test_nonfinite_state_raises():
    g = Grid(0, 1, 32)
    R = np.zeros(32)
    R[3] = np.nan
    with pytest.raises(NonFiniteState) as exc:
        step(FieldState(0.0, np.zeros(32), R, np.zeros(32)), g, tanh_speed(), SolverConfig(1.0), 0.001)
    assert exc.value.state is not None


def test_blow_threshold_raises():
    g = Grid(0, 1, 32)
    s = FieldState(0.0, np.zeros(32), np.full(32, 5.0), np.full(32, 5.0))
    with pytest.raises(BlowThresholdExceeded):
        step(s, g, tanh_speed(), SolverConfig(1.0, blow_threshold=4.0), 0.001)


def test_simulate_zero_data(tanh21):
    g = Grid(-10, 10, 100)
    traj = simulate(zero_data(g.x), g, tanh21, SolverConfig(1.0, output_every=3))
    assert traj.completed and traj.times[0] == 0.0 and traj.times[-1] == 1.0
    assert not traj.u.any() and not traj.R.any() and not traj.S.any()
    steps = traj.metadata["steps"]
    assert len(traj.frames) == 1 + steps // 3 + (steps % 3 != 0)
    assert dt_summary(traj)["steps"] == steps
    assert sum(traj.metadata["dt_history"]) == pytest.approx(1.0, rel=1e-13)


def test_simulate_rejects_mismatched_grid(tanh21):
    g = Grid(-10, 10, 100)
    with pytest.raises(ValueError):
        simulate(zero_data(np.linspace(-10, 10, 50)), g, tanh21, SolverConfig(1.0))


def test_wrap_hazard_warning(tanh21):
    g = Grid(-5, 5, 100)
    d = gaussian_bump(0.1, 0, 1.0, 0.0, g.x)
    with pytest.warns(WrapHazard):
        traj = simulate(d, g, tanh21, SolverConfig(2.0))
    assert traj.metadata["warnings"][0].startswith("WrapHazard")


def test_blowup_returns_partial_trajectory(tanh21):
    g = Grid(-10, 10, 400)
    d = gaussian_bump(1.0, 0.0, 1.0, 0.0, g.x)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        traj = simulate(d, g, tanh21, SolverConfig(1.0, blow_threshold=0.5))
    assert traj.blowup is not None and traj.blowup.detected and not traj.completed
    assert traj.times[-1] < 1.0 and "aborted" in traj.metadata


def _dalembert_l1(order, n, t=3.0):
    ws = constant_speed(2.0)
    g = Grid(-20, 20, n)
    d = gaussian_bump(1.0, 0.0, 2.0, 0.0, g.x)
    traj = simulate(d, g, ws, SolverConfig(t, order=order, output_every=10**6))
    exact = dalembert_periodic(LinearWaveOracle.from_data(d, 2.0), t, g.x, g.length)
    return g.dx * np.sum(np.abs(traj.final.u - exact))


def test_dalembert_first_order():
    e1, e2 = _dalembert_l1(Order.UPWIND1, 400), _dalembert_l1(Order.UPWIND1, 800)
    assert 1.7 <= e1 / e2 <= 2.3


def test_dalembert_second_order():
    e1, e2 = _dalembert_l1(Order.MUSCL2, 400), _dalembert_l1(Order.MUSCL2, 800)
    assert 3.2 <= e1 / e2 <= 4.8


def _final_u(n, order, ws, t=1.0):
    g = Grid(-20, 20, n)
    d = gaussian_bump(0.6, 0.0, 2.0, 0.3, g.x)
    return simulate(d, g, ws, SolverConfig(t, order=order, output_every=10**6)).final.u, g


@pytest.mark.parametrize("order, lo, hi", [(Order.UPWIND1, 1.7, 2.3), (Order.MUSCL2, 3.2, 4.8)])
def test_self_convergence(order, lo, hi, tanh21):
    u = {n: _final_u(n, order, tanh21) for n in (400, 800, 1600)}
    # compare on the coarse nodes, which are shared by every refinement
    d1 = np.sum(np.abs(u[400][0] - u[800][0][::2])) * u[400][1].dx
    d2 = np.sum(np.abs(u[800][0] - u[1600][0][::2])) * u[800][1].dx
    assert lo <= d1 / d2 <= hi


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), speed=st.floats(0.5, 3.0))
def test_discrete_max_principle(seed, speed):
    rng = np.random.default_rng(seed)
    n = 64
    g = Grid(0, 1, n)
    R0, S0 = rng.normal(size=(2, n))
    d = InitialData(g.x, np.zeros(n), np.zeros(n), np.zeros(n), (0.0, 1.0))
    ws = constant_speed(speed)
    state = FieldState(0.0, d.u0, R0, S0)
    cfg = SolverConfig(1.0, order=Order.UPWIND1)
    for _ in range(30):
        state = step(state, g, ws, cfg, cfl_dt(state, g, ws, 0.9))
        assert R0.min() <= state.R.min() and state.R.max() <= R0.max()
        assert S0.min() <= state.S.min() and state.S.max() <= S0.max()


@pytest.mark.parametrize("order", list(Order))
def test_time_reversal_linear(order):
    ws = constant_speed(2.0)
    g = Grid(-20, 20, 800)
    d = gaussian_bump(1.0, 0.0, 2.0, 0.4, g.x)
    cfg = SolverConfig(2.0, order=order, output_every=10**6)
    fwd = simulate(d, g, ws, cfg).final
    exact = dalembert_periodic(LinearWaveOracle.from_data(d, 2.0), 2.0, g.x, g.length)
    # L1, so the errors of the two half-waves add rather than stack at the peak
    one_way = g.dx * np.sum(np.abs(fwd.u - exact))
    # reversing time maps u_t -> -u_t, i.e. (R, S) -> (-S, -R)
    back = FieldState(0.0, fwd.u, -fwd.S, -fwd.R)
    while back.t < 2.0 - 1e-12:
        dt = min(cfl_dt(back, g, ws, cfg.cfl), 2.0 - back.t)
        back = step(back, g, ws, cfg, dt)
    assert g.dx * np.sum(np.abs(back.u - d.u0)) <= 2 * one_way


def test_rhs_lambda0_uses_specialised_sources(tanh21):
    rng = np.random.default_rng(5)
    u, R, S = rng.normal(size=(3, 64))
    a = rhs(u, R, S, tanh21, 0.0, 0.1)
    b = rhs(u, R, S, tanh21, 1e-300, 0.1)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-13, atol=1e-15)


def test_initial_state_matches_riemann(tanh21):
    g = Grid(-10, 10, 200)
    d = gaussian_bump(1.0, 0.0, 2.0, 0.5, g.x)
    s = initial_state(d, tanh21)
    np.testing.assert_allclose(s.ut, d.u1, atol=1e-15)
    np.testing.assert_allclose(s.ux(tanh21), d.u0_prime, atol=1e-15)


@pytest.mark.parametrize("limiter", ["minmod", "vanleer", "mc"])
def test_muscl_limiters_bounded_on_step(limiter):
    g = Grid(0, 1, 200)
    R = np.where((g.x > 0.3) & (g.x < 0.6), 1.0, 0.0)
    s = FieldState(0.0, np.zeros(200), R, R[::-1].copy())
    ws = constant_speed(1.0)
    cfg = SolverConfig(1.0, order=Order.MUSCL2, limiter=limiter)
    for _ in range(50):
        s = step(s, g, ws, cfg, 0.4 * g.dx)
    assert s.R.min() >= -1e-12 and s.R.max() <= 1 + 1e-12
