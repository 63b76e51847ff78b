"""Explicit finite-difference solver for the (u, R, S) system on a periodic grid.

R travels left with speed c(u) and S travels right, so R uses right-biased
and S left-biased one-sided differences. The sources are added pointwise
inside each stage of Heun's method (two-stage SSP Runge-Kutta), and u is
advanced by ``u_t = (R + S)/2``.
"""

from __future__ import annotations

import enum
import logging
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import BlowThresholdExceeded, NonFiniteState, SolverError, WrapHazard
from .initial_data import InitialData, initial_riemann
from .riemann import source_terms, source_terms_lambda0

log = logging.getLogger(__name__)


class Order(str, enum.Enum):
    UPWIND1 = "upwind1"
    MUSCL2 = "muscl2"


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n: int
    boundary: str = "periodic"

    def __post_init__(self):
        if self.n < 16:
            raise ValueError(f"grid needs n >= 16 cells, got {self.n}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.boundary != "periodic":
            raise ValueError("only periodic boundaries are supported")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)


@dataclass(frozen=True)
class FieldState:
    t: float
    u: np.ndarray
    R: np.ndarray
    S: np.ndarray

    @property
    def ut(self) -> np.ndarray:
        return (self.R + self.S) / 2

    def ux(self, ws) -> np.ndarray:
        return (self.R - self.S) / (2 * ws.c(self.u))


@dataclass(frozen=True)
class SolverConfig:
    t_end: float
    cfl: float = 0.45
    lam: float = 0.0
    output_every: int = 10
    order: Order = Order.UPWIND1
    blow_threshold: float = 1e3
    limiter: str = "vanleer"

    def __post_init__(self):
        object.__setattr__(self, "order", Order(self.order))
        if not 0 < self.cfl < 1:
            raise ValueError(f"cfl must lie in (0, 1), got {self.cfl}")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if not 0 <= self.lam <= 2:
            raise ValueError(f"lambda must lie in [0, 2], got {self.lam}")
        if self.output_every < 1:
            raise ValueError("output_every must be >= 1")
        if not self.blow_threshold > 0:
            raise ValueError("blow_threshold must be positive")
        if self.limiter not in LIMITERS:
            raise ValueError(f"unknown limiter {self.limiter!r}; choose from {sorted(LIMITERS)}")


@dataclass
class Trajectory:
    grid: Grid
    ws: object
    config: SolverConfig
    frames: list[FieldState]
    metadata: dict = field(default_factory=dict)
    blowup: Optional[object] = None

    @property
    def lam(self) -> float:
        return self.config.lam

    @cached_property
    def times(self) -> np.ndarray:
        return np.array([f.t for f in self.frames])

    @cached_property
    def u(self) -> np.ndarray:
        return np.stack([f.u for f in self.frames])

    @cached_property
    def R(self) -> np.ndarray:
        return np.stack([f.R for f in self.frames])

    @cached_property
    def S(self) -> np.ndarray:
        return np.stack([f.S for f in self.frames])

    @property
    def final(self) -> FieldState:
        return self.frames[-1]

    @property
    def completed(self) -> bool:
        return self.blowup is None or not self.blowup.detected


# slope limiters on backward/forward differences a, b
def _minmod(a, b):
    return np.where(a * b > 0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def _vanleer(a, b):
    ab = a * b
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(ab > 0, 2 * ab / (a + b), 0.0)


def _mc(a, b):
    return np.where(a * b > 0,
                    np.sign(a) * np.minimum(np.minimum(2 * np.abs(a), 2 * np.abs(b)), 0.5 * np.abs(a + b)),
                    0.0)


LIMITERS = {"minmod": _minmod, "vanleer": _vanleer, "mc": _mc}


def _upwind_derivatives(R, S, dx, order, limiter):
    """Upwind approximations of R_x (information from the right) and S_x (from the left)."""
    if order is Order.UPWIND1:
        return (np.roll(R, -1) - R) / dx, (S - np.roll(S, 1)) / dx
    lim = LIMITERS[limiter]
    dR = np.diff(R, append=R[:1])                 # R[i+1] - R[i]
    sR = lim(np.roll(dR, 1), dR)
    dS = np.diff(S, append=S[:1])
    sS = lim(np.roll(dS, 1), dS)
    # R face value at i+1/2 comes from cell i+1, S face value from cell i
    Rx = (dR - 0.5 * (np.roll(sR, -1) - sR)) / dx
    Sx = (dS + 0.5 * (np.roll(sS, -1) - sS)) / dx
    return Rx, np.roll(Sx, 1)


def rhs(u, R, S, ws, lam, dx, order=Order.UPWIND1, limiter="vanleer"):
    """Semi-discrete time derivatives ``(u_t, R_t, S_t)``."""
    c = ws.c(u)
    cp = ws.c_prime(u)
    Rx, Sx = _upwind_derivatives(R, S, dx, Order(order), limiter)
    if lam == 0:
        fR, fS = source_terms_lambda0(R, S, c, cp)
    else:
        fR, fS = source_terms(R, S, c, cp, lam)
    return 0.5 * (R + S), c * Rx + fR, -c * Sx + fS


def initial_state(data: InitialData, ws, t: float = 0.0) -> FieldState:
    R0, S0 = initial_riemann(data, ws)
    return FieldState(t, np.array(data.u0, dtype=float), np.asarray(R0, dtype=float),
                      np.asarray(S0, dtype=float))


def cfl_dt(state: FieldState, grid: Grid, ws, cfl: float) -> float:
    """``cfl * dx / max c(u)``."""
    if not 0 < cfl < 1:
        raise ValueError(f"cfl must lie in (0, 1), got {cfl}")
    return cfl * grid.dx / float(np.max(ws.c(state.u)))


def step(state: FieldState, grid: Grid, ws, config: SolverConfig, dt: float) -> FieldState:
    """Advance one Heun step of size ``dt``.

    Raises
    ------
    NonFiniteState
        If any entry of the new state is NaN or infinite.
    BlowThresholdExceeded
        If ``max(|u_t|, |u_x|)`` exceeds ``config.blow_threshold``.
    """
    dx, lam, order, lim = grid.dx, config.lam, config.order, config.limiter
    u, R, S = state.u, state.R, state.S
    ku, kR, kS = rhs(u, R, S, ws, lam, dx, order, lim)
    u1, R1, S1 = u + dt * ku, R + dt * kR, S + dt * kS
    ku, kR, kS = rhs(u1, R1, S1, ws, lam, dx, order, lim)
    new = FieldState(state.t + dt,
                     0.5 * (u + u1 + dt * ku),
                     0.5 * (R + R1 + dt * kR),
                     0.5 * (S + S1 + dt * kS))
    if not (np.isfinite(new.u).all() and np.isfinite(new.R).all() and np.isfinite(new.S).all()):
        raise NonFiniteState(f"non-finite values at t={new.t:.6g}", state=new)
    peak = max(float(np.max(np.abs(new.ut))), float(np.max(np.abs(new.ux(ws)))))
    if peak > config.blow_threshold:
        raise BlowThresholdExceeded(
            f"max(|u_t|, |u_x|) = {peak:.4g} exceeds {config.blow_threshold:.4g} at t={new.t:.6g}",
            state=new)
    return new


def wrap_hazard(data: InitialData, grid: Grid, ws, t_end: float) -> Optional[str]:
    """Message if waves leaving the support could wrap around the periodic domain."""
    need = data.support_width + 2 * ws.c_sup * t_end
    if grid.length < need:
        return (f"domain length {grid.length:g} < support width {data.support_width:g} "
                f"+ 2 c_sup t_end = {need:g}; waves may wrap around the periodic boundary")
    return None


def simulate(data: InitialData, grid: Grid, ws, config: SolverConfig) -> Trajectory:
    """Integrate from ``data`` to ``config.t_end``.

    Frames are stored at t=0, every ``config.output_every`` steps and at
    ``t_end``. When the blow threshold trips, the trajectory up to that step
    is returned with ``trajectory.blowup`` set; other solver errors are
    re-raised with the partial trajectory attached as ``err.trajectory``.
    """
    from .diagnostics import detect_blowup

    if len(data.x) != grid.n or not np.allclose(data.x, grid.x, rtol=0, atol=1e-9 * grid.length):
        raise ValueError("initial data is not sampled on the simulation grid")

    notes = []
    hazard = wrap_hazard(data, grid, ws, config.t_end)
    if hazard:
        notes.append("WrapHazard: " + hazard)
        warnings.warn(hazard, WrapHazard, stacklevel=2)
    log.info("cfl * c_sup / c_star = %.4g", config.cfl * ws.c_sup / ws.c_star)

    state = initial_state(data, ws)
    frames = [state]
    dts = []
    traj = Trajectory(grid, ws, config, frames,
                      {"lambda": config.lam, "dt_history": dts, "warnings": notes,
                       "order": config.order.value, "cfl": config.cfl})
    nstep = 0
    t_end = config.t_end
    try:
        while state.t < t_end:
            dt = cfl_dt(state, grid, ws, config.cfl)
            last = state.t + dt >= t_end * (1 - 1e-14)
            if last:
                dt = t_end - state.t
            state = step(state, grid, ws, config, dt)
            if last:
                state = FieldState(t_end, state.u, state.R, state.S)
            dts.append(dt)
            nstep += 1
            if last or nstep % config.output_every == 0:
                frames.append(state)
    except BlowThresholdExceeded as err:
        dts.append(dt)
        frames.append(err.state)
        traj.metadata["steps"] = nstep + 1
        traj.metadata["aborted"] = str(err)
        traj.blowup = detect_blowup(traj, config.blow_threshold)
        return traj
    except SolverError as err:
        traj.metadata["steps"] = nstep
        err.trajectory = traj
        raise
    traj.metadata["steps"] = nstep
    return traj


def dt_summary(traj: Trajectory) -> dict:
    d = np.asarray(traj.metadata.get("dt_history", []), dtype=float)
    if d.size == 0:
        return {"steps": 0}
    return {"steps": int(d.size), "dt_min": float(d.min()), "dt_max": float(d.max()),
            "dt_mean": float(d.mean())}


def frame_spacing_ok(traj: Trajectory, factor: float = 10.0) -> bool:
    """True when stored frames are at most ``factor`` typical steps apart."""
    d = np.asarray(traj.metadata.get("dt_history", []), dtype=float)
    if d.size == 0 or len(traj.frames) < 2:
        return True
    return float(np.max(np.diff(traj.times))) <= factor * float(d.max()) * (1 + 1e-9)
