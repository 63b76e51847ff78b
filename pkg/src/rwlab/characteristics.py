"""Backward tracing of characteristics through a stored trajectory.

A Minus curve solves ``dX/dtau = -c(u(tau, X))`` and carries ``R/sqrt(c)``;
a Plus curve solves ``dX/dtau = +c(u)`` and carries ``S/sqrt(c)``. For
lambda = 0 both weighted values are nonincreasing along their curves.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CurveLeftDomain
from .solver import frame_spacing_ok


class Direction(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> float:
        return 1.0 if self is Direction.PLUS else -1.0


@dataclass
class CharacteristicCurve:
    direction: Direction
    anchor: tuple[float, float]
    tau: np.ndarray    # strictly increasing, tau[-1] == anchor time
    X: np.ndarray      # unwrapped positions, X[-1] == anchor x
    value: np.ndarray  # R/sqrt(c) on Minus curves, S/sqrt(c) on Plus curves
    dx: float
    dt: float
    lam: float

    def rows(self):
        return np.column_stack([self.tau, self.X, self.value])


class _Sampler:
    """Linear interpolation in x (periodic) and t over the stored frames."""

    def __init__(self, traj):
        self.traj = traj
        self.grid = traj.grid
        self.times = traj.times
        self.fields = {"u": traj.u, "R": traj.R, "S": traj.S}

    def _space(self, arr, X):
        g = self.grid
        s = (X - g.x_min) / g.dx
        i0 = math.floor(s)
        w = s - i0
        i0 %= g.n
        return (1 - w) * arr[i0] + w * arr[(i0 + 1) % g.n]

    def at(self, name, tau, X):
        k = int(np.searchsorted(self.times, tau, side="right")) - 1
        k = min(max(k, 0), len(self.times) - 1)
        f = self.fields[name]
        a = self._space(f[k], X)
        if self.times[k] == tau or k == len(self.times) - 1:
            return a
        w = (tau - self.times[k]) / (self.times[k + 1] - self.times[k])
        return (1 - w) * a + w * self._space(f[k + 1], X)


def trace(traj, anchor, direction) -> CharacteristicCurve:
    """Integrate a characteristic backward from ``anchor = (t, x)`` to ``tau = 0``.

    Heun steps land on the stored frame times. Raises
    :class:`CurveLeftDomain` if the unwrapped curve leaves ``[x_min, x_max]``.
    """
    direction = Direction(direction)
    t0, x0 = float(anchor[0]), float(anchor[1])
    g, ws = traj.grid, traj.ws
    times = traj.times
    if not 0 <= t0 <= times[-1] * (1 + 1e-12):
        raise ValueError(f"anchor time {t0} outside [0, {times[-1]}]")
    if not g.x_min <= x0 <= g.x_max:
        raise ValueError(f"anchor x {x0} outside [{g.x_min}, {g.x_max}]")
    if not frame_spacing_ok(traj):
        warnings.warn("stored frames are more than 10 time steps apart; "
                      "lower output_every for accurate tracing", stacklevel=2)

    sampler = _Sampler(traj)
    sign = direction.sign
    carried = "R" if direction is Direction.MINUS else "S"

    def speed(tau, X):
        return sign * float(ws.c(sampler.at("u", tau, X)))

    def weighted(tau, X):
        u = sampler.at("u", tau, X)
        return float(sampler.at(carried, tau, X) / math.sqrt(float(ws.c(u))))

    k = int(np.searchsorted(times, t0, side="right")) - 1
    stops = list(times[: k + 1][::-1])
    if stops and stops[0] == t0:
        stops = stops[1:]

    taus, xs, vals = [t0], [x0], [None]
    tau, X = t0, x0
    for tb in stops:
        h = tau - tb
        va = speed(tau, X)
        Xs = X - h * va
        Xb = X - 0.5 * h * (va + speed(tb, Xs))
        if not g.x_min <= Xb <= g.x_max:
            raise CurveLeftDomain(f"{direction.value} characteristic from ({t0:g}, {x0:g}) "
                                  f"left [{g.x_min:g}, {g.x_max:g}] at tau={tb:g} (X={Xb:.6g})")
        tau, X = tb, Xb
        taus.append(tau)
        xs.append(X)
        vals.append(weighted(tau, X))

    if k + 1 < len(times) and times[k] != t0:
        # off-frame anchor: interpolate in time along the curve, not at fixed x,
        # because the carried value is nearly constant along it
        ta, tb = times[k], times[k + 1]
        w = (t0 - ta) / (tb - ta)
        back = vals[1] if len(vals) > 1 else weighted(ta, x0 - (t0 - ta) * speed(t0, x0))
        ahead = x0 + (tb - t0) * speed(t0, x0)
        vals[0] = (1 - w) * back + w * weighted(tb, min(max(ahead, g.x_min), g.x_max))
    else:
        vals[0] = weighted(t0, x0)

    dts = traj.metadata.get("dt_history") or [0.0]
    return CharacteristicCurve(direction, (t0, x0), np.array(taus[::-1]), np.array(xs[::-1]),
                               np.array(vals[::-1]), g.dx, float(max(dts)), traj.lam)


@dataclass
class MonotonicityReport:
    max_increase_rate: float
    passed: bool
    tol: float
    applicable: bool

    def to_dict(self):
        return dict(vars(self))


def weighted_monotonicity_report(curve: CharacteristicCurve, kappa: float = 5.0) -> MonotonicityReport:
    """Check that the weighted value never grows faster than ``kappa (dx + dt)``.

    Pass/fail only has meaning for lambda = 0 curves; otherwise the report
    is marked not applicable.
    """
    tol = kappa * (curve.dx + curve.dt)
    if len(curve.tau) < 2:
        return MonotonicityReport(0.0, True, tol, curve.lam == 0)
    dtau = np.diff(curve.tau)
    dv = np.diff(curve.value)
    rate = dv / dtau
    return MonotonicityReport(max(0.0, float(rate.max())), bool(np.all(dv <= tol * dtau)),
                              tol, curve.lam == 0)


def speed_sandwich_ok(curve: CharacteristicCurve, c_star: float, c_sup: float, eps=None) -> bool:
    """``c_star dtau - eps <= |dX| <= c_sup dtau + eps`` on every increment (eps = 2 dx)."""
    eps = 2 * curve.dx if eps is None else eps
    dtau = np.diff(curve.tau)
    dX = np.abs(np.diff(curve.X))
    return bool(np.all(dX >= c_star * dtau - eps) and np.all(dX <= c_sup * dtau + eps))


def random_anchors(traj, direction, count: int, rng) -> list[tuple[float, float]]:
    """Anchors whose backward curves stay inside the domain.

    Backward from time t a curve moves at most ``c_sup t``, so Minus anchors
    keep that distance from ``x_max`` and Plus anchors from ``x_min``.
    """
    direction = Direction(direction)
    g, T = traj.grid, float(traj.times[-1])
    reach = traj.ws.c_sup
    out = []
    for _ in range(count):
        t = float(rng.uniform(0.0, T))
        margin = reach * t + g.dx
        if direction is Direction.MINUS:
            lo, hi = g.x_min, g.x_max - margin
        else:
            lo, hi = g.x_min + margin, g.x_max
        if hi <= lo:
            t, lo, hi = 0.0, g.x_min, g.x_max
        out.append((t, float(rng.uniform(lo, hi))))
    return out
