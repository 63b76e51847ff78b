"""Reference solutions that do not share code with the PDE solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


class CachedAntiderivative:
    """``F(x) = int_{a}^{x} f`` by composite 10-point Gauss-Legendre.

    Panel-end values are cached once; each evaluation adds one Gauss-Legendre
    pass over the partial panel. ``f`` must vanish outside ``[a, b]``.
    """

    def __init__(self, f, a, b, panel=0.05):
        self.f, self.a, self.b = f, float(a), float(b)
        n = max(1, int(np.ceil((self.b - self.a) / panel)))
        self.edges = np.linspace(self.a, self.b, n + 1)
        left, right = self.edges[:-1], self.edges[1:]
        self.cum = np.concatenate([[0.0], np.cumsum(self._gl(left, right))])

    def _gl(self, lo, hi):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        pts = mid[..., None] + half[..., None] * _GL_NODES
        return half * (self.f(pts) @ _GL_WEIGHTS)

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xc = np.clip(x, self.a, self.b)
        k = np.clip(np.searchsorted(self.edges, xc, side="right") - 1, 0, len(self.edges) - 2)
        return self.cum[k] + self._gl(self.edges[k], xc)


@dataclass
class LinearWaveOracle:
    """Exact solution of ``u_tt = c^2 u_xx`` on the line for constant ``c``.

    ``support`` is an interval outside which ``u1`` vanishes.
    """

    c: float
    u0: Callable
    u1: Callable
    support: tuple[float, float]
    U1: CachedAntiderivative = field(init=False, repr=False)

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive")
        self.U1 = CachedAntiderivative(self.u1, *self.support)

    @classmethod
    def from_data(cls, data, c):
        if data.u0_fn is None or data.u1_fn is None:
            raise ValueError("initial data carries no analytic profiles")
        return cls(float(c), data.u0_fn, data.u1_fn, data.support)


def dalembert(oracle: LinearWaveOracle, t, x):
    """``(u0(x-ct) + u0(x+ct))/2 + (U1(x+ct) - U1(x-ct))/(2c)``."""
    if np.any(np.asarray(t) < 0):
        raise ValueError("t must be nonnegative")
    c = oracle.c
    x = np.asarray(x, dtype=float)
    xm, xp = x - c * t, x + c * t
    out = 0.5 * (oracle.u0(xm) + oracle.u0(xp)) + (oracle.U1(xp) - oracle.U1(xm)).reshape(np.shape(xp)) / (2 * c)
    return out


def dalembert_periodic(oracle: LinearWaveOracle, t, x, period):
    """d'Alembert solution folded onto a periodic domain of length ``period``.

    Valid while the data support plus ``2 c t`` fits within one period, so
    only the nearest images contribute.
    """
    x = np.asarray(x, dtype=float)
    return sum(dalembert(oracle, t, x + k * period) for k in (-1, 0, 1))


def ode_reference(rhs, y0: float, t_end: float, n_steps: int):
    """Classical fourth-order Runge-Kutta; returns ``(t, y)`` arrays of length ``n_steps + 1``."""
    if n_steps < 10:
        raise ValueError("n_steps must be >= 10")
    h = t_end / n_steps
    t = np.linspace(0.0, t_end, n_steps + 1)
    y = np.empty(n_steps + 1)
    y[0] = yk = float(y0)
    for k in range(n_steps):
        tk = t[k]
        k1 = rhs(tk, yk)
        k2 = rhs(tk + h / 2, yk + h / 2 * k1)
        k3 = rhs(tk + h / 2, yk + h / 2 * k2)
        k4 = rhs(tk + h, yk + h * k3)
        yk = yk + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        y[k + 1] = yk
    return t, y


def envelope_rhs(A, P, eta=0.0):
    """Right side ``A (P y - P^2) - eta`` of the comparison ODE."""
    return lambda t, y: A * (P * y - P * P) - eta
