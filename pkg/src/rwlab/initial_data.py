"""Initial data ``(u0, u1)`` on a grid and the initial Riemann data ``R0, S0``."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .riemann import to_riemann

# vanishing level below which data counts as outside its support
SUPPORT_EPS = 1e-12


@dataclass(frozen=True)
class InitialData:
    """Samples of ``u0``, ``u1`` and ``u0'`` on the grid ``x``.

    ``u0_fn`` / ``u1_fn`` are the continuous profiles when the data came from
    an analytic generator; the d'Alembert oracle needs them.
    """

    x: np.ndarray
    u0: np.ndarray
    u1: np.ndarray
    u0_prime: np.ndarray
    support: tuple[float, float]
    u0_fn: Optional[Callable] = field(default=None, repr=False, compare=False)
    u1_fn: Optional[Callable] = field(default=None, repr=False, compare=False)
    u0_prime_fn: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.x)
        for name in ("u0", "u1", "u0_prime"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has length {len(getattr(self, name))}, grid has {n}")

    @property
    def support_width(self) -> float:
        return self.support[1] - self.support[0]


def _smooth_step(s):
    """C-infinity step: 0 for s <= 0, 1 for s >= 1."""
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        f0 = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
        f1 = np.where(s < 1, np.exp(-1.0 / np.where(s < 1, 1.0 - s, 1.0)), 0.0)
    return f0 / (f0 + f1)


def _smooth_step_prime(s):
    s = np.asarray(s, dtype=float)
    inside = (s > 0) & (s < 1)
    t = np.where(inside, s, 0.5)
    f0, f1 = np.exp(-1.0 / t), np.exp(-1.0 / (1.0 - t))
    d = (f0 / t**2 * f1 + f0 * f1 / (1.0 - t) ** 2) / (f0 + f1) ** 2
    return np.where(inside, d, 0.0)


def smooth_window(x, center, inner, outer):
    """Cutoff equal to 1 for ``|x-center| <= inner`` and 0 beyond ``outer``."""
    r = np.abs(np.asarray(x, dtype=float) - center)
    return 1.0 - _smooth_step((r - inner) / (outer - inner))


def smooth_window_prime(x, center, inner, outer):
    d = np.asarray(x, dtype=float) - center
    return -np.sign(d) * _smooth_step_prime((np.abs(d) - inner) / (outer - inner)) / (outer - inner)


@dataclass(frozen=True)
class GaussianProfile:
    """``amplitude * exp(-(x-center)^2/width^2)``, cut off smoothly between
    ``taper * width`` and ``radius * width`` from the center."""

    amplitude: float
    center: float = 0.0
    width: float = 1.0
    taper: float = 3.0
    radius: float = 4.5

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("width must be positive")
        if not 0 < self.taper < self.radius:
            raise ValueError("need 0 < taper < radius")

    @property
    def support(self):
        r = self.radius * self.width
        return (self.center - r, self.center + r)

    def _parts(self, x):
        x = np.asarray(x, dtype=float)
        w, c = self.width, self.center
        g = np.exp(-((x - c) / w) ** 2)
        chi = smooth_window(x, c, self.taper * w, self.radius * w)
        return x, g, chi

    def __call__(self, x):
        _, g, chi = self._parts(x)
        return self.amplitude * g * chi

    def derivative(self, x):
        x, g, chi = self._parts(x)
        w, c = self.width, self.center
        dchi = smooth_window_prime(x, c, self.taper * w, self.radius * w)
        return self.amplitude * g * (-2.0 * (x - c) / w**2 * chi + dchi)


def _union(a, b):
    return (min(a[0], b[0]), max(a[1], b[1]))


def gaussian_bump(amplitude, center, width, velocity_amplitude, x, *,
                  velocity_center=None, velocity_width=None,
                  taper=3.0, radius=4.5) -> InitialData:
    """Compactly supported Gaussian displacement plus a Gaussian velocity bump.

    The velocity bump shares ``center`` and ``width`` unless overridden.
    ``u0_prime`` is exact.
    """
    p0 = GaussianProfile(amplitude, center, width, taper, radius)
    p1 = GaussianProfile(velocity_amplitude,
                         center if velocity_center is None else velocity_center,
                         width if velocity_width is None else velocity_width,
                         taper, radius)
    x = np.asarray(x, dtype=float)
    return InitialData(x, p0(x), p1(x), p0.derivative(x), _union(p0.support, p1.support),
                       u0_fn=p0, u1_fn=p1, u0_prime_fn=p0.derivative)


def initial_riemann(data: InitialData, ws):
    """``R0 = u1 + c(u0) u0'`` and ``S0 = u1 - c(u0) u0'`` pointwise."""
    return to_riemann(data.u1, data.u0_prime, ws.c(data.u0))


def nonpositive_riemann_data(base: InitialData, slack: float, ws) -> InitialData:
    """Replace the velocity of ``base`` so that ``R0 <= 0`` and ``S0 <= 0``.

    Sets ``u1 = -c(u0)|u0'| - slack * w`` where ``w`` is a smooth window equal
    to one on the support of ``base``. The sign condition holds exactly in
    floating point: ``initial_riemann`` adds back the same product ``c u0'``.
    """
    if slack < 0:
        raise ValueError("slack must be nonnegative")
    c = ws.c(base.u0)
    lo, hi = base.support
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    w = smooth_window(base.x, mid, 0.9 * half, half) if half > 0 else np.zeros_like(base.x)
    u1 = -(c * np.abs(base.u0_prime)) - slack * w
    return InitialData(base.x, base.u0, u1, base.u0_prime, base.support,
                       u0_fn=base.u0_fn, u1_fn=None, u0_prime_fn=base.u0_prime_fn)


def simple_wave_data(base: InitialData, ws) -> InitialData:
    """Left-moving simple-wave data: ``u1 = c(u0) u0'``, so ``S0 == 0`` and ``R0 = 2 c(u0) u0'``.

    Steep ``u0`` gives a strongly positive R0 region on its rising flank,
    the setting in which the lambda > 0 equations can form singularities.
    """
    c = ws.c(base.u0)
    u1_fn = None
    if base.u0_fn is not None:
        u0_fn, du0 = base.u0_fn, base.u0_prime_fn
        u1_fn = lambda x: ws.c(u0_fn(x)) * du0(x)  # noqa: E731
    return InitialData(base.x, base.u0, c * base.u0_prime, base.u0_prime, base.support,
                       u0_fn=base.u0_fn, u1_fn=u1_fn, u0_prime_fn=base.u0_prime_fn)


def zero_data(x) -> InitialData:
    x = np.asarray(x, dtype=float)
    z = np.zeros_like(x)
    zero = GaussianProfile(0.0)
    return InitialData(x, z, z.copy(), z.copy(), (0.0, 0.0),
                       u0_fn=zero, u1_fn=zero, u0_prime_fn=zero.derivative)


def load_csv(path, x=None) -> InitialData:
    """Read columns ``x,u0,u1,u0_prime``.

    When ``x`` (the simulation grid) is given the file must be sampled on it.
    Warns if the data does not vanish at the file's edges, since bound
    constants then only see the truncated data.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"x", "u0", "u1", "u0_prime"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing column(s) {sorted(missing)}")
        rows = [(float(r["x"]), float(r["u0"]), float(r["u1"]), float(r["u0_prime"])) for r in reader]
    arr = np.array(rows, dtype=float).reshape(-1, 4)
    fx, u0, u1, up = arr.T
    if x is not None:
        x = np.asarray(x, dtype=float)
        if len(x) != len(fx) or not np.allclose(x, fx, rtol=0, atol=1e-9 * max(1.0, np.abs(x).max())):
            raise ValueError(f"{path}: x column does not match the simulation grid")
        fx = x
    edge = max(abs(u0[0]), abs(u0[-1]), abs(u1[0]), abs(u1[-1]))
    if edge > SUPPORT_EPS:
        warnings.warn(f"{path}: data does not vanish at the domain edges (|value| = {edge:.3g}); "
                      "grid min/max only approximate inf/sup over the line", stacklevel=2)
    nz = np.nonzero((np.abs(u0) > SUPPORT_EPS) | (np.abs(u1) > SUPPORT_EPS))[0]
    support = (float(fx[nz[0]]), float(fx[nz[-1]])) if len(nz) else (0.0, 0.0)
    return InitialData(fx, u0, u1, up, support)


def save_csv(data: InitialData, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "u0", "u1", "u0_prime"])
        for row in zip(data.x, data.u0, data.u1, data.u0_prime):
            w.writerow([f"{v:.17g}" for v in row])
