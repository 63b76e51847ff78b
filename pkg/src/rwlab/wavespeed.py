"""Wave-speed functions ``c(theta)`` for the quasilinear wave family.

Every admissible speed is smooth, uniformly positive and bounded
(``0 < c_star <= c <= c_sup``), nondecreasing, and has a bounded derivative.
The built-in families saturate monotonically, so their infimum and supremum
are stored as exact analytic limits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.special import expit

from .errors import NonFiniteInput, ParameterViolation

DEFAULT_WINDOW = (-50.0, 50.0)
DEFAULT_SAMPLE_COUNT = 20001

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class Family(str, enum.Enum):
    TANH = "tanh"
    LOGISTIC = "logistic"
    ARCTAN = "arctan"
    CUSTOM = "custom"


@dataclass(frozen=True)
class WaveSpeed:
    """An immutable wave speed with its derived constants.

    ``c`` and ``c_prime`` are vectorized and unchecked; use :func:`evaluate`
    when the argument may be non-finite.
    """

    family: Family
    params: Mapping[str, float]
    c_star: float
    c_sup: float
    damping_A: float
    fn: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    fn_prime: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    sample_window: tuple[float, float] = DEFAULT_WINDOW
    sample_count: int = DEFAULT_SAMPLE_COUNT

    def c(self, theta):
        return self.fn(theta)

    def c_prime(self, theta):
        return self.fn_prime(theta)

    @property
    def is_constant(self) -> bool:
        return self.c_star == self.c_sup

    def describe(self) -> dict:
        return {
            "family": self.family.value,
            **{k: float(v) for k, v in self.params.items()},
            "c_star": self.c_star,
            "c_sup": self.c_sup,
            "A": self.damping_A,
        }


def _tanh(c0, delta):
    return (lambda th: c0 + delta * np.tanh(th),
            lambda th: delta / np.cosh(np.clip(th, -350.0, 350.0)) ** 2)


def _logistic(c_minus, c_plus):
    jump = c_plus - c_minus

    def fp(th):
        s = expit(th)
        return jump * s * (1.0 - s)

    return (lambda th: c_minus + jump * expit(th)), fp


def _arctan(c0, delta):
    return (lambda th: c0 + delta * np.arctan(th),
            lambda th: delta / (1.0 + np.square(th)))


def construct(family, *, c=None, c_prime=None, c_star=None, c_sup=None,
              sample_window=DEFAULT_WINDOW, sample_count=DEFAULT_SAMPLE_COUNT,
              **params) -> WaveSpeed:
    """Build a :class:`WaveSpeed` and compute its damping constant.

    Parameters
    ----------
    family : Family or str
        ``tanh`` (``c0``, ``delta``), ``logistic`` (``c_minus``, ``c_plus``),
        ``arctan`` (``c0``, ``delta``) or ``custom``.
    c, c_prime : callable, optional
        Vectorized speed and derivative; required for ``custom``.
    c_star, c_sup : float, optional
        User-asserted bounds; required for ``custom``, ignored otherwise.

    Raises
    ------
    ParameterViolation
        If the family constraint fails.
    """
    family = Family(family)
    params = {k: float(v) for k, v in params.items()}

    def need(*names):
        missing = [n for n in names if n not in params]
        if missing:
            raise ParameterViolation(f"{family.value}: missing parameter(s) {missing}")
        return [params[n] for n in names]

    if family is Family.TANH:
        c0, delta = need("c0", "delta")
        if not (c0 > delta > 0):
            raise ParameterViolation(f"tanh speed requires c0 > delta > 0, got c0={c0}, delta={delta}")
        fn, fp = _tanh(c0, delta)
        lo, hi = c0 - delta, c0 + delta
    elif family is Family.LOGISTIC:
        cm, cp = need("c_minus", "c_plus")
        if not (0 < cm < cp):
            raise ParameterViolation(f"logistic speed requires 0 < c_minus < c_plus, got {cm}, {cp}")
        fn, fp = _logistic(cm, cp)
        lo, hi = cm, cp
    elif family is Family.ARCTAN:
        c0, delta = need("c0", "delta")
        if not (c0 > 0.5 * math.pi * delta > 0):
            raise ParameterViolation(f"arctan speed requires c0 > (pi/2) delta > 0, got c0={c0}, delta={delta}")
        fn, fp = _arctan(c0, delta)
        lo, hi = c0 - 0.5 * math.pi * delta, c0 + 0.5 * math.pi * delta
    else:
        if c is None or c_prime is None:
            raise ParameterViolation("custom speed needs both c and c_prime")
        if c_star is None or c_sup is None:
            raise ParameterViolation("custom speed needs asserted c_star and c_sup")
        if not (0 < c_star <= c_sup < math.inf):
            raise ParameterViolation(f"custom bounds must satisfy 0 < c_star <= c_sup < inf, got {c_star}, {c_sup}")
        fn, fp = c, c_prime
        lo, hi = float(c_star), float(c_sup)

    if sample_count < 3:
        raise ParameterViolation("sample_count must be at least 3")
    ws = WaveSpeed(family, params, lo, hi, 0.0, fn, fp,
                   (float(sample_window[0]), float(sample_window[1])), int(sample_count))
    return _replace_A(ws, damping_constant(ws))


def _replace_A(ws: WaveSpeed, A: float) -> WaveSpeed:
    return WaveSpeed(ws.family, ws.params, ws.c_star, ws.c_sup, A, ws.fn, ws.fn_prime,
                     ws.sample_window, ws.sample_count)


def tanh_speed(c0=2.0, delta=1.0, **kw) -> WaveSpeed:
    return construct(Family.TANH, c0=c0, delta=delta, **kw)


def logistic_speed(c_minus=1.0, c_plus=3.0, **kw) -> WaveSpeed:
    return construct(Family.LOGISTIC, c_minus=c_minus, c_plus=c_plus, **kw)


def arctan_speed(c0=2.0, delta=1.0, **kw) -> WaveSpeed:
    return construct(Family.ARCTAN, c0=c0, delta=delta, **kw)


def constant_speed(value: float) -> WaveSpeed:
    """Constant speed, expressed as a custom speed with ``c' == 0``."""
    value = float(value)
    return construct(
        Family.CUSTOM,
        c=lambda th: np.full(np.shape(th), value) if np.ndim(th) else value,
        c_prime=lambda th: np.zeros(np.shape(th)) if np.ndim(th) else 0.0,
        c_star=value, c_sup=value, value=value,
    )


def evaluate(ws: WaveSpeed, theta):
    """Return ``(c(theta), c'(theta))``; raises :class:`NonFiniteInput` on NaN/inf."""
    if not np.all(np.isfinite(theta)):
        raise NonFiniteInput(f"wave speed evaluated at non-finite theta={theta!r}")
    if np.ndim(theta) == 0:
        return float(ws.c(float(theta))), float(ws.c_prime(float(theta)))
    th = np.asarray(theta, dtype=float)
    return ws.c(th), ws.c_prime(th)


def _ratio(ws, th):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.asarray(ws.c_prime(th), dtype=float) / (2.0 * np.asarray(ws.c(th), dtype=float))


def _golden_max(f, a, b, xtol):
    """Golden-section search for a maximum of ``f`` on ``[a, b]``.

    Returns the largest value seen at any probe.
    """
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    best = max(f1, f2)
    while b - a > xtol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        best = max(best, f1, f2)
    return best


def damping_constant(ws: WaveSpeed, window=None, n_samples=None, refine=True) -> float:
    """Estimate ``A = sup c'/(2c)``.

    Samples the ratio on ``n_samples`` equispaced points of ``window`` (nested
    when ``n_samples - 1`` doubles), then, if ``refine``, polishes the best
    sample by golden-section search. The result is the largest ratio actually
    evaluated, so it never exceeds the true supremum. Without refinement it
    never decreases when the sample grid is refined; the golden-section probes
    depend on the bracket, so refined values agree only to a few ulps.
    Clamped below at 0.
    """
    lo, hi = window if window is not None else ws.sample_window
    n = int(n_samples if n_samples is not None else ws.sample_count)
    th = np.linspace(lo, hi, n)
    r = _ratio(ws, th)
    if np.all(r == 0.0):
        return 0.0
    if np.any(np.isnan(r)):
        return math.nan
    k = int(np.argmax(r))
    best = float(r[k])
    if not math.isfinite(best) or not refine:
        return max(0.0, best)
    a, b = th[max(k - 1, 0)], th[min(k + 1, n - 1)]
    xtol = 1e-12 * max(1.0, abs(th[k]))
    refined = _golden_max(lambda x: float(_ratio(ws, x)), a, b, xtol)
    return max(0.0, best, refined)


@dataclass
class Violation:
    kind: str  # "nonfinite", "positivity", "lower_bound", "upper_bound", "monotonicity"
    theta: float
    value: float
    count: int


@dataclass
class ValidationReport:
    passed: bool
    theta_range: tuple[float, float]
    n_samples: int
    violations: list[Violation]

    def summary(self) -> str:
        if self.passed:
            return f"ok: {self.n_samples} samples on [{self.theta_range[0]:g}, {self.theta_range[1]:g}]"
        lines = [f"FAILED: {self.n_samples} samples on [{self.theta_range[0]:g}, {self.theta_range[1]:g}]"]
        for v in self.violations:
            lines.append(f"  {v.kind}: {v.count} sample(s), first at theta={v.theta:.6g} (value {v.value:.6g})")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "theta_range": list(self.theta_range),
            "n_samples": self.n_samples,
            "violations": [vars(v) for v in self.violations],
        }


def validate(ws: WaveSpeed, theta_range=None, n_samples: int = 10_000, rtol: float = 1e-12) -> ValidationReport:
    """Sample ``c`` and ``c'`` and report violated assumptions.

    Never raises for a bad speed; the report carries the first location of
    each kind of violation.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    lo, hi = theta_range if theta_range is not None else ws.sample_window
    th = np.linspace(lo, hi, int(n_samples))
    with np.errstate(all="ignore"):
        c = np.broadcast_to(np.asarray(ws.c(th), dtype=float), th.shape)
        cp = np.broadcast_to(np.asarray(ws.c_prime(th), dtype=float), th.shape)
    slack = rtol * max(abs(ws.c_sup), 1.0)

    checks = [
        ("nonfinite", ~(np.isfinite(c) & np.isfinite(cp)), np.where(np.isfinite(c), cp, c)),
        ("positivity", c <= 0, c),
        ("lower_bound", c < ws.c_star - slack, c),
        ("upper_bound", c > ws.c_sup + slack, c),
        ("monotonicity", cp < 0, cp),
    ]
    violations = []
    for kind, bad, vals in checks:
        if np.any(bad):
            i = int(np.argmax(bad))
            violations.append(Violation(kind, float(th[i]), float(vals[i]), int(bad.sum())))
    return ValidationReport(not violations, (float(lo), float(hi)), int(n_samples), violations)
