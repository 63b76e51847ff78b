"""A priori bounds on the Riemann variables and their certification.

For lambda = 0 every smooth solution satisfies

    y(t) <= R(t, x), S(t, x) <= P,   y(t) = P + (m0 - P) exp(A P t),

with ``P = sqrt(c_sup/c_star) * max(sup (R0)_+, sup (S0)_+)``,
``m0 = min(0, inf R0, inf S0)`` and ``A = sup c'/(2c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainViolation


@dataclass(frozen=True)
class BoundConstants:
    P_R: float
    P_S: float
    P: float
    m0: float
    A: float

    def to_dict(self):
        return {"P_R": self.P_R, "P_S": self.P_S, "P": self.P, "m0": self.m0, "A": self.A}


def bound_constants(R0, S0, ws) -> BoundConstants:
    R0 = np.asarray(R0, dtype=float)
    S0 = np.asarray(S0, dtype=float)
    if R0.size == 0 or S0.size == 0:
        raise ValueError("initial Riemann data must be nonempty")
    ratio = math.sqrt(ws.c_sup / ws.c_star)
    P_R = ratio * max(0.0, float(R0.max()))
    P_S = ratio * max(0.0, float(S0.max()))
    m0 = min(0.0, float(R0.min()), float(S0.min()))
    return BoundConstants(P_R, P_S, max(P_R, P_S), m0, float(ws.damping_A))


def _phi(z):
    """``expm1(z)/z`` with the removable singularity filled in."""
    z = np.asarray(z, dtype=float)
    safe = np.where(z == 0, 1.0, z)
    return np.where(z == 0, 1.0, np.expm1(safe) / safe)


def envelope_y(constants: BoundConstants, t):
    """Solution of ``y' = A (P y - P^2)``, ``y(0) = m0``.

    Evaluated as ``m0 + (m0 - P) expm1(A P t)``, which equals
    ``P + (m0 - P) exp(A P t)`` but returns ``m0`` exactly at ``t = 0`` and
    never rounds above ``m0``. When ``A P = 0`` this is the constant ``m0``.
    """
    P, m0, A = constants.P, constants.m0, constants.A
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    out = m0 + (m0 - P) * np.expm1(A * P * t)
    return float(out) if out.ndim == 0 else out


def envelope_y_eta(constants: BoundConstants, eta: float, t):
    """Solution of ``y' = A (P y - P^2) - eta``, ``y(0) = m0 - eta``.

    Equal to ``y_e + (m0 - eta - y_e) exp(A P t)`` with ``y_e = P + eta/(A P)``,
    rearranged so that no division by ``A P`` occurs; the ``A P = 0`` branch
    ``m0 - eta - eta t`` is the same formula with ``expm1(z)/z = 1``.
    """
    if not eta > 0:
        raise ValueError("eta must be positive")
    P, m0, A = constants.P, constants.m0, constants.A
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    k = A * P
    out = (m0 - eta) + (m0 - eta - P) * np.expm1(k * t) - eta * t * _phi(k * t)
    return float(out) if out.ndim == 0 else out


def comparison_gap(P: float, y: float, s: float) -> float:
    """``s (y - s) - (P y - P^2)`` in the factored form ``(P - s)(P + s - y)``.

    Nonnegative whenever ``y <= s <= P`` and ``P >= 0``.
    """
    if not (P >= 0 and y <= s <= P):
        raise DomainViolation(f"need y <= s <= P and P >= 0, got P={P}, y={y}, s={s}")
    return (P - s) * (P + s - y)


def default_tolerance(dx: float) -> float:
    return max(1e-8, 10.0 * dx)


@dataclass
class FrameMargin:
    t: float
    minR_minus_y: float
    minS_minus_y: float
    maxR_minus_P: float
    maxS_minus_P: float

    def to_dict(self):
        return dict(vars(self))


@dataclass
class BoundCertificate:
    constants: BoundConstants
    tol: float
    passed: bool
    applicable: bool
    frames: list[FrameMargin] = field(default_factory=list)
    first_failure: Optional[dict] = None

    @property
    def verdict(self) -> str:
        if not self.applicable:
            return "pass (n/a)" if self.passed else "fail (n/a)"
        return "pass" if self.passed else "fail"

    @property
    def max_upper_violation(self) -> float:
        return max(max(f.maxR_minus_P, f.maxS_minus_P) for f in self.frames)

    @property
    def max_lower_violation(self) -> float:
        return max(-min(f.minR_minus_y, f.minS_minus_y) for f in self.frames)

    def to_dict(self):
        return {
            **self.constants.to_dict(),
            "tol": self.tol,
            "verdict": self.verdict,
            "applicable": self.applicable,
            "first_failure": self.first_failure,
            "frames": [f.to_dict() for f in self.frames],
        }


def certify(traj, constants: BoundConstants, tol: Optional[float] = None) -> BoundCertificate:
    """Check ``y(t) - tol <= R, S <= P + tol`` on every stored frame.

    Certification semantics hold for lambda = 0 only; for other lambda the
    certificate is still computed but marked not applicable.
    """
    if tol is None:
        tol = default_tolerance(traj.grid.dx)
    x = traj.grid.x
    margins = []
    failure = None
    for f in traj.frames:
        y = envelope_y(constants, f.t)
        m = FrameMargin(f.t, float(f.R.min() - y), float(f.S.min() - y),
                        float(f.R.max() - constants.P), float(f.S.max() - constants.P))
        margins.append(m)
        if failure is None:
            for name, arr, bad in (
                ("upper_R", f.R, f.R > constants.P + tol),
                ("upper_S", f.S, f.S > constants.P + tol),
                ("lower_R", f.R, f.R < y - tol),
                ("lower_S", f.S, f.S < y - tol),
            ):
                if np.any(bad):
                    i = int(np.argmax(bad))
                    failure = {"t": f.t, "x": float(x[i]), "bound": name, "value": float(arr[i])}
                    break
    return BoundCertificate(constants, float(tol), failure is None, traj.lam == 0, margins, failure)
