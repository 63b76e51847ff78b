"""Sup-norms, energy and blow-up monitoring for computed solutions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np


class SupNorms(NamedTuple):
    sup_ut: float
    sup_ux: float
    # bounds from |u_t| <= (|R|+|S|)/2 and |u_x| <= (|R|+|S|)/(2 c_star)
    bound_ut: float
    bound_ux: float


def sup_norms(state, ws) -> SupNorms:
    R, S = state.R, state.S
    ut = np.abs(R + S) / 2
    ux = np.abs(R - S) / (2 * ws.c(state.u))
    s = float(np.max(np.abs(R) + np.abs(S)))
    return SupNorms(float(ut.max()), float(ux.max()), s / 2, s / (2 * ws.c_star))


def energy(state, grid, ws) -> float:
    """Periodic trapezoid rule for ``int u_t^2 + c(u)^2 u_x^2 dx``.

    Only conserved by the PDE for lambda = 1.
    """
    ut = (state.R + state.S) / 2
    cux = (state.R - state.S) / 2  # c(u) u_x
    return grid.dx * float(np.sum(ut * ut + cux * cux))


def energy_from_physical(ut, ux, c, dx) -> float:
    return dx * float(np.sum(ut**2 + (c * ux) ** 2))


def energy_from_riemann(R, S, dx) -> float:
    return dx * float(np.sum((R**2 + S**2) / 2))


def energy_series(traj) -> np.ndarray:
    """Rows ``(t, E(t))`` for every stored frame."""
    return np.array([(f.t, energy(f, traj.grid, traj.ws)) for f in traj.frames]).reshape(-1, 2)


def relative_energy_drift(traj) -> float:
    e = energy_series(traj)[:, 1]
    return abs(e[-1] - e[0]) / e[0] if e[0] > 0 else float(abs(e[-1]))


def peak_history(traj) -> np.ndarray:
    """Rows ``(t, sup|u_t|, sup|u_x|)`` for every stored frame."""
    rows = []
    for f in traj.frames:
        s = sup_norms(f, traj.ws)
        rows.append((f.t, s.sup_ut, s.sup_ux))
    return np.array(rows, dtype=float).reshape(-1, 3)


@dataclass
class RiccatiFit:
    """Least-squares line through ``1/sup|u_x|`` against t.

    Heuristic only: under Riccati growth the reciprocal vanishes linearly,
    and its zero ``t_star`` is a candidate blow-up time, not a proven one.
    """

    slope: float
    intercept: float
    t_star: Optional[float]
    residual: float
    n_points: int
    heuristic: bool = True

    def to_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "t_star": self.t_star,
                "residual": self.residual, "n_points": self.n_points, "heuristic": True}


@dataclass
class BlowUpReport:
    detected: bool
    threshold: float
    t_detect: Optional[float] = None
    quantity: Optional[str] = None  # "ut" or "ux": the larger norm at detection
    peak_history: np.ndarray = field(default_factory=lambda: np.empty((0, 3)), repr=False)
    riccati_fit: Optional[RiccatiFit] = None

    def to_dict(self):
        return {
            "detected": self.detected,
            "t_detect": self.t_detect,
            "threshold": self.threshold,
            "quantity": self.quantity,
            "riccati_fit": self.riccati_fit.to_dict() if self.riccati_fit else None,
        }


def riccati_fit(times, sup_ux, n_points=8) -> Optional[RiccatiFit]:
    """Fit ``1/sup|u_x| ~ a + b t`` on the last ``n_points`` samples."""
    t = np.asarray(times, dtype=float)[-n_points:]
    y = 1.0 / np.asarray(sup_ux, dtype=float)[-n_points:]
    if len(t) < 3 or not np.all(np.isfinite(y)):
        return None
    (b, a), res, *_ = np.polyfit(t, y, 1, full=True)
    resid = float(np.sqrt(res[0] / len(t))) if len(res) else 0.0
    t_star = float(-a / b) if b < 0 else None
    return RiccatiFit(float(b), float(a), t_star, resid, len(t))


def detect_blowup(traj, threshold: float, fit_points: int = 8) -> BlowUpReport:
    """Flag the first frame where ``sup|u_t| + sup|u_x|`` exceeds ``threshold``."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    hist = peak_history(traj)
    total = hist[:, 1] + hist[:, 2]
    over = np.nonzero(total > threshold)[0]
    if len(over) == 0:
        return BlowUpReport(False, threshold, peak_history=hist)
    k = int(over[0])
    quantity = "ut" if hist[k, 1] >= hist[k, 2] else "ux"
    fit = riccati_fit(hist[: k + 1, 0], hist[: k + 1, 2], fit_points)
    return BlowUpReport(True, threshold, float(hist[k, 0]), quantity, hist, fit)
