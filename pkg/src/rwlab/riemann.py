"""Riemann variables and the source terms of the first-order system.

With ``R = u_t + c(u) u_x`` and ``S = u_t - c(u) u_x`` the lambda-family

    u_tt = c(u)^2 u_xx + lambda c(u) c'(u) u_x^2

becomes

    R_t - c R_x = c'/(4c) * (lam R^2 + 2(1-lam) R S - (2-lam) S^2)
    S_t + c S_x = c'/(4c) * (lam S^2 + 2(1-lam) R S - (2-lam) R^2)

All functions broadcast over numpy arrays.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import LambdaOutOfRange, NonPositiveSpeed


class RiemannPair(NamedTuple):
    R: np.ndarray | float
    S: np.ndarray | float


class SourcePair(NamedTuple):
    f_R: np.ndarray | float
    f_S: np.ndarray | float


def _check_speed(c):
    if np.any(np.asarray(c) <= 0):
        raise NonPositiveSpeed("wave speed must be strictly positive")


def to_riemann(u_t, u_x, c_of_u) -> RiemannPair:
    _check_speed(c_of_u)
    cux = c_of_u * u_x
    return RiemannPair(u_t + cux, u_t - cux)


def from_riemann(R, S, c_of_u):
    """Inverse of :func:`to_riemann`: ``(u_t, u_x)``."""
    _check_speed(c_of_u)
    return (R + S) / 2, (R - S) / (2 * c_of_u)


def source_terms(R, S, c, c_prime, lam) -> SourcePair:
    """Right-hand sides of the R and S transport equations for any lambda in [0, 2]."""
    if not 0.0 <= lam <= 2.0:
        raise LambdaOutOfRange(f"lambda must lie in [0, 2], got {lam}")
    _check_speed(c)
    k = c_prime / (4 * c)
    # factored brackets: lam R^2 + 2(1-lam) R S - (2-lam) S^2 = (R-S)(lam R + (2-lam) S)
    # and the mirror for f_S. R - S is exactly 0 when R == S, and at lam = 1 both
    # second factors round to the same R + S, so f_R == -f_S bit for bit.
    d = R - S
    mu = 2.0 - lam
    return SourcePair(k * d * (lam * R + mu * S), -k * d * (mu * R + lam * S))


def source_terms_lambda0(R, S, c, c_prime) -> SourcePair:
    """Factored lambda = 0 sources: ``(c'/2c) S (R - S)`` and ``(c'/2c) R (S - R)``."""
    _check_speed(c)
    k = c_prime / (2 * c)
    return SourcePair(k * S * (R - S), k * R * (S - R))
