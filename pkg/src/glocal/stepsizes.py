"""Closed-form step-size rules that need no extra function evaluations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InconsistentOptimum, InputError, StationaryPoint


def fixed_step(L: float) -> float:
    """Return 1/L."""
    if not (L > 0 and math.isfinite(L)):
        raise InputError("L must be positive and finite")
    return 1.0 / L


def polyak_step(f_w: float, f_star: float, grad_sq: float) -> float:
    """Return (f_w - f_star) / grad_sq.

    Raises
    ------
    StationaryPoint
        If ``grad_sq`` is zero.
    InconsistentOptimum
        If ``f_w`` lies below ``f_star`` by more than rounding.
    """
    if not all(map(math.isfinite, (f_w, f_star, grad_sq))):
        raise InputError("non-finite input")
    if grad_sq < 0:
        raise InputError("grad_sq must be non-negative")
    if grad_sq == 0:
        raise StationaryPoint("zero gradient")
    gap = f_w - f_star
    if gap < 0:
        if gap < -1e-12 * (1.0 + abs(f_star)):
            raise InconsistentOptimum(f"f(w) = {f_w!r} is below the supplied f* = {f_star!r}")
        gap = 0.0
    return gap / grad_sq


@dataclass(frozen=True)
class AdgdState:
    """Memory of the previous AdGD update.

    ``theta`` is ``inf`` before the first adaptive update, which switches the
    growth term off so the first adaptive step is the curvature estimate.
    """

    eta: float
    theta: float
    w_prev: np.ndarray
    g_prev: np.ndarray

    @classmethod
    def start(cls, w0, g0, eta0: float = 1e-10) -> "AdgdState":
        return cls(float(eta0), math.inf, np.array(w0, dtype=float), np.array(g0, dtype=float))


def adgd_step(state: AdgdState, w_t, g_t) -> Tuple[float, AdgdState]:
    """Return eta_t = min(sqrt(1 + theta/2) eta_prev, |dw| / (2 |dg|)) and the next state."""
    w_t = np.asarray(w_t, dtype=float)
    g_t = np.asarray(g_t, dtype=float)
    if not (np.all(np.isfinite(w_t)) and np.all(np.isfinite(g_t))):
        raise InputError("non-finite iterate or gradient")
    growth = math.inf if math.isinf(state.theta) else math.sqrt(1.0 + 0.5 * state.theta) * state.eta
    dg = float(np.linalg.norm(g_t - state.g_prev))
    curv = math.inf if dg == 0 else float(np.linalg.norm(w_t - state.w_prev)) / (2.0 * dg)
    eta = min(growth, curv)
    if math.isinf(eta):
        # first update with an unchanged gradient: nothing to estimate from
        eta = state.eta
    return eta, AdgdState(eta, eta / state.eta, w_t.copy(), g_t.copy())


def adgd_potential(w_t, w_prev, w_star, eta_prev: float, theta_prev: float, f_prev_gap: float,
                   mu: float, L: float) -> float:
    """|w_t - w*|^2 + (1/2)(1 + 2 mu/L)|w_t - w_prev|^2 + 2 eta_prev (1 + theta_prev) (f(w_prev) - f*)."""
    w_t, w_prev, w_star = (np.asarray(v, dtype=float) for v in (w_t, w_prev, w_star))
    return float(np.sum((w_t - w_star) ** 2)
                 + 0.5 * (1.0 + 2.0 * mu / L) * np.sum((w_t - w_prev) ** 2)
                 + 2.0 * eta_prev * (1.0 + theta_prev) * f_prev_gap)
