"""Step-size searches: exact line optimization and Armijo-type rules."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import InputError, PreconditionError, SearchFailure, UnboundedDirectionError


@dataclass(frozen=True)
class LOConfig:
    init_step: float = 1.0
    growth: float = 2.0
    deriv_tol: float = 1e-10     # relative to |<grad f(w), d>|
    interval_tol: float = 1e-12  # scaled by (1 + eta)
    max_evals: int = 200
    closed_form: bool = True     # use the exact step on constant-Hessian objectives

    def __post_init__(self):
        if not self.growth > 1:
            raise InputError("growth factor must exceed 1")
        if not (self.deriv_tol > 0 and self.interval_tol > 0 and self.init_step > 0):
            raise InputError("tolerances and initial step must be positive")
        if self.max_evals < 1:
            raise InputError("max_evals must be at least 1")


ARMIJO_MODES = ("backtrack", "forward-backtrack", "reset")


@dataclass(frozen=True)
class ArmijoConfig:
    alpha: float = 0.5
    beta: float = 0.5
    mode: str = "backtrack"
    eta_init: float = 1.0
    warm_start: bool = True
    max_trials: int = 100

    def __post_init__(self):
        if not 0 < self.alpha <= 0.5:
            raise InputError("alpha must lie in (0, 1/2]")
        if not 0 < self.beta < 1:
            raise InputError("beta must lie in (0, 1)")
        if self.mode not in ARMIJO_MODES:
            raise InputError(f"mode must be one of {ARMIJO_MODES}")
        if not self.eta_init > 0:
            raise InputError("eta_init must be positive")
        if self.max_trials < 1:
            raise InputError("max_trials must be at least 1")


@dataclass
class SearchOutcome:
    eta: float
    evaluations: int
    trials: List[float] = field(default_factory=list)


def line_optimize(obj, w, d, cfg: LOConfig = LOConfig(), g=None, f_w=None,
                  coordinate: Optional[int] = None) -> SearchOutcome:
    """Minimize f(w + eta d) over eta >= 0.

    Brackets the minimizer by growing eta until the directional derivative
    turns positive or f rises above f(w), then bisects on the sign of
    the directional derivative.  Objectives exposing ``curvature_along``
    (constant Hessian) take the exact step directly.  When ``coordinate``
    is given, ``d`` must be supported on that coordinate only and partial
    derivatives replace full gradients.
    """
    w = np.asarray(w, dtype=float)
    d = np.asarray(d, dtype=float)

    def slope(x):
        if coordinate is None:
            return float(obj.grad(x) @ d)
        return obj.partial(x, coordinate) * d[coordinate]

    if g is None:
        dphi0 = slope(w)
    else:
        dphi0 = float(np.asarray(g) @ d)
    if not dphi0 < 0:
        raise PreconditionError("d is not a descent direction")

    curvature = getattr(obj, "curvature_along", None)
    if cfg.closed_form and curvature is not None:
        c = curvature(w, d)
        if c is not None:
            if c <= 0:
                raise UnboundedDirectionError("non-positive curvature along d")
            return SearchOutcome(-dphi0 / c, 0, [])

    phi0 = obj.value(w) if f_w is None else f_w
    tol = cfg.deriv_tol * abs(dphi0)
    trials: List[float] = []
    lo, eta = 0.0, cfg.init_step
    while True:
        if len(trials) >= cfg.max_evals:
            raise UnboundedDirectionError(f"no bracket after {cfg.max_evals} evaluations (last step {lo:g})")
        x = w + eta * d
        f_eta, s = obj.value(x), slope(x)
        trials.append(eta)
        # a vanishing slope alone does not close the bracket: flat tails of
        # objectives with unattained infima would otherwise pass as minimizers
        if s > 0 or f_eta > phi0:
            hi = eta
            break
        lo = eta
        eta *= cfg.growth

    while len(trials) < cfg.max_evals:
        mid = 0.5 * (lo + hi)
        if hi - lo <= cfg.interval_tol * (1.0 + mid):
            break
        x = w + mid * d
        f_mid, s = obj.value(x), slope(x)
        trials.append(mid)
        if abs(s) <= tol and f_mid <= phi0:
            return SearchOutcome(mid, len(trials), trials)
        if s >= 0 or f_mid > phi0:
            hi = mid
        else:
            lo = mid
    # lo always has negative slope and f <= f(w); fall back to it
    eta = lo if lo > 0 else 0.5 * (lo + hi)
    return SearchOutcome(eta, len(trials), trials)


def _armijo(passes, eta_start: float, cfg: ArmijoConfig, forward: bool) -> SearchOutcome:
    trials: List[float] = []
    eta = eta_start

    def test(x):
        trials.append(x)
        return passes(x)

    if forward and test(eta):
        while len(trials) < cfg.max_trials:
            bigger = eta / cfg.beta
            if not test(bigger):
                break
            eta = bigger
        return SearchOutcome(eta, len(trials), trials)
    if not forward and test(eta):
        return SearchOutcome(eta, len(trials), trials)
    while len(trials) < cfg.max_trials:
        eta *= cfg.beta
        if test(eta):
            return SearchOutcome(eta, len(trials), trials)
    raise SearchFailure(f"Armijo condition not met after {cfg.max_trials} trials")


def armijo_search(obj, w, g=None, cfg: ArmijoConfig = ArmijoConfig(), eta_start: Optional[float] = None,
                  f_w=None) -> SearchOutcome:
    """Largest tested eta with f(w - eta g) <= f(w) - alpha eta ||g||^2.

    ``backtrack`` and ``reset`` shrink by beta from ``eta_start``;
    ``forward-backtrack`` first grows by 1/beta while the condition holds
    and returns the last passing step.  ``reset`` always starts from
    ``cfg.eta_init``.
    """
    w = np.asarray(w, dtype=float)
    g = obj.grad(w) if g is None else np.asarray(g, dtype=float)
    gsq = float(g @ g)
    if gsq == 0.0:
        raise PreconditionError("gradient is zero")
    if cfg.mode == "reset" or eta_start is None:
        eta_start = cfg.eta_init
    if not eta_start > 0:
        raise InputError("eta_start must be positive")
    fw = obj.value(w) if f_w is None else f_w

    def passes(eta):
        return obj.value(w - eta * g) <= fw - cfg.alpha * eta * gsq

    return _armijo(passes, eta_start, cfg, forward=cfg.mode == "forward-backtrack")


def stochastic_armijo(obj, i: int, w, eta_max: float, cfg: Optional[ArmijoConfig] = None) -> SearchOutcome:
    """Halve from eta_max until f_i(w - eta g_i) <= f_i(w) - (eta/2) ||g_i||^2."""
    cfg = ArmijoConfig(alpha=0.5, beta=0.5, mode="reset", eta_init=eta_max) if cfg is None else cfg
    if not eta_max > 0:
        raise InputError("eta_max must be positive")
    w = np.asarray(w, dtype=float)
    gi = obj.component_grad(i, w)
    gsq = float(gi @ gi)
    if gsq == 0.0:
        raise PreconditionError(f"component {i} gradient is zero")
    fi = obj.component_value(i, w)

    def passes(eta):
        return obj.component_value(i, w - eta * gi) <= fi - cfg.alpha * eta * gsq

    return _armijo(passes, eta_max, cfg, forward=False)


@dataclass
class NagSearchOutcome:
    eta: float
    y: np.ndarray
    grad_y: np.ndarray
    w_next: np.ndarray
    evaluations: int
    trials: List[float] = field(default_factory=list)


def nag_extrapolate(w, z, q: float) -> np.ndarray:
    s = math.sqrt(q)
    return w + (s / (1.0 + s)) * (z - w)


def nag_two_step_search(obj, w_t, z_t, mu: float, eta_max: float, max_trials: int = 100) -> NagSearchOutcome:
    """Backtracking through the extrapolation point y(eta).

    For each trial eta (halving from eta_max) recompute
    y = w + sqrt(q)/(1+sqrt(q)) (z - w) with q = eta mu and accept when
    f(y - eta grad f(y)) <= f(y) - (eta/2) ||grad f(y)||^2.  Trials with
    eta > 1/mu are never accepted: the condition cannot hold there when mu
    is a valid strong-convexity constant, and q must stay in (0, 1].
    """
    if not mu > 0:
        raise InputError("mu must be positive")
    if not eta_max > 0:
        raise InputError("eta_max must be positive")
    w_t = np.asarray(w_t, dtype=float)
    z_t = np.asarray(z_t, dtype=float)
    same = np.array_equal(w_t, z_t)
    eta = eta_max
    trials: List[float] = []
    y = fy = gy = None
    for _ in range(max_trials):
        trials.append(eta)
        if eta * mu <= 1.0:
            if y is None or not same:
                y = nag_extrapolate(w_t, z_t, eta * mu)
                fy, gy = obj.value(y), obj.grad(y)
            w_next = y - eta * gy
            if obj.value(w_next) <= fy - 0.5 * eta * float(gy @ gy):
                return NagSearchOutcome(eta, y, gy, w_next, len(trials), trials)
        eta *= 0.5
    raise SearchFailure(f"two-step Armijo condition not met after {max_trials} trials")
