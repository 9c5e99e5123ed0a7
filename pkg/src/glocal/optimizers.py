"""Iteration drivers that produce Traces.

Every driver wraps the objective in a per-run counter so that each value,
gradient, partial or component call the algorithm itself makes (including
line-search trials) is billed to the trace.  The per-row metrics (f, gap,
gradient norm, distance) are computed on the raw objective and are free.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np

from .errors import (
    InputError,
    PreconditionError,
    SearchFailure,
    StationaryPoint,
    UnboundedDirectionError,
)
from .linesearch import (
    ArmijoConfig,
    LOConfig,
    armijo_search,
    line_optimize,
    nag_extrapolate,
    nag_two_step_search,
    stochastic_armijo,
)
from .problems import Objective, as_point
from .stepsizes import AdgdState, adgd_step, fixed_step, polyak_step

STOP_REASONS = ("gap-target", "dist-target", "grad-target", "max-iters", "search-failure", "unbounded-direction")


# ---------------------------------------------------------------- records

@dataclass(frozen=True)
class TraceRecord:
    iter: int
    f: float
    gap: Optional[float]
    grad_norm: float
    step_size: Optional[float]
    dist_sq: Optional[float]
    feval: int
    geval: int


@dataclass
class Trace:
    """Per-iteration records of one run.

    Row ``t`` describes the iterate w_t and the step size that produced it
    (``None`` on row 0 and on skipped iterations).  ``extras`` holds
    driver-specific per-row series such as NAG's q_t and z_t.
    """

    records: List[TraceRecord] = field(default_factory=list)
    w_final: Optional[np.ndarray] = None
    stop_reason: Optional[str] = None
    message: str = ""
    iterates: List[np.ndarray] = field(default_factory=list)
    extras: Dict[str, list] = field(default_factory=dict)

    def __len__(self):
        return len(self.records)

    @property
    def iterations(self) -> int:
        return self.records[-1].iter if self.records else 0

    def column(self, name: str) -> np.ndarray:
        return np.array([np.nan if getattr(r, name) is None else getattr(r, name) for r in self.records], dtype=float)

    def first_iter_below(self, gap: float) -> Optional[int]:
        """Index of the first row whose gap is at most ``gap``."""
        for r in self.records:
            if r.gap is not None and r.gap <= gap:
                return r.iter
        return None


@dataclass(frozen=True)
class StopRule:
    gap_tol: Optional[float] = None
    dist_sq_tol: Optional[float] = None
    grad_tol: Optional[float] = None
    max_iters: int = 1000

    def __post_init__(self):
        for name in ("gap_tol", "dist_sq_tol", "grad_tol"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise InputError(f"{name} must be positive")
        if int(self.max_iters) != self.max_iters or self.max_iters < 0:
            raise InputError("max_iters must be a non-negative integer")


# ---------------------------------------------------------------- step rules

@dataclass(frozen=True)
class Fixed:
    L: Optional[float] = None   # defaults to the objective's L


@dataclass(frozen=True)
class LineOpt:
    cfg: LOConfig = LOConfig()


@dataclass(frozen=True)
class Armijo:
    cfg: ArmijoConfig = ArmijoConfig()


@dataclass(frozen=True)
class Polyak:
    f_star: Optional[float] = None  # defaults to the objective's f*


@dataclass(frozen=True)
class AdGD:
    eta0: float = 1e-10


StepRule = Union[Fixed, LineOpt, Armijo, Polyak, AdGD]


# ---------------------------------------------------------------- bookkeeping

class CountingObjective:
    """Forwards to an objective and tallies the calls made through it."""

    def __init__(self, inner: Objective):
        self.inner = inner
        self.feval = 0
        self.geval = 0
        if hasattr(inner, "curvature_along"):
            self.curvature_along = self._curvature_along

    def __getattr__(self, name):
        return getattr(self.inner, name)

    def value(self, w):
        self.feval += 1
        return self.inner.value(w)

    def grad(self, w):
        self.geval += 1
        return self.inner.grad(w)

    def partial(self, w, j):
        self.geval += 1
        return self.inner.partial(w, j)

    def component_value(self, i, w):
        self.feval += 1
        return self.inner.component_value(i, w)

    def component_grad(self, i, w):
        self.geval += 1
        return self.inner.component_grad(i, w)

    def _curvature_along(self, w, d):
        # a Hessian-vector product costs about one gradient
        self.geval += 1
        return self.inner.curvature_along(w, d)


class _Run:
    def __init__(self, obj: Objective, stop: StopRule, keep_iterates: bool):
        if stop.gap_tol is not None and obj.f_star is None:
            raise InputError("a gap target needs a known f*; use grad_tol or max_iters instead")
        if stop.dist_sq_tol is not None and obj.w_star is None:
            raise InputError("a distance target needs a known w*")
        self.obj = obj
        self.counted = CountingObjective(obj)
        self.stop = stop
        self.keep = keep_iterates
        self.trace = Trace()

    def record(self, t: int, w: np.ndarray, eta: Optional[float], **extras) -> Optional[str]:
        obj, stop = self.obj, self.stop
        f = obj.value(w)
        gnorm = float(np.linalg.norm(obj.grad(w)))
        gap = None if obj.f_star is None else f - obj.f_star
        dist = None if obj.w_star is None else float(np.sum((w - obj.w_star) ** 2))
        self.trace.records.append(TraceRecord(t, f, gap, gnorm, eta, dist, self.counted.feval, self.counted.geval))
        if self.keep:
            self.trace.iterates.append(w.copy())
        for k, v in extras.items():
            self.trace.extras.setdefault(k, []).append(v)
        if stop.gap_tol is not None and gap <= stop.gap_tol:
            return "gap-target"
        if stop.dist_sq_tol is not None and dist <= stop.dist_sq_tol:
            return "dist-target"
        if gnorm == 0.0 or (stop.grad_tol is not None and gnorm <= stop.grad_tol):
            return "grad-target"
        if t >= stop.max_iters:
            return "max-iters"
        return None

    def finish(self, w, reason: str, message: str = "") -> Trace:
        self.trace.w_final = w.copy()
        self.trace.stop_reason = reason
        self.trace.message = message
        return self.trace


def _failure(exc: Exception) -> str:
    if isinstance(exc, UnboundedDirectionError):
        return "unbounded-direction"
    if isinstance(exc, StationaryPoint):
        return "grad-target"
    return "search-failure"


_STEP_ERRORS = (SearchFailure, UnboundedDirectionError, StationaryPoint)


# ---------------------------------------------------------------- drivers

def run_gd(obj: Objective, rule: StepRule, w0, stop: StopRule, keep_iterates: bool = True) -> Trace:
    """Gradient descent w <- w - eta grad f(w) with ``rule`` choosing eta.

    Armijo warm starts from the last accepted step unless the rule's mode
    is ``reset`` or warm starting is switched off.  AdGD takes a tiny first
    step ``rule.eta0``.
    """
    w = as_point(w0, obj.dim)
    run = _Run(obj, stop, keep_iterates)
    cobj = run.counted

    if isinstance(rule, Fixed):
        L = obj.L if rule.L is None else rule.L
        if L is None:
            raise InputError("fixed step needs L")
        eta_fixed = fixed_step(L)
    elif isinstance(rule, Polyak):
        f_star = obj.f_star if rule.f_star is None else rule.f_star
        if f_star is None:
            raise InputError("the Polyak step needs a known f*")
    elif not isinstance(rule, (LineOpt, Armijo, AdGD)):
        raise InputError(f"unknown step rule {rule!r}")

    reason = run.record(0, w, None)
    eta_last = rule.cfg.eta_init if isinstance(rule, Armijo) else None
    adgd: Optional[AdgdState] = None
    t = 0
    while reason is None:
        g = cobj.grad(w)
        try:
            if isinstance(rule, Fixed):
                eta = eta_fixed
            elif isinstance(rule, LineOpt):
                eta = line_optimize(cobj, w, -g, rule.cfg, g=g).eta
            elif isinstance(rule, Armijo):
                start = eta_last if rule.cfg.warm_start else rule.cfg.eta_init
                eta = armijo_search(cobj, w, g, rule.cfg, eta_start=start).eta
                eta_last = eta
            elif isinstance(rule, Polyak):
                eta = polyak_step(cobj.value(w), f_star, float(g @ g))
            else:
                if adgd is None:
                    eta = rule.eta0
                    adgd = AdgdState.start(w, g, eta)
                else:
                    eta, adgd = adgd_step(adgd, w, g)
        except _STEP_ERRORS as exc:
            return run.finish(w, _failure(exc), str(exc))
        w = w - eta * g
        t += 1
        reason = run.record(t, w, eta)
    return run.finish(w, reason)


def run_cd(obj: Objective, selection: str, w0, stop: StopRule, lo_cfg: LOConfig = LOConfig(),
           seed: Optional[int] = None, keep_iterates: bool = True) -> Trace:
    """Coordinate descent with exact line optimization along the chosen coordinate.

    ``selection`` is ``"greedy"`` (largest |partial|, lowest index on ties)
    or ``"uniform"`` (drawn from ``numpy.random.default_rng(seed)``).
    Chosen coordinates with a zero partial are skipped and recorded with no
    step size.
    """
    if selection not in ("greedy", "uniform"):
        raise InputError("selection must be 'greedy' or 'uniform'")
    w = as_point(w0, obj.dim)
    run = _Run(obj, stop, keep_iterates)
    cobj = run.counted
    rng = np.random.default_rng(seed) if selection == "uniform" else None
    reason = run.record(0, w, None, coord=None)
    t = 0
    while reason is None:
        if rng is None:
            j = int(np.argmax(np.abs(cobj.grad(w))))
        else:
            j = int(rng.integers(obj.dim))
        p = cobj.partial(w, j)
        eta = None
        if p != 0.0:
            d = np.zeros(obj.dim)
            d[j] = -p
            try:
                eta = line_optimize(cobj, w, d, lo_cfg, coordinate=j).eta
            except _STEP_ERRORS as exc:
                return run.finish(w, _failure(exc), str(exc))
            w = w + eta * d
        t += 1
        reason = run.record(t, w, eta, coord=j)
    return run.finish(w, reason)


def run_sgd(obj: Objective, eta_max: float, seed: int, w0, stop: StopRule,
            cfg: Optional[ArmijoConfig] = None, keep_iterates: bool = True) -> Trace:
    """SGD with the stochastic Armijo step restarted at ``eta_max`` each iteration.

    Sampled components whose gradient is already zero are skipped.
    """
    if not obj.finite_sum:
        raise InputError("SGD needs a finite-sum objective")
    w = as_point(w0, obj.dim)
    run = _Run(obj, stop, keep_iterates)
    cobj = run.counted
    rng = np.random.default_rng(seed)
    reason = run.record(0, w, None, component=None)
    t = 0
    while reason is None:
        i = int(rng.integers(obj.n_components))
        eta = None
        try:
            out = stochastic_armijo(cobj, i, w, eta_max, cfg)
            eta = out.eta
            w = w - eta * obj.component_grad(i, w)  # gradient already billed by the search
        except PreconditionError:
            pass
        except _STEP_ERRORS as exc:
            return run.finish(w, _failure(exc), str(exc))
        t += 1
        reason = run.record(t, w, eta, component=i)
    return run.finish(w, reason)


def run_nag(obj: Objective, mu: float, eta_max: float, w0, stop: StopRule,
            fixed_eta: Optional[float] = None, max_trials: int = 100, keep_iterates: bool = True) -> Trace:
    """Three-sequence accelerated gradient method with z_0 = w_0.

    Each iteration sets q = eta mu,
    y = w + sqrt(q)/(1+sqrt(q)) (z - w),
    w <- y - eta grad f(y),
    z <- (1 - sqrt(q)) z + sqrt(q) (y - grad f(y)/mu),
    with eta from the two-step Armijo search (or ``fixed_eta`` when given).
    ``trace.extras`` carries ``eta``, ``q`` and ``z`` per row.
    """
    if not mu > 0:
        raise InputError("mu must be positive")
    if fixed_eta is not None and not 0 < fixed_eta * mu <= 1:
        raise InputError("fixed_eta must satisfy 0 < eta mu <= 1")
    w = as_point(w0, obj.dim)
    z = w.copy()
    run = _Run(obj, stop, keep_iterates)
    cobj = run.counted
    reason = run.record(0, w, None, q=None, z=z.copy())
    t = 0
    while reason is None:
        if fixed_eta is None:
            try:
                out = nag_two_step_search(cobj, w, z, mu, eta_max, max_trials)
            except _STEP_ERRORS as exc:
                return run.finish(w, _failure(exc), str(exc))
            eta, y, gy, w_next = out.eta, out.y, out.grad_y, out.w_next
        else:
            eta = fixed_eta
            y = nag_extrapolate(w, z, eta * mu)
            gy = cobj.grad(y)
            w_next = y - eta * gy
        q = eta * mu
        s = math.sqrt(q)
        z = (1.0 - s) * z + s * (y - gy / mu)
        w = w_next
        t += 1
        reason = run.record(t, w, eta, q=q, z=z.copy())
    return run.finish(w, reason)


def nag_momentum_form(obj: Objective, mu: float, w0, etas, keep_iterates: bool = True) -> Trace:
    """Two-sequence momentum form driven by a given step-size sequence.

    y_t = w_t + ((1 - sqrt(q_{t-1})) / (1 + sqrt(q_t))) sqrt(eta_t / eta_{t-1}) (w_t - w_{t-1}),
    w_{t+1} = y_t - eta_t grad f(y_t), with w_{-1} = w_0.  Feeding it the
    steps of a ``run_nag`` trace reproduces that run's iterates.
    """
    if not mu > 0:
        raise InputError("mu must be positive")
    etas = [float(e) for e in etas]
    w = as_point(w0, obj.dim)
    w_prev = w.copy()
    run = _Run(obj, StopRule(max_iters=len(etas)), keep_iterates)
    cobj = run.counted
    run.record(0, w, None)
    for t, eta in enumerate(etas):
        if not 0 < eta * mu <= 1:
            raise InputError("every step must satisfy 0 < eta mu <= 1")
        if t == 0:
            y = w
        else:
            prev = etas[t - 1]
            coef = (1.0 - math.sqrt(prev * mu)) / (1.0 + math.sqrt(eta * mu)) * math.sqrt(eta / prev)
            y = w + coef * (w - w_prev)
        w_prev, w = w, y - eta * cobj.grad(y)
        run.record(t + 1, w, eta)
    return run.finish(w, "max-iters")


def run_nlcg(obj: Objective, w0, stop: StopRule, reset_period: Optional[int] = None,
             lo_cfg: LOConfig = LOConfig(), keep_iterates: bool = True) -> Trace:
    """Polak-Ribiere-Polyak conjugate gradient with exact line optimization.

    Direction d_t = -g_t + beta_t d_{t-1} where d_{t-1} = (w_t - w_{t-1}) / eta_{t-1}
    and beta_t = <g_t, g_t - g_{t-1}> / |g_{t-1}|^2.  beta_t is zero on
    iterations divisible by ``reset_period`` (default: the dimension) and
    whenever the composite direction fails to be a descent direction.
    ``trace.extras["direction"]`` holds the direction used to reach each row.
    """
    period = obj.dim if reset_period is None else int(reset_period)
    if period < 1:
        raise InputError("reset_period must be at least 1")
    w = as_point(w0, obj.dim)
    run = _Run(obj, stop, keep_iterates)
    cobj = run.counted
    reason = run.record(0, w, None, beta=None, direction=None)
    g_prev = d_prev = None
    t = 0
    while reason is None:
        g = cobj.grad(w)
        beta = 0.0
        if t % period != 0:
            beta = float(g @ (g - g_prev)) / float(g_prev @ g_prev)
        d = -g + beta * d_prev if beta != 0.0 else -g
        if beta != 0.0 and not float(g @ d) < 0:
            beta, d = 0.0, -g
        try:
            eta = line_optimize(cobj, w, d, lo_cfg, g=g).eta
        except _STEP_ERRORS as exc:
            return run.finish(w, _failure(exc), str(exc))
        w = w + eta * d
        g_prev, d_prev = g, d
        t += 1
        reason = run.record(t, w, eta, beta=beta, direction=d.copy())
    return run.finish(w, reason)
