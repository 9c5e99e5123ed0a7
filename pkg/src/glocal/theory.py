"""Glocal constants, Lambert-W based delta selection and iteration-complexity calculators.

Every bound is a sum of per-phase ceilings.  Logarithms are clamped at zero,
so a start point already inside the local region (or a delta below eps)
yields a zero-length phase rather than a negative count; the result is
still a valid upper bound in those regimes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np

from .errors import InputError, UnsupportedError
from .problems import QuadraticProblem, spectral_norm_sq

FLAVORS = ("function-values", "iterates", "coordinate-wise")


@dataclass(frozen=True)
class GlocalProfile:
    """Global constant ``L`` with a local constant valid on the delta-sublevel set.

    ``L_star`` may be a number or a callable delta -> L*(delta).
    """

    L: float
    L_star: Union[float, Callable[[float], float]]
    delta: Optional[float]
    flavor: str = "function-values"

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise InputError(f"flavor must be one of {FLAVORS}")
        if not self.L > 0:
            raise InputError("L must be positive")
        if self.delta is not None:
            ls = self.local(self.delta)
            if not 0 < ls <= self.L * (1 + 1e-12):
                raise InputError("need 0 < L_star <= L")

    def local(self, delta: Optional[float] = None) -> float:
        """L* at ``delta`` (defaults to the profile's own delta)."""
        if callable(self.L_star):
            d = self.delta if delta is None else delta
            if d is None:
                raise InputError("delta required for a delta-dependent profile")
            return float(self.L_star(d))
        return float(self.L_star)


@dataclass(frozen=True)
class ComplexityBound:
    tag: str
    T: int
    phases: Tuple[int, ...]
    inputs: Dict[str, float] = field(default_factory=dict)
    exactness: str = "explicit-constants"

    def to_dict(self) -> dict:
        return {"tag": self.tag, "T": self.T, "phases": list(self.phases),
                "inputs": dict(self.inputs), "exactness": self.exactness}


# ---------------------------------------------------------------- logistic regression

def logistic_local_constant(norm_sq: float, ell_star: float, delta: float) -> float:
    """min((ell* + delta) |X|^2, |X|^2 / 4)."""
    return min((ell_star + delta) * norm_sq, 0.25 * norm_sq)


def logistic_glocal(X, ell_star: float = 0.0, delta: Optional[float] = None) -> GlocalProfile:
    """Glocal constants of the unregularized logistic loss on data ``X``.

    L = |X|^2 / 4 and L*(delta) = (ell* + delta) |X|^2, capped at L, where
    |X|^2 is the largest eigenvalue of X^T X.  With ``delta`` omitted the
    profile carries L* as a function of delta.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if not np.all(np.isfinite(X)):
        raise InputError("X has non-finite entries")
    if not ell_star >= 0:
        raise InputError("ell_star must be non-negative")
    if delta is not None and not delta > 0:
        raise InputError("delta must be positive")
    nsq = spectral_norm_sq(X)
    if nsq == 0:
        raise InputError("X is zero")
    return GlocalProfile(0.25 * nsq, lambda d: logistic_local_constant(nsq, ell_star, d), delta)


def lambert_w0(y: float) -> float:
    """Principal branch of the Lambert W function for y >= 0.

    Halley iterations on w e^w = y from a log-based start; for large y the
    equivalent w + ln w = ln y is solved by Newton to avoid overflow.
    """
    y = float(y)
    if math.isnan(y) or y < 0:
        raise InputError("lambert_w0 is only provided for y >= 0")
    if y == 0:
        return 0.0
    if math.isinf(y):
        return math.inf
    if y > 100.0:
        ly = math.log(y)
        w = ly - math.log(ly)
        for _ in range(100):
            step = (w + math.log(w) - ly) / (1.0 + 1.0 / w)
            w -= step
            if abs(step) <= 1e-16 * w:
                break
        return w
    w = math.log1p(y)
    if y > 3.0:
        w -= math.log(w)
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - y
        fp = ew * (w + 1.0)
        step = f / (fp - (w + 2.0) * f / (2.0 * w + 2.0))
        w -= step
        if abs(step) <= 1e-16 * max(w, 1e-300):
            break
    return w


def _check_delta_args(delta0, eps, ell_star):
    if not (eps > 0 and delta0 > eps):
        raise InputError("need delta0 > eps > 0")
    if not ell_star >= 0:
        raise InputError("ell_star must be non-negative")


def optimal_delta_logistic(delta0: float, eps: float, ell_star: float = 0.0) -> Tuple[float, str]:
    """The delta in [eps, delta0] minimizing the two-phase logistic bound.

    Returns ``(delta, case)`` with ``case`` in ``{"case-1", "case-2", "case-3"}``
    keyed by xi = 1/4 - ell*:

    * ``xi <= eps``: no local improvement is available, delta = eps;
    * ``xi >= delta0 ln(delta0 e / eps)``: delta = delta0;
    * otherwise delta = xi / omega with omega = W(xi e / eps).
    """
    _check_delta_args(delta0, eps, ell_star)
    xi = 0.25 - ell_star
    if xi <= eps:
        return float(eps), "case-1"
    if xi >= delta0 * math.log(delta0 * math.e / eps):
        return float(delta0), "case-2"
    omega = lambert_w0(xi * math.e / eps)
    d1 = xi / omega
    d2 = (eps / math.e) * math.exp(omega)
    if abs(d1 - d2) > 1e-10 * d1:
        raise ArithmeticError(f"Lambert-W forms disagree: {d1!r} vs {d2!r}")
    return d1, "case-3"


def logistic_h(delta: float, delta0: float, eps: float, ell_star: float = 0.0) -> float:
    """(1/4) ln(delta0/delta) + (ell* + delta) ln(delta/eps): the logistic bound times mu/|X|^2."""
    return 0.25 * math.log(delta0 / delta) + (ell_star + delta) * math.log(delta / eps)


def logistic_h_optimal(delta0: float, eps: float, ell_star: float = 0.0) -> float:
    """Closed-form minimum of ``logistic_h`` over [eps, delta0] for each case."""
    delta, case = optimal_delta_logistic(delta0, eps, ell_star)
    if case == "case-3":
        xi = 0.25 - ell_star
        omega = lambert_w0(xi * math.e / eps)
        return 0.25 * math.log(delta0 / eps) - (xi / omega) * (omega - 1.0) ** 2
    return logistic_h(delta, delta0, eps, ell_star)


# ---------------------------------------------------------------- complexity bounds

def _ln(x: float) -> float:
    return max(0.0, math.log(x)) if x > 0 else 0.0


def _ceil(x: float) -> int:
    return int(math.ceil(x)) if x > 0 else 0


_REQUIRED = {
    "glocal-gd-lo": ("L", "L_star", "mu", "delta0", "delta", "eps"),
    "armijo": ("L", "L_star", "mu", "delta0", "delta", "eps", "alpha", "beta"),
    "polyak-values": ("L", "L_star", "mu", "dist0_sq", "delta", "eps"),
    "polyak-iterates": ("L", "L_star", "mu", "dist0_sq", "delta", "eps"),
    "adgd": ("L", "L_star", "mu", "phi3", "delta", "eps"),
    "glocal-sc": ("L", "L_star", "mu", "mu_star", "delta0", "delta", "eps"),
    "convex-local-pl": ("L", "L_star", "mu_star", "R2", "delta", "eps"),
    "convex-convex": ("L", "L_star", "R2", "R2_local", "delta", "eps"),
    "cd-random": ("d", "L", "L_star", "mu", "delta0", "delta", "eps", "zeta"),
    "cd-greedy": ("L", "L_star", "mu1", "delta0", "delta", "eps"),
    "sgd": ("L_max", "L_max_star", "mu", "dist0_sq", "delta", "eps", "zeta"),
    "nag": ("L", "L_star", "mu", "delta0", "dist0_sq", "delta", "eps"),
    "nlcg": ("L", "L_star", "mu", "d", "delta0", "delta", "eps"),
}
ORDER_ONLY = frozenset({"adgd", "convex-local-pl", "convex-convex", "nlcg"})
BOUND_TAGS = tuple(_REQUIRED)
_DEFAULTS = {"zeta": 0.1}
# inputs that may legitimately be zero
_NON_NEGATIVE = {"R2", "R2_local", "phi3", "dist0_sq", "delta0"}


def _phases(tag: str, p: Dict[str, float]) -> Tuple[float, ...]:
    L, Ls, e, dl = p.get("L"), p.get("L_star"), p["eps"], p["delta"]
    if tag == "glocal-gd-lo":
        return (L / p["mu"] * _ln(p["delta0"] / dl), Ls / p["mu"] * _ln(dl / e))
    if tag == "armijo":
        c = 2.0 * p["beta"] * p["alpha"] * p["mu"]
        return (L / c * _ln(p["delta0"] / dl), Ls / c * _ln(dl / e))
    if tag == "polyak-values":
        mu = p["mu"]
        return (4 * L / mu * _ln(L * p["dist0_sq"] / (2 * dl)), 4 * Ls / mu * _ln((Ls / L) * (dl / e)))
    if tag == "polyak-iterates":
        mu = p["mu"]
        return (4 * L / mu * _ln(p["dist0_sq"] / dl), 4 * Ls / mu * _ln(dl / e))
    if tag == "adgd":
        mu = p["mu"]
        return (4 * L / mu * _ln(p["phi3"] / dl), 4 * Ls / mu * _ln(dl / e))
    if tag == "glocal-sc":
        return (L / p["mu"] * _ln(p["delta0"] / dl), Ls / p["mu_star"] * _ln(dl / e))
    if tag == "convex-local-pl":
        return (2 * L * p["R2"] / dl, Ls / p["mu_star"] * _ln(dl / e))
    if tag == "convex-convex":
        return (2 * L * p["R2"] / dl, 2 * Ls * p["R2_local"] / e)
    if tag == "cd-random":
        dmu = p["d"] / p["mu"]
        return (dmu * L * _ln(p["delta0"] / (dl * p["zeta"])), dmu * Ls * _ln(dl / e))
    if tag == "cd-greedy":
        return (L / p["mu1"] * _ln(p["delta0"] / dl), Ls / p["mu1"] * _ln(dl / e))
    if tag == "sgd":
        mu = p["mu"]
        return (2 * p["L_max"] / mu * _ln(p["dist0_sq"] / (dl * p["zeta"])),
                2 * p["L_max_star"] / mu * _ln(dl / e))
    if tag == "nag":
        mu = p["mu"]
        start = (L / mu) * (p["delta0"] + 0.5 * mu * p["dist0_sq"]) / dl
        return (math.sqrt(2 * L / mu) * _ln(start), math.sqrt(2 * Ls / mu) * _ln((mu / L) * (dl / e)))
    if tag == "nlcg":
        k = L / p["mu"]
        first = 0.5 * k * k * _ln(p["delta0"] / dl)
        ks = Ls / p["mu"]
        local_cg = _ceil(0.5 * math.sqrt(ks) * _ln(4 * ks * ks * dl / e))
        second = min(_ceil(0.5 * k * k * _ln(dl / e)), p["d"] + min(p["d"], local_cg))
        return (first, second)
    raise AssertionError(tag)


def complexity_bound(tag: str, inputs: Optional[Dict[str, float]] = None, **kw) -> ComplexityBound:
    """Evaluate the two-phase iteration bound named by ``tag``.

    Inputs are passed by name (``L``, ``L_star``, ``mu``, ``mu_star``,
    ``mu1``, ``delta0``, ``dist0_sq``, ``phi3``, ``R2``, ``R2_local``,
    ``delta``, ``eps``, ``alpha``, ``beta``, ``d``, ``zeta``, ``L_max``,
    ``L_max_star``); ``BOUND_TAGS`` lists the tags and ``required_inputs``
    the names each one needs.  ``zeta`` defaults to 0.1.
    """
    if tag not in _REQUIRED:
        raise InputError(f"unknown bound tag {tag!r}; expected one of {', '.join(BOUND_TAGS)}")
    given = {**(inputs or {}), **kw}
    p: Dict[str, float] = {}
    for name in _REQUIRED[tag]:
        v = given.get(name, _DEFAULTS.get(name))
        if v is None:
            raise InputError(f"missing input {name!r} for bound {tag!r}")
        try:
            v = float(v)
        except (TypeError, ValueError):
            raise InputError(f"input {name!r} must be a number") from None
        if not math.isfinite(v):
            raise InputError(f"input {name!r} must be finite")
        if v < 0 or (v == 0 and name not in _NON_NEGATIVE):
            raise InputError(f"input {name!r} must be positive")
        p[name] = v
    if "L_star" in p and "L" in p and p["L_star"] > p["L"] * (1 + 1e-12):
        raise InputError("input 'L_star' must not exceed 'L'")
    if "alpha" in p and not p["alpha"] <= 0.5:
        raise InputError("input 'alpha' must lie in (0, 1/2]")
    if "beta" in p and not p["beta"] < 1:
        raise InputError("input 'beta' must lie in (0, 1)")
    if "zeta" in p and not p["zeta"] < 1:
        raise InputError("input 'zeta' must lie in (0, 1)")
    if "d" in p:
        if p["d"] != int(p["d"]):
            raise InputError("input 'd' must be an integer")
        p["d"] = int(p["d"])
    phases = tuple(_ceil(x) for x in _phases(tag, p))
    exact = "order-only" if tag in ORDER_ONLY else "explicit-constants"
    return ComplexityBound(tag, int(sum(phases)), phases, p, exact)


def required_inputs(tag: str) -> Tuple[str, ...]:
    if tag not in _REQUIRED:
        raise InputError(f"unknown bound tag {tag!r}")
    return _REQUIRED[tag]


def gdlo_vs_nag(L: float, L_star: float, mu: float, delta0: float, delta: float, eps: float
                ) -> Tuple[bool, float, float]:
    """Compare the GD(LO) glocal bound with the NAG(1/L) bound.

    Returns ``(gdlo_faster, lhs, rhs)`` where lhs = L*/L and
    rhs = (ln(delta0/eps)/sqrt(kappa) - ln(delta0/delta)) / ln(delta/eps)
    with kappa = L/mu; GD(LO) is predicted faster when lhs < rhs.  As
    delta approaches delta0 the test becomes L* < sqrt(L mu).
    """
    for name, v in (("L", L), ("L_star", L_star), ("mu", mu), ("eps", eps)):
        if not (v > 0 and math.isfinite(v)):
            raise InputError(f"{name} must be positive and finite")
    if not delta0 >= delta > eps:
        raise InputError("need delta0 >= delta > eps")
    kappa = L / mu
    lhs = L_star / L
    rhs = (math.log(delta0 / eps) / math.sqrt(kappa) - math.log(delta0 / delta)) / math.log(delta / eps)
    return lhs < rhs, lhs, rhs


def r2_quadratic(obj: QuadraticProblem, rho: float) -> float:
    """Largest squared distance from the rho-sublevel set to the minimizer: 2(rho - f*)/lambda_min(A)."""
    if obj.mu is None:
        raise UnsupportedError("A is singular: sublevel sets are unbounded (R^2 = inf)")
    if rho < obj.f_star - 1e-12 * (1 + abs(obj.f_star)):
        raise InputError("rho must be at least f*")
    return max(0.0, 2.0 * (rho - obj.f_star) / obj.mu)
