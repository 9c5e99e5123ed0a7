"""Objective functions with value, gradient, coordinate and finite-sum access.

Every objective is immutable after construction.  The optional constants
``L``, ``mu``, ``f_star`` and ``w_star`` are ``None`` when unknown.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import InputError, UnsupportedError


def as_point(w, dim: int) -> np.ndarray:
    """Validate ``w`` as a finite float vector of length ``dim``."""
    w = np.asarray(w, dtype=float)
    if w.ndim == 0 and dim == 1:
        w = w.reshape(1)
    if w.shape != (dim,):
        raise InputError(f"expected a vector of length {dim}, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise InputError("point has non-finite entries")
    return w


def spectral_norm_sq(X, tol: float = 1e-12, max_iter: int = 10_000, dense_limit: int = 2000) -> float:
    """lambda_max(X^T X).

    Dense symmetric eigen-solve on the smaller Gram matrix when its side is at
    most ``dense_limit``, power iteration otherwise.
    """
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return 0.0
    n, d = X.shape
    if min(n, d) <= dense_limit:
        G = X.T @ X if d <= n else X @ X.T
        return max(float(np.linalg.eigvalsh(G)[-1]), 0.0)
    v = np.random.default_rng(0).standard_normal(d)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        u = X.T @ (X @ v)
        lam_new = float(v @ u)
        nrm = np.linalg.norm(u)
        if nrm == 0.0:
            return 0.0
        v = u / nrm
        if abs(lam_new - lam) <= tol * max(lam_new, 1e-300):
            return lam_new
        lam = lam_new
    return lam


class Objective:
    """Base class.  Subclasses provide ``_value`` and ``_grad``.

    The public methods validate their inputs; the underscored ones do not
    and are what the optimizers call in hot loops after one validation.
    """

    dim: int
    n_components: int = 1
    finite_sum: bool = False
    L: Optional[float] = None
    mu: Optional[float] = None
    f_star: Optional[float] = None
    w_star: Optional[np.ndarray] = None

    def _value(self, w: np.ndarray) -> float:
        raise NotImplementedError

    def _grad(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _partial(self, w: np.ndarray, j: int) -> float:
        return float(self._grad(w)[j])

    def _component_value(self, i: int, w: np.ndarray) -> float:
        raise UnsupportedError(f"{type(self).__name__} is not a finite sum")

    def _component_grad(self, i: int, w: np.ndarray) -> np.ndarray:
        raise UnsupportedError(f"{type(self).__name__} is not a finite sum")

    def value(self, w) -> float:
        return self._value(as_point(w, self.dim))

    def grad(self, w) -> np.ndarray:
        return self._grad(as_point(w, self.dim))

    def partial(self, w, j: int) -> float:
        if not 0 <= j < self.dim:
            raise InputError(f"coordinate {j} out of range for dimension {self.dim}")
        return self._partial(as_point(w, self.dim), int(j))

    def component_value(self, i: int, w) -> float:
        self._check_component(i)
        return self._component_value(int(i), as_point(w, self.dim))

    def component_grad(self, i: int, w) -> np.ndarray:
        self._check_component(i)
        return self._component_grad(int(i), as_point(w, self.dim))

    def hessian_norm(self, w) -> float:
        raise UnsupportedError(f"{type(self).__name__} has no Hessian access")

    def _check_component(self, i):
        if not self.finite_sum:
            raise UnsupportedError(f"{type(self).__name__} is not a finite sum")
        if not 0 <= i < self.n_components:
            raise InputError(f"component {i} out of range [0, {self.n_components})")


# thin functional aliases over the methods

def evaluate(obj: Objective, w) -> float:
    return obj.value(w)


def grad(obj: Objective, w) -> np.ndarray:
    return obj.grad(w)


def coord_partial(obj: Objective, w, j: int) -> float:
    return obj.partial(w, j)


def component_grad(obj: Objective, i: int, w) -> np.ndarray:
    return obj.component_grad(i, w)


class QuadraticProblem(Objective):
    """f(w) = 1/2 w^T A w - b^T w + c with A symmetric PSD."""

    def __init__(self, A, b=None, c: float = 0.0):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InputError("A must be square")
        if not np.all(np.isfinite(A)):
            raise InputError("A has non-finite entries")
        if np.max(np.abs(A - A.T), initial=0.0) > 1e-12 * max(1.0, np.abs(A).max()):
            raise InputError("A must be symmetric")
        self.A = 0.5 * (A + A.T)
        self.dim = A.shape[0]
        self.b = np.zeros(self.dim) if b is None else as_point(b, self.dim)
        self.c = float(c)
        eig = np.linalg.eigvalsh(self.A)
        if eig[0] < -1e-12 * max(1.0, abs(eig[-1])):
            raise InputError("A must be positive semidefinite")
        self.eigenvalues = eig
        self.L = float(eig[-1])
        tiny = 1e-12 * max(1.0, abs(eig[-1]))
        if eig[0] > tiny:
            self.mu = float(eig[0])
            self.w_star = np.linalg.solve(self.A, self.b)
            self.f_star = self._value(self.w_star)

    @classmethod
    def diagonal(cls, diag, b=None, c: float = 0.0) -> "QuadraticProblem":
        return cls(np.diag(np.asarray(diag, dtype=float)), b, c)

    def _value(self, w):
        return float(0.5 * w @ (self.A @ w) - self.b @ w + self.c)

    def _grad(self, w):
        return self.A @ w - self.b

    def _partial(self, w, j):
        return float(self.A[j] @ w - self.b[j])

    def hessian_norm(self, w) -> float:
        return self.L

    def curvature_along(self, w, d) -> float:
        """d^T A d; constant in w, which lets line searches solve exactly."""
        d = np.asarray(d, dtype=float)
        return float(d @ (self.A @ d))


class LogisticProblem(Objective):
    """Binary logistic loss sum_i ln(1 + exp(-y_i <x_i, w>)) + lam/2 ||w||^2.

    As a finite sum, the ridge term is split evenly over the n components.
    """

    finite_sum = True

    def __init__(self, X, y, lam: float = 0.0):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.asarray(y, dtype=float).reshape(-1)
        if X.shape[0] != y.shape[0]:
            raise InputError("X and y disagree on the number of rows")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise InputError("labels must be -1 or +1")
        if lam < 0:
            raise InputError("ridge coefficient must be non-negative")
        self.X, self.y, self.lam = X, y, float(lam)
        self.n_components, self.dim = X.shape
        self.norm_sq = spectral_norm_sq(X)
        self.L = 0.25 * self.norm_sq + self.lam
        self.mu = self.lam if self.lam > 0 else None

    def _margins(self, w):
        return self.y * (self.X @ w)

    def _value(self, w):
        # logaddexp(0, -m) == max(-m, 0) + log1p(exp(-|m|)), overflow-free
        return float(np.sum(np.logaddexp(0.0, -self._margins(w))) + 0.5 * self.lam * (w @ w))

    def _grad(self, w):
        s = -self.y * _sigmoid(-self._margins(w))
        return self.X.T @ s + self.lam * w

    def _component_value(self, i, w):
        m = self.y[i] * (self.X[i] @ w)
        return float(np.logaddexp(0.0, -m) + 0.5 * self.lam / self.n_components * (w @ w))

    def _component_grad(self, i, w):
        m = self.y[i] * (self.X[i] @ w)
        return -self.y[i] * _sigmoid(-m) * self.X[i] + (self.lam / self.n_components) * w

    def hessian(self, w) -> np.ndarray:
        w = as_point(w, self.dim)
        p = _sigmoid(self._margins(w))
        D = p * (1.0 - p)
        return (self.X.T * D) @ self.X + self.lam * np.eye(self.dim)

    def hessian_norm(self, w) -> float:
        return float(np.linalg.eigvalsh(self.hessian(w))[-1])


def _sigmoid(z):
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class LeastSquaresProblem(Objective):
    """Finite sum of f_i(w) = 1/2 (<x_i, w> - t_i)^2."""

    finite_sum = True

    def __init__(self, X, t, w_star=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        t = np.asarray(t, dtype=float).reshape(-1)
        if X.shape[0] != t.shape[0]:
            raise InputError("X and t disagree on the number of rows")
        self.X, self.t = X, t
        self.n_components, self.dim = X.shape
        gram_eig = np.linalg.eigvalsh(X.T @ X)
        self.L = float(gram_eig[-1])
        self.component_L = np.einsum("ij,ij->i", X, X)
        self.L_max = float(self.component_L.max()) if self.n_components else 0.0
        if gram_eig[0] > 1e-12 * max(1.0, gram_eig[-1]):
            self.mu = float(gram_eig[0])
            if w_star is None:
                w_star = np.linalg.lstsq(X, t, rcond=None)[0]
        if w_star is not None:
            self.w_star = as_point(w_star, self.dim)
            self.f_star = self._value(self.w_star)

    def _value(self, w):
        r = self.X @ w - self.t
        return float(0.5 * r @ r)

    def _grad(self, w):
        return self.X.T @ (self.X @ w - self.t)

    def _component_value(self, i, w):
        r = self.X[i] @ w - self.t[i]
        return float(0.5 * r * r)

    def _component_grad(self, i, w):
        return (self.X[i] @ w - self.t[i]) * self.X[i]

    def hessian_norm(self, w) -> float:
        return self.L


class HuberProblem(Objective):
    """Robust regression sum_i huber_tau(<x_i, w> - t_i).

    huber_tau(r) = r^2 / (2 tau) for |r| <= tau and |r| - tau/2 beyond.
    With ``X`` omitted the loss is separable: sum_j huber_tau(w_j - t_j).
    Inside the region where every residual is quadratic the Hessian is the
    constant X^T X / tau.
    """

    def __init__(self, targets, tau: float, X=None):
        t = np.asarray(targets, dtype=float).reshape(-1)
        if tau <= 0:
            raise InputError("tau must be positive")
        X = np.eye(t.size) if X is None else np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] != t.size:
            raise InputError("X and targets disagree on the number of rows")
        self.X, self.t, self.tau = X, t, float(tau)
        self.dim = X.shape[1]
        eig = np.linalg.eigvalsh(X.T @ X)
        self.L = float(eig[-1]) / self.tau
        sol, *_ = np.linalg.lstsq(X, t, rcond=None)
        if np.allclose(X @ sol, t, atol=1e-12) and eig[0] > 1e-12 * max(1.0, eig[-1]):
            self.w_star = sol
            self.f_star = 0.0

    def residuals(self, w) -> np.ndarray:
        return self.X @ as_point(w, self.dim) - self.t

    def in_quadratic_region(self, w) -> bool:
        return bool(np.all(np.abs(self.residuals(w)) <= self.tau))

    def as_quadratic(self) -> QuadraticProblem:
        """The quadratic that agrees with this loss wherever all residuals are small."""
        A = self.X.T @ self.X / self.tau
        return QuadraticProblem(A, self.X.T @ self.t / self.tau, self.t @ self.t / (2 * self.tau))

    def _value(self, w):
        r = self.X @ w - self.t
        a = np.abs(r)
        return float(np.sum(np.where(a <= self.tau, r * r / (2 * self.tau), a - 0.5 * self.tau)))

    def _grad(self, w):
        r = self.X @ w - self.t
        psi = np.clip(r / self.tau, -1.0, 1.0)
        return self.X.T @ psi


class TwoRegimeProblem(Objective):
    """Separable sum of C^1 piecewise quadratics with a flat local core.

    Each coordinate contributes (L*/2) x^2 for |x| <= r and
    (L/2) x^2 - (L - L*) r |x| + (L - L*) r^2 / 2 beyond.  Scalars broadcast
    over ``dim`` coordinates; passing arrays gives per-coordinate regimes
    (``r = inf`` makes a coordinate a plain quadratic with curvature L*).

    The function is globally max(L)-smooth, min(L*)-strongly convex, and
    max(L*)-smooth on {f <= delta} for delta <= min(L* r^2 / 2).
    """

    def __init__(self, r=1.0, L=10.0, L_star=1.0, dim: Optional[int] = None):
        r, Lg, Ls = np.broadcast_arrays(*(np.atleast_1d(np.asarray(v, dtype=float)) for v in (r, L, L_star)))
        if dim is not None:
            if r.size == 1:
                r, Lg, Ls = (np.full(dim, v[0]) for v in (r, Lg, Ls))
            elif r.size != dim:
                raise InputError("per-coordinate parameters disagree with dim")
        if np.any(r <= 0) or np.any(Ls <= 0) or np.any(Ls > Lg):
            raise InputError("need r > 0 and 0 < L_star <= L")
        self.r, self.L_vec, self.L_star_vec = r.copy(), Lg.copy(), Ls.copy()
        self.dim = r.size
        self.L = float(Lg.max())
        self.L_star = float(Ls.max())
        self.mu = float(Ls.min())
        # strong convexity in the 1-norm of a separable sum: 1 / sum(1/mu_j)
        self.mu1 = float(1.0 / np.sum(1.0 / Ls))
        self.f_star = 0.0
        self.w_star = np.zeros(self.dim)
        self.delta = float(np.min(0.5 * Ls * r * r))

    def profile(self):
        from .theory import GlocalProfile
        return GlocalProfile(self.L, self.L_star, self.delta, "function-values")

    def _value(self, w):
        a = np.abs(w)
        gap = self.L_vec - self.L_star_vec
        inner = 0.5 * self.L_star_vec * w * w
        with np.errstate(invalid="ignore"):
            outer = 0.5 * self.L_vec * w * w - gap * self.r * a + 0.5 * gap * self.r * self.r
        return float(np.sum(np.where(a <= self.r, inner, outer)))

    def _grad(self, w):
        a = np.abs(w)
        gap = self.L_vec - self.L_star_vec
        with np.errstate(invalid="ignore"):
            outer = self.L_vec * w - gap * self.r * np.sign(w)
        return np.where(a <= self.r, self.L_star_vec * w, outer)

    def _partial(self, w, j):
        x = w[j]
        if abs(x) <= self.r[j]:
            return float(self.L_star_vec[j] * x)
        return float(self.L_vec[j] * x - (self.L_vec[j] - self.L_star_vec[j]) * self.r[j] * math.copysign(1.0, x))

    def hessian_norm(self, w) -> float:
        w = as_point(w, self.dim)
        return float(np.max(np.where(np.abs(w) <= self.r, self.L_star_vec, self.L_vec)))
