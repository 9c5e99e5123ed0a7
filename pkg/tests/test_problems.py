import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from glocal import (
    HuberProblem,
    InputError,
    LeastSquaresProblem,
    LogisticProblem,
    QuadraticProblem,
    TwoRegimeProblem,
    UnsupportedError,
    component_grad,
    coord_partial,
    evaluate,
    grad,
)
from glocal.problems import spectral_norm_sq

RNG = np.random.default_rng(12345)


def _fd_grad(f, w):
    h = 1e-6 * (1 + np.linalg.norm(w))
    g = np.empty_like(w)
    for j in range(w.size):
        e = np.zeros_like(w)
        e[j] = h
        g[j] = (f(w + e) - f(w - e)) / (2 * h)
    return g


def _problems():
    X = RNG.standard_normal((12, 4))
    y = np.where(RNG.standard_normal(12) > 0, 1.0, -1.0)
    M = RNG.standard_normal((4, 4))
    return {
        "quadratic": QuadraticProblem(M @ M.T + np.eye(4), RNG.standard_normal(4), 0.3),
        "logistic": LogisticProblem(X, y, lam=0.1),
        "least-squares": LeastSquaresProblem(X, X @ RNG.standard_normal(4)),
        "huber": HuberProblem(RNG.standard_normal(12), 0.7, X),
        "two-regime": TwoRegimeProblem([1.0, 0.5, 2.0, np.inf], [10.0, 50.0, 3.0, 2.0], [1.0, 2.0, 3.0, 2.0]),
    }


PROBLEMS = _problems()
points = arrays(np.float64, 4, elements=st.floats(-3, 3, allow_nan=False))


# ------------------------------------------------------------ spec examples

def test_quadratic_value_example():
    P = QuadraticProblem.diagonal([1.0, 1 / 20])
    assert evaluate(P, [0.05, 1.0]) == pytest.approx(0.02625, abs=1e-15)


def test_quadratic_grad_example():
    P = QuadraticProblem.diagonal([1.0, 1 / 20])
    np.testing.assert_allclose(grad(P, [0.05, 1.0]), [0.05, 0.05], atol=1e-15)


def test_logistic_value_at_zero_is_n_ln2():
    X = RNG.standard_normal((7, 3))
    P = LogisticProblem(X, np.ones(7))
    assert evaluate(P, np.zeros(3)) == pytest.approx(7 * math.log(2), rel=1e-15)


def test_logistic_symmetric_labels_cancel():
    x = np.array([1.0, -2.0])
    P = LogisticProblem(np.vstack([x, x]), [1.0, -1.0])
    np.testing.assert_allclose(grad(P, np.zeros(2)), 0.0, atol=1e-15)


def test_two_regime_value_example():
    P = TwoRegimeProblem(1.0, 10.0, 1.0)
    assert evaluate(P, [2.0]) == pytest.approx(6.5, abs=1e-14)


def test_coord_partial_diagonal_example():
    P = QuadraticProblem.diagonal([1.0, 10.0])
    assert coord_partial(P, [1.0, 1.0], 1) == 10.0


def test_component_grad_single_sample():
    P = LeastSquaresProblem([[1.0]], [1.0])
    np.testing.assert_allclose(component_grad(P, 0, [3.0]), [2.0])


def test_component_grad_zero_at_interpolation_point():
    X = RNG.standard_normal((6, 3))
    w = RNG.standard_normal(3)
    P = LeastSquaresProblem(X, X @ w, w_star=w)
    for i in range(6):
        np.testing.assert_allclose(component_grad(P, i, w), 0.0, atol=1e-14)


# ------------------------------------------------------------ errors

def test_dimension_mismatch_rejected():
    with pytest.raises(InputError):
        evaluate(PROBLEMS["quadratic"], np.zeros(3))


def test_non_finite_point_rejected():
    with pytest.raises(InputError):
        grad(PROBLEMS["quadratic"], [0.0, np.nan, 0.0, 0.0])


def test_partial_index_out_of_range():
    with pytest.raises(InputError):
        coord_partial(PROBLEMS["quadratic"], np.zeros(4), 4)


def test_component_grad_on_non_finite_sum():
    with pytest.raises(UnsupportedError):
        component_grad(PROBLEMS["quadratic"], 0, np.zeros(4))


def test_component_index_out_of_range():
    with pytest.raises(InputError):
        component_grad(PROBLEMS["least-squares"], 12, np.zeros(4))


def test_quadratic_rejects_asymmetric_and_indefinite():
    with pytest.raises(InputError):
        QuadraticProblem([[1.0, 1.0], [0.0, 1.0]])
    with pytest.raises(InputError):
        QuadraticProblem.diagonal([1.0, -1.0])


def test_two_regime_rejects_bad_constants():
    with pytest.raises(InputError):
        TwoRegimeProblem(1.0, 1.0, 2.0)
    with pytest.raises(InputError):
        TwoRegimeProblem(0.0, 2.0, 1.0)


def test_logistic_rejects_non_binary_labels():
    with pytest.raises(InputError):
        LogisticProblem([[1.0]], [0.5])


# ------------------------------------------------------------ reported constants

def test_quadratic_constants():
    P = QuadraticProblem.diagonal([2.0, 5.0], b=[2.0, 5.0], c=1.0)
    assert P.L == 5.0 and P.mu == 2.0
    np.testing.assert_allclose(P.w_star, [1.0, 1.0])
    assert P.f_star == pytest.approx(1.0 - 3.5)


def test_singular_quadratic_has_no_mu():
    P = QuadraticProblem.diagonal([1.0, 0.0])
    assert P.mu is None and P.w_star is None


def test_logistic_constants():
    X = RNG.standard_normal((9, 3))
    lam_max = np.linalg.eigvalsh(X.T @ X)[-1]
    P = LogisticProblem(X, np.ones(9), lam=0.2)
    assert P.L == pytest.approx(0.25 * lam_max + 0.2, rel=1e-9)
    assert P.mu == 0.2
    assert LogisticProblem(X, np.ones(9)).mu is None


def test_least_squares_component_constants():
    X = RNG.standard_normal((5, 2))
    P = LeastSquaresProblem(X, np.zeros(5))
    np.testing.assert_allclose(P.component_L, np.sum(X * X, axis=1))


def test_spectral_norm_matches_eigensolver():
    X = RNG.standard_normal((30, 6))
    assert spectral_norm_sq(X) == pytest.approx(np.linalg.eigvalsh(X.T @ X)[-1], rel=1e-9)


def test_two_regime_profile():
    P = TwoRegimeProblem(2.0, 10.0, 1.0, dim=3)
    assert (P.L, P.L_star, P.mu, P.f_star) == (10.0, 1.0, 1.0, 0.0)
    assert P.delta == pytest.approx(2.0)
    prof = P.profile()
    assert prof.L == 10.0 and prof.local() == 1.0


def test_logistic_large_margins_do_not_overflow():
    P = LogisticProblem([[1.0]], [1.0])
    assert evaluate(P, [-1000.0]) == pytest.approx(1000.0)
    assert evaluate(P, [1000.0]) >= 0.0
    assert np.all(np.isfinite(grad(P, [-1000.0])))


# ------------------------------------------------------------ properties

@pytest.mark.parametrize("name", sorted(PROBLEMS))
@settings(max_examples=40, deadline=None)
@given(w=points)
def test_gradient_matches_finite_differences(name, w):
    P = PROBLEMS[name]
    fd = _fd_grad(P.value, w)
    g = P.grad(w)
    # kinks of the piecewise problems are measure-zero; skip points within h of one
    if name == "two-regime" and np.any(np.abs(np.abs(w) - P.r) < 1e-4):
        return
    if name == "huber" and np.any(np.abs(np.abs(P.residuals(w)) - P.tau) < 1e-4):
        return
    assert np.linalg.norm(g - fd) <= 1e-4 * max(1.0, np.linalg.norm(g))


@pytest.mark.parametrize("name", sorted(PROBLEMS))
@settings(max_examples=25, deadline=None)
@given(w=points)
def test_partials_reassemble_gradient(name, w):
    P = PROBLEMS[name]
    parts = np.array([P.partial(w, j) for j in range(P.dim)])
    np.testing.assert_allclose(parts, P.grad(w), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("name", ["logistic", "least-squares"])
@settings(max_examples=25, deadline=None)
@given(w=points)
def test_component_gradients_sum_to_gradient(name, w):
    P = PROBLEMS[name]
    total = sum(P.component_grad(i, w) for i in range(P.n_components))
    np.testing.assert_allclose(total, P.grad(w), atol=1e-12 * max(1.0, np.abs(total).max()))
    fsum = sum(P.component_value(i, w) for i in range(P.n_components))
    assert fsum == pytest.approx(P.value(w), rel=1e-12)


@pytest.mark.parametrize("name", sorted(PROBLEMS))
@settings(max_examples=25, deadline=None)
@given(w=points)
def test_values_not_below_known_optimum(name, w):
    P = PROBLEMS[name]
    if P.f_star is not None:
        assert P.value(w) >= P.f_star - 1e-12 * (1 + abs(P.f_star))


@pytest.mark.parametrize("name", sorted(k for k, P in PROBLEMS.items() if P.w_star is not None))
def test_gradient_vanishes_at_known_solution(name):
    P = PROBLEMS[name]
    assert np.linalg.norm(P.grad(P.w_star)) <= 1e-8 * (1 + np.linalg.norm(P.w_star))


@settings(max_examples=30, deadline=None)
@given(x=st.floats(-1, 1), y=st.floats(-1, 1), u=st.floats(-5, 5), v=st.floats(-5, 5))
def test_two_regime_local_and_global_lipschitz(x, y, u, v):
    P = TwoRegimeProblem(1.0, 10.0, 1.0)
    assert abs(P.partial([x], 0) - P.partial([y], 0)) <= 1.0 * abs(x - y) + 1e-14
    assert abs(P.partial([u], 0) - P.partial([v], 0)) <= 10.0 * abs(u - v) + 1e-12


def test_two_regime_is_c1_at_the_kink():
    P = TwoRegimeProblem(1.0, 10.0, 1.0)
    for s in (1.0, -1.0):
        a, b = P.partial([s * (1 - 1e-12)], 0), P.partial([s * (1 + 1e-12)], 0)
        assert abs(a - b) < 1e-9
        assert abs(P.value([s * (1 - 1e-12)]) - P.value([s * (1 + 1e-12)])) < 1e-9


def test_huber_hessian_constant_in_quadratic_region():
    t = np.array([0.3, -0.2, 0.1])
    P = HuberProblem(t, tau=1.0)
    Q = P.as_quadratic()
    w = np.array([0.1, 0.0, -0.2])
    assert P.in_quadratic_region(w)
    assert P.value(w) == pytest.approx(Q.value(w), abs=1e-15)
    np.testing.assert_allclose(P.grad(w), Q.grad(w), atol=1e-15)


def test_logistic_hessian_bound_random_points():
    X = RNG.standard_normal((20, 5))
    y = np.where(RNG.standard_normal(20) > 0, 1.0, -1.0)
    P = LogisticProblem(X, y)
    lam_max = np.linalg.eigvalsh(X.T @ X)[-1]
    for _ in range(30):
        w = 2 * RNG.standard_normal(5)
        assert P.hessian_norm(w) <= P.value(w) * lam_max * (1 + 1e-12)
