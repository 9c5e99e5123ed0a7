import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glocal import (
    AdGD,
    Armijo,
    ArmijoConfig,
    Fixed,
    HuberProblem,
    InputError,
    LeastSquaresProblem,
    LineOpt,
    LogisticProblem,
    Polyak,
    QuadraticProblem,
    StopRule,
    TwoRegimeProblem,
    complexity_bound,
    gen_realizable_ls,
    nag_momentum_form,
    run_cd,
    run_gd,
    run_nag,
    run_nlcg,
    run_sgd,
)
from glocal.stepsizes import adgd_potential


def rand_pd(rng, d, cond=50.0, centered=False):
    Q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    A = Q @ np.diag(np.geomspace(1.0, cond, d)) @ Q.T
    return QuadraticProblem(A, None if centered else rng.standard_normal(d))


ILL_Q = QuadraticProblem.diagonal([1.0, 1 / 20])
ILL_W0 = np.array([0.05, 1.0])


# ------------------------------------------------------------ stop rules and traces

def test_stop_rule_validation():
    with pytest.raises(InputError):
        StopRule(gap_tol=0.0)
    with pytest.raises(InputError):
        StopRule(max_iters=-1)


def test_gap_target_needs_known_optimum():
    P = LogisticProblem([[1.0], [-1.0]], [1.0, 1.0])
    with pytest.raises(InputError):
        run_gd(P, LineOpt(), [0.0], StopRule(gap_tol=1e-3))


def test_trace_rows_and_counters():
    tr = run_gd(ILL_Q, Fixed(), ILL_W0, StopRule(max_iters=5))
    assert [r.iter for r in tr.records] == list(range(6))
    assert tr.records[0].step_size is None and tr.records[0].geval == 0
    assert all(r.step_size == 1.0 for r in tr.records[1:])
    assert [r.geval for r in tr.records] == list(range(6))
    assert tr.stop_reason == "max-iters"


def test_line_search_trials_are_billed():
    P = TwoRegimeProblem(1.0, 10.0, 1.0, dim=2)
    tr = run_gd(P, Armijo(ArmijoConfig(mode="reset", eta_init=4.0)), [3.0, -2.0], StopRule(max_iters=3))
    r = tr.records[1]
    assert r.feval >= 2 and r.geval == 1


# ------------------------------------------------------------ gradient descent

def test_fixed_step_scalar_quadratic_one_step():
    P = QuadraticProblem([[3.0]])
    tr = run_gd(P, Fixed(), [5.0], StopRule(gap_tol=1e-14))
    assert tr.iterations == 1 and tr.records[-1].gap == 0.0


def test_polyak_counterexample():
    tr = run_gd(ILL_Q, Polyak(), ILL_W0, StopRule(max_iters=1))
    np.testing.assert_allclose(tr.iterates[1], [-0.2125, 0.7375], atol=1e-12)
    assert tr.records[1].step_size == pytest.approx(5.25, abs=1e-12)
    assert tr.records[0].f == pytest.approx(0.02625, abs=1e-15)
    assert tr.records[1].f == pytest.approx(0.036176, abs=1e-6)
    assert tr.records[0].dist_sq == pytest.approx(1.0025, abs=1e-12)
    assert tr.records[1].dist_sq == pytest.approx(0.5890625, abs=1e-12)


def test_polyak_needs_optimum():
    P = LogisticProblem([[1.0], [-1.0]], [1.0, 1.0])
    with pytest.raises(InputError):
        run_gd(P, Polyak(), [0.0], StopRule(max_iters=3))


def test_polyak_stationary_start_stops_cleanly():
    tr = run_gd(ILL_Q, Polyak(), [0.0, 0.0], StopRule(max_iters=3))
    assert tr.stop_reason == "grad-target" and tr.iterations == 0


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_lo_contraction_on_quadratics(seed):
    rng = np.random.default_rng(seed)
    P = rand_pd(rng, 4, cond=30)
    tr = run_gd(P, LineOpt(), 3 * rng.standard_normal(4), StopRule(gap_tol=1e-10, max_iters=2000))
    gaps = tr.column("gap")
    factor = 1 - P.mu / P.L
    for a, b in zip(gaps[:-1], gaps[1:]):
        assert b <= factor * a + 1e-13


@pytest.mark.parametrize("rule", [LineOpt(), Armijo(), Armijo(ArmijoConfig(mode="forward-backtrack")),
                                  Armijo(ArmijoConfig(mode="reset", eta_init=2.0))])
def test_monotone_rules(rule):
    rng = np.random.default_rng(3)
    X = rng.standard_normal((20, 4))
    y = np.where(rng.standard_normal(20) > 0, 1.0, -1.0)
    for P in (LogisticProblem(X, y, lam=0.05), TwoRegimeProblem(1.0, 40.0, 2.0, dim=4)):
        tr = run_gd(P, rule, 2 * rng.standard_normal(4), StopRule(max_iters=200, grad_tol=1e-10))
        f = tr.column("f")
        assert np.all(np.diff(f) <= 1e-13 * (1 + np.abs(f[:-1])))


def test_polyak_distance_monotone_on_quadratics():
    rng = np.random.default_rng(8)
    for _ in range(5):
        P = rand_pd(rng, 5, cond=40)
        tr = run_gd(P, Polyak(), 4 * rng.standard_normal(5), StopRule(max_iters=300, gap_tol=1e-12))
        dist = tr.column("dist_sq")
        assert np.all(np.diff(dist) <= 1e-12 * dist[:-1])


def test_adgd_potential_monotone():
    rng = np.random.default_rng(21)
    for _ in range(3):
        P = rand_pd(rng, 5, cond=20, centered=True)
        tr = run_gd(P, AdGD(), 5 * rng.standard_normal(5), StopRule(max_iters=150))
        eta, gap = tr.column("step_size"), tr.column("gap")
        W = tr.iterates
        phi = [adgd_potential(W[t], W[t - 1], P.w_star, eta[t], eta[t] / eta[t - 1], gap[t - 1], P.mu, P.L)
               for t in range(3, len(W))]
        assert all(b <= a * (1 + 1e-9) for a, b in zip(phi[:-1], phi[1:]))


def test_adgd_first_step_is_tiny():
    tr = run_gd(ILL_Q, AdGD(eta0=1e-10), ILL_W0, StopRule(max_iters=3))
    assert tr.records[1].step_size == 1e-10
    # second step is the curvature estimate |dw| / (2 |dg|) on a diagonal quadratic
    assert 1 / (2 * ILL_Q.L) <= tr.records[2].step_size <= 1 / (2 * ILL_Q.mu)


def test_sublevel_containment_along_lo_run():
    P = TwoRegimeProblem([1.0, 0.5, 2.0], [100.0, 60.0, 30.0], [1.0, 3.0, 2.0])
    tr = run_gd(P, LineOpt(), [4.0, -3.0, 5.0], StopRule(gap_tol=1e-12, max_iters=5000))
    gaps = tr.column("gap")
    k = int(np.argmax(gaps <= P.delta))
    assert gaps[k] <= P.delta
    assert np.all(gaps[k:] <= P.delta)


# ------------------------------------------------------------ coordinate descent

def test_greedy_cd_example():
    P = QuadraticProblem.diagonal([1.0, 10.0])
    tr = run_cd(P, "greedy", [1.0, 1.0], StopRule(max_iters=1))
    assert tr.extras["coord"][1] == 1
    assert tr.iterates[1][1] == 0.0 and tr.iterates[1][0] == 1.0


def test_greedy_cd_separable_terminates_in_d_steps():
    P = QuadraticProblem.diagonal([1.0, 4.0, 9.0, 0.5], b=[1.0, -2.0, 3.0, 0.1])
    tr = run_cd(P, "greedy", np.zeros(4), StopRule(gap_tol=1e-14, max_iters=4))
    assert tr.stop_reason == "gap-target" and tr.iterations <= 4


def test_uniform_cd_deterministic():
    P = TwoRegimeProblem(1.0, 10.0, 1.0, dim=5)
    a = run_cd(P, "uniform", np.full(5, 3.0), StopRule(max_iters=40), seed=99)
    b = run_cd(P, "uniform", np.full(5, 3.0), StopRule(max_iters=40), seed=99)
    assert a.extras["coord"] == b.extras["coord"]
    assert a.records == b.records


def test_greedy_tie_break_lowest_index():
    P = QuadraticProblem.diagonal([1.0, 1.0, 1.0])
    tr = run_cd(P, "greedy", [1.0, -1.0, 1.0], StopRule(max_iters=1))
    assert tr.extras["coord"][1] == 0


@pytest.mark.parametrize("selection", ["greedy", "uniform"])
def test_cd_monotone(selection):
    rng = np.random.default_rng(4)
    P = rand_pd(rng, 6, cond=100)
    tr = run_cd(P, selection, 3 * rng.standard_normal(6), StopRule(max_iters=300), seed=1)
    f = tr.column("f")
    assert np.all(np.diff(f) <= 1e-13 * (1 + np.abs(f[:-1])))


def test_cd_rejects_unknown_selection():
    with pytest.raises(InputError):
        run_cd(ILL_Q, "cyclic", ILL_W0, StopRule())


# ------------------------------------------------------------ SGD

def _realizable(seed, n=50, d=5):
    data, w = gen_realizable_ls(n, d, seed)
    return LeastSquaresProblem(data.to_dense(), data.labels, w_star=w)


def test_sgd_distance_monotone():
    P = _realizable(3)
    tr = run_sgd(P, 5.0, 3, np.zeros(5), StopRule(max_iters=300))
    d = np.sqrt(tr.column("dist_sq"))
    assert np.all(np.diff(d) <= 1e-12)


def test_sgd_at_solution_stops_immediately():
    P = _realizable(1)
    tr = run_sgd(P, 1.0, 0, P.w_star, StopRule(max_iters=10))
    assert tr.stop_reason == "grad-target" and tr.iterations == 0


def test_sgd_deterministic():
    P = _realizable(2)
    a = run_sgd(P, 2.0, 7, np.ones(5), StopRule(max_iters=60))
    b = run_sgd(P, 2.0, 7, np.ones(5), StopRule(max_iters=60))
    assert a.records == b.records and a.extras == b.extras


def test_sgd_needs_finite_sum():
    with pytest.raises(InputError):
        run_sgd(ILL_Q, 1.0, 0, ILL_W0, StopRule())


# ------------------------------------------------------------ NAG

def test_nag_scalar_quadratic_one_step():
    mu = 3.0
    P = QuadraticProblem([[mu]])
    tr = run_nag(P, mu, 2 / mu, [4.0], StopRule(gap_tol=1e-14))
    assert tr.iterations == 1
    assert tr.records[1].step_size == pytest.approx(1 / mu)


def test_nag_steps_bounded_by_inverse_mu():
    rng = np.random.default_rng(6)
    P = rand_pd(rng, 4, cond=10)
    tr = run_nag(P, P.mu, 10.0, rng.standard_normal(4), StopRule(max_iters=50))
    q = np.array(tr.extras["q"][1:])
    assert np.all((q > 0) & (q <= 1))


def test_nag_potential_decrease():
    rng = np.random.default_rng(7)
    for _ in range(3):
        P = rand_pd(rng, 5, cond=200)
        tr = run_nag(P, P.mu, 1.0, rng.standard_normal(5), StopRule(max_iters=60))
        phi = [r.gap + 0.5 * P.mu * np.sum((z - P.w_star) ** 2) for r, z in zip(tr.records, tr.extras["z"])]
        for t in range(len(phi) - 1):
            assert phi[t + 1] <= (1 - math.sqrt(tr.extras["q"][t + 1])) * phi[t] + 1e-9 * phi[t]


def test_nag_at_solution_stops():
    P = QuadraticProblem.diagonal([1.0, 2.0], b=[1.0, 2.0])
    tr = run_nag(P, P.mu, 1.0, P.w_star, StopRule(max_iters=5))
    assert tr.iterations == 0 and tr.stop_reason == "grad-target"


def test_nag_momentum_form_matches():
    rng = np.random.default_rng(9)
    P = rand_pd(rng, 4, cond=100)
    w0 = rng.standard_normal(4)
    tr = run_nag(P, P.mu, 1.0, w0, StopRule(max_iters=20))
    mom = nag_momentum_form(P, P.mu, w0, tr.column("step_size")[1:])
    for a, b in zip(tr.iterates, mom.iterates):
        assert np.linalg.norm(a - b) <= 1e-8 * (1 + np.linalg.norm(a))


def test_nag_momentum_constant_coefficient_for_fixed_step():
    rng = np.random.default_rng(10)
    P = rand_pd(rng, 3, cond=20)
    w0 = rng.standard_normal(3)
    eta = 1 / P.L
    mom = nag_momentum_form(P, P.mu, w0, [eta] * 6)
    W = mom.iterates
    q = eta * P.mu
    beta = (1 - math.sqrt(q)) / (1 + math.sqrt(q))
    for t in range(1, 6):
        y = W[t] + beta * (W[t] - W[t - 1])
        np.testing.assert_allclose(W[t + 1], y - eta * P.grad(y), rtol=1e-13, atol=1e-13)
    # first iteration has no momentum
    np.testing.assert_allclose(W[1], w0 - eta * P.grad(w0), rtol=1e-15)


def test_nag_fixed_step_validation():
    with pytest.raises(InputError):
        run_nag(ILL_Q, ILL_Q.mu, None, ILL_W0, StopRule(), fixed_eta=100.0)


# ------------------------------------------------------------ NLCG

def _linear_cg(A, b, x, iters):
    r = b - A @ x
    p = r.copy()
    out = [x.copy()]
    for _ in range(iters):
        a = (r @ r) / (p @ A @ p)
        x = x + a * p
        r_new = r - a * (A @ p)
        p = r_new + (r_new @ r_new) / (r @ r) * p
        r = r_new
        out.append(x.copy())
    return out


def test_nlcg_example_two_steps():
    tr = run_nlcg(ILL_Q, ILL_W0, StopRule(max_iters=2))
    assert tr.records[2].gap < 1e-12


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10_000), d=st.integers(2, 6))
def test_nlcg_matches_linear_cg(seed, d):
    rng = np.random.default_rng(seed)
    P = rand_pd(rng, d, cond=20)
    w0 = rng.standard_normal(d)
    tr = run_nlcg(P, w0, StopRule(max_iters=d))
    ref = _linear_cg(P.A, P.b, w0, d)
    for a, b in zip(tr.iterates, ref):
        assert np.linalg.norm(a - b) <= 1e-7 * (1 + np.linalg.norm(b))


def test_nlcg_directions_conjugate():
    rng = np.random.default_rng(11)
    P = rand_pd(rng, 5, cond=10)
    tr = run_nlcg(P, rng.standard_normal(5), StopRule(max_iters=5))
    D = tr.extras["direction"][1:]
    for i in range(len(D)):
        for j in range(i):
            num = abs(D[i] @ P.A @ D[j])
            den = math.sqrt((D[i] @ P.A @ D[i]) * (D[j] @ P.A @ D[j]))
            assert num <= 1e-8 * den


def test_nlcg_resets_on_schedule():
    rng = np.random.default_rng(12)
    P = LogisticProblem(rng.standard_normal((15, 3)), np.ones(15), lam=0.1)
    tr = run_nlcg(P, rng.standard_normal(3), StopRule(max_iters=10), reset_period=3)
    betas = tr.extras["beta"]
    assert all(betas[t] == 0.0 for t in (1, 4, 7, 10))


def test_nlcg_huber_matches_quadratic():
    rng = np.random.default_rng(13)
    X = rng.standard_normal((6, 3))
    w_true = rng.standard_normal(3)
    H = HuberProblem(X @ w_true, tau=50.0, X=X)
    Q = H.as_quadratic()
    w0 = w_true + 0.1 * rng.standard_normal(3)
    assert H.in_quadratic_region(w0)
    a = run_nlcg(H, w0, StopRule(max_iters=3))
    b = run_nlcg(Q, w0, StopRule(max_iters=3))
    for x, y in zip(a.iterates, b.iterates):
        assert np.linalg.norm(x - y) <= 1e-7 * (1 + np.linalg.norm(y))


def test_unbounded_direction_becomes_stop_reason():
    P = LogisticProblem([[1.0]], [1.0])
    tr = run_gd(P, LineOpt(), [0.0], StopRule(max_iters=5))
    assert tr.stop_reason == "unbounded-direction"


# ------------------------------------------------------------ bounds hold empirically

def test_quadratic_runs_within_bounds():
    rng = np.random.default_rng(14)
    P = rand_pd(rng, 4, cond=25)
    w0 = 3 * rng.standard_normal(4)
    d0 = P.value(w0) - P.f_star
    eps = 1e-8
    # a quadratic is glocally smooth with L* = L at any delta
    B = complexity_bound("glocal-gd-lo", L=P.L, L_star=P.L, mu=P.mu, delta0=d0, delta=d0 / 10, eps=eps)
    tr = run_gd(P, LineOpt(), w0, StopRule(gap_tol=eps, max_iters=10 * B.T))
    assert tr.stop_reason == "gap-target" and tr.iterations <= B.T
