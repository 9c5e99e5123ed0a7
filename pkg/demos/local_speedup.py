"""Adaptive steps versus 1/L on a function whose curvature drops near the solution.

The two-regime test function is 100-smooth globally but only 1-smooth on the
sublevel set {f <= 0.5}.  Exact line optimization, forward-tracking Armijo
and Polyak steps pick up the small local constant; the fixed step does not.
"""
import numpy as np

from glocal import (Armijo, ArmijoConfig, Fixed, LineOpt, Polyak, StopRule, TwoRegimeProblem,
                    complexity_bound, run_cd, run_gd, run_nag)

P = TwoRegimeProblem(r=1.0, L=100.0, L_star=1.0, dim=2)
w0 = np.array([3.0, -2.5])
eps = 1e-6
delta0 = P.value(w0)
stop = StopRule(gap_tol=eps, max_iters=50_000)
common = dict(L=P.L, L_star=P.L_star, delta=P.delta, eps=eps)

runs = {
    "GD 1/L": (run_gd(P, Fixed(), w0, stop), None),
    "GD line-opt": (run_gd(P, LineOpt(), w0, stop),
                    complexity_bound("glocal-gd-lo", mu=P.mu, delta0=delta0, **common)),
    "GD Armijo fwd/back": (run_gd(P, Armijo(ArmijoConfig(mode="forward-backtrack", eta_init=1 / P.L)), w0, stop),
                           complexity_bound("armijo", mu=P.mu, delta0=delta0, alpha=0.5, beta=0.5, **common)),
    "GD Polyak": (run_gd(P, Polyak(), w0, stop),
                  complexity_bound("polyak-values", mu=P.mu, dist0_sq=float(w0 @ w0), **common)),
    "greedy CD": (run_cd(P, "greedy", w0, stop),
                  complexity_bound("cd-greedy", mu1=P.mu1, delta0=delta0, **common)),
    "NAG search": (run_nag(P, P.mu, 1.0, w0, stop),
                   complexity_bound("nag", mu=P.mu, delta0=delta0, dist0_sq=float(w0 @ w0), **common)),
}

print(f"initial gap {delta0:g}, local region gap <= {P.delta:g}, target {eps:g}\n")
print(f"{'method':<20} {'iters':>6} {'local iters':>11} {'bound':>6} {'f evals':>8} {'g evals':>8}")
for name, (tr, bound) in runs.items():
    hit = tr.first_iter_below(eps)
    local = hit - tr.first_iter_below(P.delta)
    last = tr.records[hit]
    print(f"{name:<20} {hit:>6} {local:>11} {bound.T if bound else '-':>6} {last.feval:>8} {last.geval:>8}")
