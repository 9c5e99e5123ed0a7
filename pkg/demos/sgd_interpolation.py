"""SGD with a stochastic Armijo search on a realizable least-squares problem.

Because every component shares the solution, each accepted step moves the
iterate no further from it.
"""
import numpy as np

from glocal import LeastSquaresProblem, StopRule, gen_realizable_ls, run_sgd

data, w_true = gen_realizable_ls(50, 5, seed=1)
P = LeastSquaresProblem(data.to_dense(), data.labels, w_star=w_true)
tr = run_sgd(P, eta_max=10.0, seed=1, w0=np.zeros(5), stop=StopRule(max_iters=500))
dist = np.sqrt(tr.column("dist_sq"))
print(f"distance: start {dist[0]:.4g}, after 100 {dist[100]:.3g}, end {dist[-1]:.3g}")
print(f"largest single-step increase: {np.max(np.diff(dist)):.3g}")
print(f"stop reason: {tr.stop_reason}")
