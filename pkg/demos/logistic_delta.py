"""Glocal constants of logistic regression and the delta minimizing the bound."""
import numpy as np

from glocal import gen_separable_logistic, logistic_glocal, optimal_delta_logistic
from glocal.theory import logistic_h

data = gen_separable_logistic(200, 10, 0.1, seed=0)
prof = logistic_glocal(data.to_dense(), ell_star=0.0)
print(f"global L = {prof.L:.4g}")
for delta in (1e-3, 1e-2, 1e-1, 1.0, 10.0):
    print(f"  delta={delta:<6g} L*(delta)={prof.local(delta):.4g}")

delta0, eps = 10.0, 1e-3
for ell in (0.0, 0.1, 0.3):
    d, case = optimal_delta_logistic(delta0, eps, ell)
    grid = np.geomspace(eps, delta0, 2001)
    best = grid[np.argmin([logistic_h(x, delta0, eps, ell) for x in grid])]
    print(f"ell*={ell}: {case}, delta*={d:.5g} (grid search {best:.5g})")
