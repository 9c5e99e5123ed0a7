"""When does exact line search beat accelerated gradient with step 1/L?

Line optimization wins when the local constant is below sqrt(L mu); otherwise
acceleration wins.  Both cases below start from the same point.
"""
import math

import numpy as np

from glocal import LineOpt, StopRule, TwoRegimeProblem, gdlo_vs_nag, run_gd, run_nag

eps = 1e-8
w0 = np.array([0.01, 0.99])
stop = StopRule(gap_tol=eps, max_iters=50_000)

for label, L_star in (("small local constant", [4.0, 4.0]), ("no local gain", [400.0, 4.0])):
    P = TwoRegimeProblem([1.0, math.inf], [400.0, 4.0], L_star)
    d0 = P.value(w0)
    gd = run_gd(P, LineOpt(), w0, stop).first_iter_below(eps)
    nag = run_nag(P, P.mu, None, w0, stop, fixed_eta=1 / P.L).first_iter_below(eps)
    faster, lhs, rhs = gdlo_vs_nag(P.L, P.L_star, P.mu, d0, d0, eps)
    print(f"{label}: L*={P.L_star:g}, sqrt(L mu)={math.sqrt(P.L * P.mu):g}")
    print(f"  line-opt {gd} iterations, NAG(1/L) {nag} iterations")
    print(f"  analytic: L*/L = {lhs:.4g} vs {rhs:.4g} -> line-opt predicted faster: {faster}\n")
