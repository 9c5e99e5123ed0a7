"""One Polyak step on f(w) = w0^2/2 + w1^2/40 can raise f while shrinking ||w - w*||."""
import numpy as np

from glocal import Polyak, QuadraticProblem, StopRule, run_gd

P = QuadraticProblem.diagonal([1.0, 1 / 20])
trace = run_gd(P, Polyak(), np.array([0.05, 1.0]), StopRule(max_iters=3))

print(f"{'t':>2} {'step':>10} {'f':>12} {'||w-w*||^2':>12}  w")
for r, w in zip(trace.records, trace.iterates):
    step = "" if r.step_size is None else f"{r.step_size:.6g}"
    print(f"{r.iter:>2} {step:>10} {r.f:>12.6g} {r.dist_sq:>12.6g}  {np.round(w, 6)}")
