"""Watch the third-moment fixed point collapse onto a vertex.

With the exact gradient the update squares the coordinates of the iterate
in the simplex frame every step, so whichever coordinate starts largest
takes over doubly exponentially.  With estimated gradients the same
trajectory flattens out at the sampling noise floor instead of
converging; both traces are printed side by side.
"""

import numpy as np

from simplexlearn import (
    IterationConfig,
    exact_grad_m3,
    find_vertex,
    simplex_source,
    standard_simplex,
)

n = 4

exact = find_vertex(
    None,
    n,
    IterationConfig(iterations=12, sample_per_gradient=1, seed=3, record_trace=True),
    grad_oracle=exact_grad_m3,
)
sampled = find_vertex(
    simplex_source(standard_simplex(n - 1), 5),
    n,
    IterationConfig(iterations=12, sample_per_gradient=20_000, seed=3, record_trace=True),
)

print(f"{'iter':>4}  {'exact step':>12}  {'sampled step':>12}")
for row_e, row_s in zip(exact.trace, sampled.trace):
    print(f"{row_e['iteration']:>4}  {row_e['step']:>12.3e}  {row_s['step']:>12.3e}")

print(f"\nexact run converged: {exact.converged}; final iterate {np.round(exact.u, 6)}")
best = np.abs(sampled.u).argmax()
print(f"sampled run locked onto coordinate {best}; final iterate {np.round(sampled.u, 3)}")
