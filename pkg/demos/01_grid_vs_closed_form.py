"""Diagonal Bernstein operator: brute-force grid sum against closed forms.

The operator averages F over the (n+1)^n grid points h/n.  For quadratic
test functions the average has a closed form, so the two should agree to
rounding error while the grid cost explodes with n.
"""

import time

import numpy as np

from approxop import (
    ClosedForm,
    Enumerate,
    Fbar,
    NormSq,
    OperatorConfig,
    SequencePoint,
    apply_operator,
    index_count,
)

rng = np.random.default_rng(0)
t = SequencePoint.from_head(rng.uniform(size=6))
print("t =", np.round(t.head, 3))

for n in range(1, 8):
    row = [f"n={n}  grid={index_count(n):>8d}"]
    for F in (NormSq(), Fbar()):
        start = time.perf_counter()
        grid = apply_operator(F, t, OperatorConfig(n=n, strategy=Enumerate())).scalar
        took = time.perf_counter() - start
        exact = apply_operator(F, t, OperatorConfig(n=n, strategy=ClosedForm())).scalar
        row.append(f"{type(F).__name__}: {exact:.12f} (|diff| {abs(grid - exact):.1e}, {took:.2f}s)")
    print("  ".join(row))

# beyond the budget the grid engine refuses and names the alternatives
try:
    apply_operator(NormSq(), t, OperatorConfig(n=9, strategy=Enumerate()))
except Exception as exc:
    print(type(exc).__name__, "->", exc)
