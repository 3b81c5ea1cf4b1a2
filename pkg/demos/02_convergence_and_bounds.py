"""How fast does L_n(F)(t) approach F(t), and what does the modulus bound promise?

For ||.||^2 the signed error has an explicit formula; for a unit linear
functional the bound 2 omega(F, gamma_n(t)) can be compared with the truth.
"""

import math

from approxop import (
    LinearFunctional,
    NormSq,
    OperatorConfig,
    SequencePoint,
    Space,
    bound_vs_actual,
    closed_form_eval,
    gamma_sq,
)
from approxop.bounds import ucb_bound_relaxed

t = SequencePoint.geometric([0.5, 0.5, 0.9], 0.6, 0.7)
print("||t||^2 =", t.norm_sq())
print(f"{'n':>5} {'error':>12} {'gamma^2':>12}")
for n in (1, 2, 4, 8, 16, 32, 64, 128):
    err = closed_form_eval(NormSq(), t, OperatorConfig(n=n)).scalar - t.norm_sq()
    print(f"{n:>5} {err:>12.6e} {gamma_sq(t, n):>12.6e}")

# unit-norm coefficients phi_j = sqrt(1 - r^2) r^(j-1)
r = 0.5
phi = SequencePoint.geometric([], math.sqrt(1 - r * r), r, Space.REAL)
F = LinearFunctional(phi)
print(f"\n{'n':>5} {'actual':>12} {'bound':>12} {'relaxed':>12}  provenance")
for n in (1, 2, 4, 8, 16):
    rep = bound_vs_actual(F, t, n)
    relaxed = ucb_bound_relaxed(F, t, n).bound
    print(f"{n:>5} {rep.actual_error:>12.4e} {rep.bound:>12.4e} {relaxed:>12.4e}  {rep.omega_provenance}")
