"""Other one-dimensional kernels: moments, samplers, and a family that fails.

Szasz, Baskakov and Post-Widder keep the second-moment excess of order
1/n times a function of t.  Gauss-Weierstrass adds the constant 1/(2n), and
summed over n coordinates of the diagonal operator that becomes +1/2.
"""

import numpy as np

from approxop import (
    FAMILIES,
    GAUSS_WEIERSTRASS,
    NormSq,
    OperatorConfig,
    SequencePoint,
    Space,
    closed_form_eval,
    family_check,
    family_moment,
    family_sample,
    lift1d,
)

rng = np.random.default_rng(1)
n, t = 8, 1.0
for fam in FAMILIES:
    x = family_sample(fam, n, t, rng, size=100_000)
    print(f"{fam!s:>18}: m2 closed {family_moment(fam, n, t, 2):.6f}  "
          f"quadrature {lift1d(fam, n, lambda u: u * u, t):.6f}  sampled {np.mean(x * x):.6f}")

for fam in FAMILIES:
    rep = family_check(fam, [2, 4, 8, 16], [0.0, 0.5, 1.0])
    print(f"{fam!s:>18}: {rep.status}", *rep.reasons)

t = SequencePoint.from_head([0.3, -0.4], Space.REAL)
for n in (2, 10, 100, 10_000):
    err = closed_form_eval(NormSq(), t, OperatorConfig(GAUSS_WEIERSTRASS, n)).scalar - t.norm_sq()
    print(f"Gauss-Weierstrass n={n:>5}: L_n(||.||^2)(t) - ||t||^2 = {err:.12f}")
