"""Quantitative error estimates for the diagonal operators.

For a positive operator with ``S_n(1) = 1`` and a uniformly continuous
``F`` the pointwise error obeys

    ||L_n(F)(t) - F(t)|| <= omega(F, delta) * (1 + gamma_n^2(t) / delta^2),

where ``gamma_n^2(t) = L_n(||. - t||^2)(t)``.  For the Bernstein family with
zero anchor ``gamma_n^2(t) = sum_{j>n} t_j^2 + sum_{j<=n} (t_j - t_j^2)/n``,
and ``delta = gamma_n`` turns the estimate into ``2 omega(F, gamma_n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from approxop.diag_operator import MonteCarlo, OperatorConfig, closed_form_eval, evaluate_with_fallback
from approxop.errors import DomainError
from approxop.function_model import Mapping, ModulusValue, PsiSq, empirical_modulus, modulus
from approxop.kernels1d import BERNSTEIN, KernelFamily
from approxop.sequence_space import SequencePoint, Space

__all__ = [
    "BoundReport",
    "gamma_sq",
    "ucb_bound",
    "ucb_bound_relaxed",
    "relaxed_argument_sq",
    "general_bound",
    "bound_vs_actual",
]

SQRT_GAMMA = "sqrt_gamma"
_SLACK = 1e-10


@dataclass
class BoundReport:
    """An error bound at one point, optionally paired with the actual error.

    For ``kind == "ucb"``: ``bound = omega_at_delta * (1 + gamma_sq / delta^2)``.
    For ``kind == "relaxed"``: ``delta`` is the relaxed radius and
    ``bound = 2 * omega_at_delta``.
    """

    n: int
    point: SequencePoint
    gamma_sq: float
    delta: float
    omega_at_delta: float | None
    omega_provenance: str
    bound: float | None
    kind: str = "ucb"
    actual_error: float | None = None
    std_error: float | None = None
    engine: str | None = None

    @property
    def certifying(self) -> bool:
        """A bound built from an exact or upper modulus can certify the error."""
        return self.bound is not None and self.omega_provenance in ("exact", "upper")

    @property
    def holds(self) -> bool | None:
        """``actual <= bound`` when certifying and the actual error is known."""
        if not self.certifying or self.actual_error is None:
            return None
        return self.actual_error <= self.bound + _SLACK


def _omega_at(omega, delta: float, space: Space = Space.GAMMA, radius: float | None = None) -> ModulusValue:
    """Normalize a modulus accessor: a Mapping, a callable or a number."""
    if isinstance(omega, Mapping):
        return modulus(omega, delta, space, radius)
    value = omega(delta) if callable(omega) else omega
    if isinstance(value, ModulusValue):
        return value
    if value is None:
        return ModulusValue(None, "unknown")
    # user-supplied numbers are taken as certified upper bounds
    return ModulusValue(float(value), "upper")


def gamma_sq(t: SequencePoint, n: int, family: KernelFamily = BERNSTEIN, anchor: SequencePoint | None = None) -> float:
    """``gamma_n^2(t) = L_n(||. - t||^2)(t)``, computed in closed form."""
    config = OperatorConfig(family, n, anchor)
    return max(closed_form_eval(PsiSq(t), t, config).scalar, 0.0)


def ucb_bound(
    omega,
    t: SequencePoint,
    n: int,
    delta: float | str = SQRT_GAMMA,
    family: KernelFamily = BERNSTEIN,
    anchor: SequencePoint | None = None,
    radius: float | None = None,
) -> BoundReport:
    """``omega(F, delta) [1 + gamma_n^2(t) / delta^2]``.

    ``delta="sqrt_gamma"`` picks ``delta = gamma_n(t)`` (bound ``2 omega``);
    when ``gamma_n(t) = 0`` the operator reproduces ``F(t)`` and the bound is 0.
    """
    g2 = gamma_sq(t, n, family, anchor)
    space = Space.for_family(family)
    if delta == SQRT_GAMMA:
        if g2 == 0.0:
            return BoundReport(n, t, 0.0, 0.0, 0.0, "exact", 0.0)
        delta = math.sqrt(g2)
    delta = float(delta)
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    om = _omega_at(omega, delta, space, radius)
    bound = None if om.value is None else om.value * (1.0 + g2 / (delta * delta))
    return BoundReport(n, t, g2, delta, om.value, om.provenance, bound)


def relaxed_argument_sq(t: SequencePoint, n: int) -> float:
    """``sum_{j>n} t_j^2 + ||t||/sqrt(n) + ||t||^2/n``, an upper bound of ``gamma_n^2(t)``."""
    nrm_sq = t.norm_sq()
    return t.tail_sq(n) + math.sqrt(nrm_sq) / math.sqrt(n) + nrm_sq / n


def ucb_bound_relaxed(omega, t: SequencePoint, n: int, radius: float | None = None) -> BoundReport:
    """Coarser bound ``2 omega(F, sqrt(relaxed_argument_sq(t, n)))`` (Bernstein, zero anchor)."""
    arg = relaxed_argument_sq(t, n)
    g2 = gamma_sq(t, n)
    if arg == 0.0:
        return BoundReport(n, t, g2, 0.0, 0.0, "exact", 0.0, kind="relaxed")
    delta = math.sqrt(arg)
    om = _omega_at(omega, delta, Space.GAMMA, radius)
    bound = None if om.value is None else 2.0 * om.value
    return BoundReport(n, t, g2, delta, om.value, om.provenance, bound, kind="relaxed")


def general_bound(S_n_one: float, gamma_sq: float, norm_F_t: float, omega, delta: float) -> float:
    """Error bound for a positive operator not necessarily preserving constants.

    ``||F(t)|| |S_n(1)(t) - 1| + omega(F, delta) [S_n(1)(t) + gamma_n^2(t)/delta^2]``
    """
    if S_n_one < 0:
        raise DomainError("S_n(1)(t) must be nonnegative")
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    om = _omega_at(omega, delta)
    if om.value is None:
        raise DomainError("modulus of continuity unavailable")
    return norm_F_t * abs(S_n_one - 1.0) + om.value * (S_n_one + gamma_sq / (delta * delta))


def bound_vs_actual(
    F: Mapping,
    t: SequencePoint,
    n: int,
    family: KernelFamily = BERNSTEIN,
    delta: float | str = SQRT_GAMMA,
    anchor: SequencePoint | None = None,
    omega=None,
    radius: float | None = None,
    monte_carlo: MonteCarlo | None = None,
    empirical: tuple[int, np.random.Generator] | None = None,
) -> BoundReport:
    """Compare ``||L_n(F)(t) - F(t)||`` with the modulus bound.

    The actual value comes from the first exact engine that applies (Monte
    Carlo only if ``monte_carlo`` is given).  Without a known modulus an
    ``empirical=(samples, rng)`` lower estimate may be used; such reports are
    marked non-certifying.
    """
    config = OperatorConfig(family, n, anchor)
    report_eval = evaluate_with_fallback(F, t, config, monte_carlo=monte_carlo)
    actual = float(np.linalg.norm(report_eval.value - F.evaluate(t)))
    om_source = F if omega is None else omega
    report = ucb_bound(om_source, t, n, delta, family, anchor, radius)
    if report.omega_at_delta is None and empirical is not None:
        samples, rng = empirical
        emp = empirical_modulus(F, report.delta, samples, rng, Space.for_family(family))
        report = ucb_bound(emp, t, n, report.delta, family, anchor)
    report.actual_error = actual
    report.std_error = report_eval.std_error
    report.engine = report_eval.engine
    return report
