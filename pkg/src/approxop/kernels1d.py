"""One-dimensional positive operators and their probability kernels.

Every family below is an integral operator

    L_{n,1}(g)(t) = E[g(X)],   X ~ mu_n(.; t),

for a probability measure ``mu_n(.; t)`` on the family's domain interval.
The Bernstein case is the binomial measure on the grid ``{0, 1/n, ..., 1}``.

The normalizations of the Baskakov and Post-Widder kernels are fixed so that
the first moment equals ``t`` exactly:

================  =====================================  ======================
family            mu_n(.; t)                             second moment
================  =====================================  ======================
bernstein         Binomial(n, t) / n                      t^2 + t(1 - t)/n
szasz             Poisson(n t) / n                        t^2 + t/n
baskakov          NegBinomial(n, p = 1/(1+t)) / n         t^2 + t(1 + t)/n
post-widder       Gamma(shape n, scale t/n)               t^2 (1 + 1/n)
gauss-weierstrass Normal(t, 1/(2n))                       t^2 + 1/(2n)
================  =====================================  ======================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special, stats

from approxop.errors import DomainError, EvaluationError

__all__ = [
    "KernelFamily",
    "BERNSTEIN",
    "SZASZ_MIRAKJAN",
    "BASKAKOV",
    "POST_WIDDER",
    "GAUSS_WEIERSTRASS",
    "FAMILIES",
    "bernstein_basis",
    "bernstein_row",
    "family_moment",
    "family_sample",
    "lift1d",
    "family_check",
    "FamilyCheckReport",
]

# Above this degree binomial weights are formed in log space.
_LOG_SPACE_DEGREE = 30

_DOMAINS = {
    "bernstein": (0.0, 1.0),
    "szasz": (0.0, math.inf),
    "baskakov": (0.0, math.inf),
    "post-widder": (0.0, math.inf),
    "gauss-weierstrass": (-math.inf, math.inf),
}

_ALIASES = {
    "bernstein": "bernstein",
    "szasz": "szasz",
    "szasz-mirakjan": "szasz",
    "szaszmirakjan": "szasz",
    "baskakov": "baskakov",
    "post-widder": "post-widder",
    "postwidder": "post-widder",
    "gauss-weierstrass": "gauss-weierstrass",
    "gaussweierstrass": "gauss-weierstrass",
    "gauss": "gauss-weierstrass",
}


@dataclass(frozen=True)
class KernelFamily:
    """A named one-dimensional positive operator family.

    Use the module constants (``BERNSTEIN`` ...) or :meth:`from_name`.
    """

    kind: str

    def __post_init__(self):
        if self.kind not in _DOMAINS:
            raise DomainError(f"unknown kernel family {self.kind!r}")

    @classmethod
    def from_name(cls, name: str) -> "KernelFamily":
        key = name.strip().lower().replace("_", "-").replace(" ", "-")
        key = _ALIASES.get(key, _ALIASES.get(key.replace("-", ""), key))
        return cls(key)

    @property
    def domain(self) -> tuple[float, float]:
        """Closed domain interval ``(lo, hi)``; infinite ends are open."""
        return _DOMAINS[self.kind]

    @property
    def is_discrete(self) -> bool:
        return self.kind in ("bernstein", "szasz", "baskakov")

    def contains(self, t) -> bool:
        lo, hi = self.domain
        t = np.asarray(t, dtype=float)
        return bool(np.all(np.isfinite(t)) and np.all(t >= lo) and np.all(t <= hi))

    def check(self, t) -> None:
        if not self.contains(t):
            lo, hi = self.domain
            raise DomainError(f"{self.kind}: argument outside domain [{lo}, {hi}]: {t!r}")

    def __str__(self) -> str:
        return self.kind


BERNSTEIN = KernelFamily("bernstein")
SZASZ_MIRAKJAN = KernelFamily("szasz")
BASKAKOV = KernelFamily("baskakov")
POST_WIDDER = KernelFamily("post-widder")
GAUSS_WEIERSTRASS = KernelFamily("gauss-weierstrass")
FAMILIES = (BERNSTEIN, SZASZ_MIRAKJAN, BASKAKOV, POST_WIDDER, GAUSS_WEIERSTRASS)


def _check_degree(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"degree n must be a positive integer, got {n!r}")
    return int(n)


def bernstein_basis(n: int, j: int, t: float) -> float:
    """Bernstein basis polynomial ``C(n, j) t^j (1 - t)^(n - j)``.

    Endpoints are exact: ``psi_{n,0}(0) = psi_{n,n}(1) = 1`` and every other
    weight vanishes there.
    """
    n = _check_degree(n)
    if int(j) != j or not 0 <= j <= n:
        raise DomainError(f"basis index j={j!r} outside [0, {n}]")
    j = int(j)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t={t!r} outside [0, 1]")
    t = float(t)
    if n <= _LOG_SPACE_DEGREE:
        return math.comb(n, j) * t**j * (1.0 - t) ** (n - j)
    if t == 0.0:
        return 1.0 if j == 0 else 0.0
    if t == 1.0:
        return 1.0 if j == n else 0.0
    log_w = (
        special.gammaln(n + 1) - special.gammaln(j + 1) - special.gammaln(n - j + 1)
        + j * math.log(t) + (n - j) * math.log1p(-t)
    )
    return math.exp(log_w)


def bernstein_row(n: int, t) -> np.ndarray:
    """All weights ``psi_{n,0}(t), ..., psi_{n,n}(t)``.

    ``t`` may be an array; the result then has shape ``t.shape + (n + 1,)``.
    """
    n = _check_degree(n)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > 1.0) or not np.all(np.isfinite(t)):
        raise DomainError("t outside [0, 1]")
    j = np.arange(n + 1)
    tt = t[..., None]
    if n <= _LOG_SPACE_DEGREE:
        comb = np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)
        return comb * tt**j * (1.0 - tt) ** (n - j)
    log_comb = special.gammaln(n + 1) - special.gammaln(j + 1) - special.gammaln(n - j + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_w = log_comb + special.xlogy(j, tt) + special.xlog1py(n - j, -tt)
    return np.exp(log_w)


def family_moment(family: KernelFamily, n: int, t, order: int):
    """Exact raw moment of order 0, 1 or 2 of ``mu_n(.; t)``.

    Vectorizes over ``t``.
    """
    n = _check_degree(n)
    family.check(t)
    t = np.asarray(t, dtype=float)
    if order == 0:
        out = np.ones_like(t)
    elif order == 1:
        out = t.copy()
    elif order == 2:
        kind = family.kind
        if kind == "bernstein":
            out = t * t + (t - t * t) / n
        elif kind == "szasz":
            out = t * t + t / n
        elif kind == "baskakov":
            out = t * t + t * (1.0 + t) / n
        elif kind == "post-widder":
            out = t * t * (1.0 + 1.0 / n)
        else:
            out = t * t + 1.0 / (2 * n)
    else:
        raise DomainError(f"moment order must be 0, 1 or 2, got {order!r}")
    return float(out) if out.ndim == 0 else out


def family_sample(family: KernelFamily, n: int, t, rng: np.random.Generator, size=None):
    """Draw from ``mu_n(.; t)``.

    ``t`` broadcasts against ``size``.  Degenerate measures (zero variance)
    return ``t`` itself without consuming randomness from ``rng``.
    """
    n = _check_degree(n)
    family.check(t)
    t_arr = np.asarray(t, dtype=float)
    kind = family.kind
    if kind == "bernstein":
        if np.all((t_arr == 0.0) | (t_arr == 1.0)):
            out = np.broadcast_to(t_arr, size if size is not None else t_arr.shape).copy()
        else:
            out = rng.binomial(n, t_arr, size=size) / n
    elif kind == "szasz":
        if np.all(t_arr == 0.0):
            out = np.zeros(size if size is not None else t_arr.shape)
        else:
            out = rng.poisson(n * t_arr, size=size) / n
    elif kind == "baskakov":
        if np.all(t_arr == 0.0):
            out = np.zeros(size if size is not None else t_arr.shape)
        else:
            out = rng.negative_binomial(n, 1.0 / (1.0 + t_arr), size=size) / n
    elif kind == "post-widder":
        if np.all(t_arr == 0.0):
            out = np.zeros(size if size is not None else t_arr.shape)
        else:
            out = rng.gamma(n, t_arr / n, size=size)
    else:
        out = rng.normal(t_arr, math.sqrt(0.5 / n), size=size)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def _apply(g: Callable, u: np.ndarray) -> np.ndarray:
    """Evaluate ``g`` on an array, falling back to a loop for scalar-only callables."""
    try:
        out = np.asarray(g(u), dtype=float)
        if out.shape == u.shape:
            return out
        if out.ndim == 0:
            return np.full(u.shape, float(out))
    except (TypeError, ValueError):
        pass
    return np.array([float(g(x)) for x in u], dtype=float)


def _discrete_lift(family, n, g, t, tol, chunk=512):
    lam = n * t
    if family.kind == "szasz":
        dist = stats.poisson(lam)
        mode = math.floor(lam)

        def pmf_ratio(k):
            return lam / (k + 1)
    else:
        p = 1.0 / (1.0 + t)
        dist = stats.nbinom(n, p)
        mode = math.floor((n - 1) * (1 - p) / p) if n > 1 else 0

        def pmf_ratio(k):
            return (k + n) * (1 - p) / (k + 1)

    def weight(k):
        return 1.0 + (k / n) ** 2

    terms = []
    start = 0
    # Past max(mode, n) both the pmf ratio and the (1 + u^2) growth ratio are
    # nonincreasing, so a geometric series bounds the weighted remainder.
    while True:
        k = np.arange(start, start + chunk)
        pmf = dist.pmf(k)
        terms.append(pmf * _apply(g, k / n))
        last = start + chunk - 1
        start += chunk
        if last >= max(mode, n) + 1:
            rho = pmf_ratio(last) * weight(last + 1) / weight(last)
            nxt = dist.pmf(last + 1) * weight(last + 1)
            if rho < 1.0 and nxt / (1.0 - rho) < tol:
                break
        if start > 10_000_000:
            partial = math.fsum(np.concatenate(terms))
            raise EvaluationError("series truncation did not converge", partial=partial)
    return math.fsum(np.concatenate(terms))


def _quad(fun, a, b, tol, points=None):
    val, err, info, *rest = integrate.quad(
        fun, a, b, epsabs=tol, epsrel=1e-13, limit=500, points=points, full_output=1
    )
    if rest and err > max(tol, 1e-12 * abs(val)):
        raise EvaluationError(f"quadrature did not converge: {rest[0]}", partial=val, error_estimate=err)
    return val


def lift1d(family: KernelFamily, n: int, g: Callable, t: float, tol: float = 1e-12) -> float:
    """Apply the one-dimensional operator: ``L_{n,1}(g)(t) = E[g(X)]``.

    Bernstein is an exact finite sum.  Szasz and Baskakov sum the series until
    the (1 + u^2)-weighted remainder is below ``tol``.  Post-Widder and
    Gauss-Weierstrass use adaptive quadrature with absolute tolerance ``tol``,
    raising :class:`EvaluationError` if it does not converge.
    """
    n = _check_degree(n)
    family.check(t)
    t = float(t)
    kind = family.kind
    if kind == "bernstein":
        grid = np.arange(n + 1) / n
        return math.fsum(_apply(g, grid) * bernstein_row(n, t))
    if t == 0.0 and kind != "gauss-weierstrass":
        return float(_apply(g, np.zeros(1))[0])
    if kind in ("szasz", "baskakov"):
        return _discrete_lift(family, n, g, t, tol)
    if kind == "post-widder":
        # X = (t/n) Y with Y ~ Gamma(n, 1)
        hi = stats.gamma.isf(1e-40, n)
        log_norm = special.gammaln(n)

        def integrand(y):
            dens = math.exp(special.xlogy(n - 1, y) - y - log_norm)
            return float(_apply(g, np.array([t * y / n]))[0]) * dens

        return _quad(integrand, 0.0, hi, tol, points=[max(n - 1.0, 1e-300)])
    sigma = math.sqrt(0.5 / n)

    def integrand(z):
        return float(_apply(g, np.array([t + sigma * z]))[0]) * math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)

    return _quad(integrand, -40.0, 40.0, tol, points=[0.0])


@dataclass
class FamilyCheckReport:
    """Outcome of :func:`family_check`.

    ``coefficients[n] = (a, b, c)`` fits ``m2 - t^2 = a t^2 + b t + c`` on the
    grid.  The generalized-operator hypothesis asks for ``a = o(1)``,
    ``b = o(n^{-1/2})`` and ``c = o(1/n)``; ``slopes`` are log-log decay rates
    of ``|a|, |b|, |c|`` in ``n`` (``None`` when the coefficient vanishes).
    """

    family: KernelFamily
    n_list: list[int]
    moment_rows: list[dict] = field(default_factory=list)
    coefficients: dict[int, tuple[float, float, float]] = field(default_factory=dict)
    slopes: tuple[float | None, float | None, float | None] = (None, None, None)
    moments_ok: bool = True
    flagged: bool = False
    reasons: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        if not self.moments_ok:
            return "FAIL"
        if self.flagged:
            return "FLAGGED"
        if len(set(self.n_list)) < 2:
            return "UNDETERMINED"
        return "PASS"


_ZERO_COEF = 1e-12
_REQUIRED_SLOPE = (0.0, -0.5, -1.0)
_SLOPE_MARGIN = 1e-6


def _loglog_slope(ns, values):
    ns = np.asarray(ns, dtype=float)
    values = np.abs(np.asarray(values, dtype=float))
    if np.all(values <= _ZERO_COEF):
        return None
    if np.any(values <= _ZERO_COEF):
        # vanishing at some n but not others: treat as non-decaying
        return 0.0
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])


def family_check(family: KernelFamily, n_list: Sequence[int], t_grid: Sequence[float]) -> FamilyCheckReport:
    """Numerically verify the moment hypotheses of a family.

    Moments 0 and 1 are computed through :func:`lift1d` and must equal 1 and
    ``t`` (to 1e-12 and 1e-10).  The second-moment excess is decomposed into
    the coefficient pattern and the residual's decay rate is judged; families
    whose constant term decays only like ``1/n`` are flagged.
    """
    n_list = [_check_degree(n) for n in n_list]
    t_grid = [float(t) for t in t_grid]
    for t in t_grid:
        family.check(t)
    report = FamilyCheckReport(family=family, n_list=list(n_list))
    design = np.column_stack([np.square(t_grid), t_grid, np.ones(len(t_grid))])
    for n in n_list:
        excess = []
        for t in t_grid:
            m0 = lift1d(family, n, lambda u: np.ones_like(u), t)
            m1 = lift1d(family, n, lambda u: u, t)
            m2_num = lift1d(family, n, lambda u: u * u, t)
            m2 = family_moment(family, n, t, 2)
            ok = abs(m0 - 1.0) <= 1e-12 and abs(m1 - t) <= 1e-10
            report.moments_ok &= ok
            report.moment_rows.append(
                {"n": n, "t": t, "m0": m0, "m1": m1, "m2": m2, "m2_numeric": m2_num, "ok": ok}
            )
            excess.append(m2 - t * t)
        coef, *_ = np.linalg.lstsq(design, np.array(excess), rcond=None)
        report.coefficients[n] = tuple(float(c) for c in coef)
    if len(set(n_list)) >= 2:
        ns = sorted(set(n_list))
        slopes = []
        for idx, name in enumerate(("e2 coefficient", "e1 coefficient", "constant term")):
            s = _loglog_slope(ns, [report.coefficients[n][idx] for n in ns])
            slopes.append(s)
            if s is not None and s >= _REQUIRED_SLOPE[idx] - _SLOPE_MARGIN:
                report.flagged = True
                report.reasons.append(f"{name} decays like n^{s:.3f}, need faster than n^{_REQUIRED_SLOPE[idx]:g}")
        report.slopes = tuple(slopes)
    return report
