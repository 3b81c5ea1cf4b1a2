"""Diagonal operators on sequence spaces.

For a one-dimensional family ``mu_n(.; t)`` and an anchor sequence ``s`` the
diagonal operator is

    L_n(F)(t) = E[ F(X_1, ..., X_n, s_{n+1}, s_{n+2}, ...) ],
    X_j ~ mu_n(.; t_j) independent,

i.e. the ``n``-dimensional product operator applied to the restriction of
``F`` to the first ``n`` coordinates.  With the Bernstein family and ``s = 0``
this is the sum over the grid ``{0, 1/n, ..., 1}^n`` weighted by products of
Bernstein basis polynomials.

Four engines evaluate it:

* :func:`enumerate_eval` -- the full grid sum, Bernstein only, ``(n+1)^n`` terms;
* :func:`closed_form_eval` -- exact formulas for the registered mappings, any ``n``;
* :func:`rank_eval` -- Fubini factorization for rank-structured mappings;
* :func:`mc_eval` -- Monte Carlo over the product measure.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from approxop.errors import DomainError, FeasibilityError, StrategyError
from approxop.function_model import (
    FBAR_WEIGHTS,
    BlackBox,
    Combination,
    Coord,
    CoordSq,
    Fbar,
    LinearFunctional,
    Mapping,
    NormSq,
    One,
    PsiSq,
    RankStructured,
    Tensor,
)
from approxop.kernels1d import (
    BERNSTEIN,
    KernelFamily,
    bernstein_row,
    family_moment,
    family_sample,
    lift1d,
)
from approxop.sequence_space import SequencePoint, Space, inner, series_sum, sq_distance

__all__ = [
    "DEFAULT_BUDGET",
    "default_budget",
    "Enumerate",
    "ClosedForm",
    "RankFactor",
    "MonteCarlo",
    "OperatorConfig",
    "EvalReport",
    "index_count",
    "enumerate_eval",
    "closed_form_eval",
    "rank_eval",
    "mc_eval",
    "product_eval_k",
    "apply_operator",
    "evaluate_with_fallback",
    "operator_mapping",
]

DEFAULT_BUDGET = 10**7
# Rows per enumeration chunk (and per Monte Carlo batch).
_CHUNK_ROWS = 1 << 17
MC_BATCH = 1 << 14


def default_budget() -> int:
    """Enumeration budget: ``APPROXOP_BUDGET`` if set, else :data:`DEFAULT_BUDGET`."""
    env = os.environ.get("APPROXOP_BUDGET")
    if env:
        try:
            return int(float(env))
        except ValueError:
            raise DomainError(f"APPROXOP_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class Enumerate:
    budget: int | None = None

    @property
    def tag(self):
        return "enumerate"

    def resolved_budget(self) -> int:
        return default_budget() if self.budget is None else int(self.budget)


@dataclass(frozen=True)
class ClosedForm:
    @property
    def tag(self):
        return "closed_form"


@dataclass(frozen=True)
class RankFactor:
    tol: float = 1e-12

    @property
    def tag(self):
        return "rank_factor"


@dataclass(frozen=True)
class MonteCarlo:
    """``samples`` i.i.d. draws; batch ``i`` uses ``SeedSequence(seed).spawn(...)[i]``."""

    samples: int
    seed: int

    def __post_init__(self):
        if self.samples < 2:
            raise DomainError("Monte Carlo needs at least 2 samples")

    @property
    def tag(self):
        return "monte_carlo"


Strategy = Enumerate | ClosedForm | RankFactor | MonteCarlo


@dataclass(frozen=True)
class OperatorConfig:
    """Which operator to apply and how: family, index ``n``, anchor, engine."""

    family: KernelFamily = BERNSTEIN
    n: int = 1
    anchor: SequencePoint | None = None
    strategy: Strategy = field(default_factory=ClosedForm)

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        space = Space.for_family(self.family)
        anchor = SequencePoint.zeros(space) if self.anchor is None else self.anchor
        try:
            anchor = SequencePoint(anchor.head, anchor.tail, space)
        except DomainError as exc:
            raise DomainError(f"anchor outside the {self.family} domain: {exc}") from None
        object.__setattr__(self, "anchor", anchor)

    @property
    def space(self) -> Space:
        return Space.for_family(self.family)

    def replace(self, **changes) -> "OperatorConfig":
        fields = {"family": self.family, "n": self.n, "anchor": self.anchor, "strategy": self.strategy}
        fields.update(changes)
        return OperatorConfig(**fields)


@dataclass
class EvalReport:
    """Operator value; ``std_error`` is set only by the Monte Carlo engine."""

    value: np.ndarray
    engine: str
    count: int
    std_error: float | None = None

    @property
    def scalar(self) -> float:
        if self.value.shape != (1,):
            raise ValueError("report holds a vector value")
        return float(self.value[0])


def index_count(n: int) -> int:
    """Number of grid multi-indices, ``(n + 1)^n`` (exact integer)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return (int(n) + 1) ** int(n)


def _head(t: SequencePoint, config: OperatorConfig) -> np.ndarray:
    head = t.coords(config.n)
    if not config.family.contains(head):
        raise DomainError(f"point coordinates t_1..t_{config.n} outside the {config.family} domain")
    return head


# -- enumeration ----------------------------------------------------------------


def enumerate_eval(F: Mapping, t: SequencePoint, config: OperatorConfig) -> EvalReport:
    """Exact grid sum over all ``(n+1)^n`` multi-indices (Bernstein only).

    Rows are visited in lexicographic order in fixed chunks; each chunk is
    summed exactly rounded (``math.fsum``) and the chunk sums are combined the
    same way, so results are reproducible bit for bit.
    """
    if config.family != BERNSTEIN:
        raise StrategyError(f"enumeration requires the Bernstein family, got {config.family}")
    n = config.n
    budget = config.strategy.resolved_budget() if isinstance(config.strategy, Enumerate) else default_budget()
    count = index_count(n)
    if count > budget:
        raise FeasibilityError(
            f"enumeration at n={n} needs {count} terms, budget is {budget}; "
            "use closed_form, rank_factor or monte_carlo",
            required=count,
            alternatives=("closed_form", "rank_factor", "monte_carlo"),
        )
    psi = bernstein_row(n, _head(t, config))  # (n, n+1): psi[j, h] = psi_{n,h}(t_{j+1})
    grid = np.arange(n + 1) / n
    inner_dims = min(n, max(1, int(math.log(_CHUNK_ROWS) / math.log(n + 1))))
    outer_dims = n - inner_dims
    idx = np.indices((n + 1,) * inner_dims).reshape(inner_dims, -1).T
    inner_vals = grid[idx]
    inner_w = np.prod(psi[np.arange(outer_dims, n), idx], axis=1)
    d = F.codomain_dim
    partials: list[list[float]] = [[] for _ in range(d)]
    heads = np.empty((idx.shape[0], n))
    heads[:, outer_dims:] = inner_vals
    for outer in itertools.product(range(n + 1), repeat=outer_dims):
        w_out = 1.0
        for j, h in enumerate(outer):
            w_out *= psi[j, h]
            heads[:, j] = grid[h]
        vals = F.evaluate_batch(heads, config.anchor)
        contrib = (w_out * inner_w)[:, None] * vals
        for c in range(d):
            partials[c].append(math.fsum(contrib[:, c].tolist()))
    value = np.array([math.fsum(p) for p in partials])
    return EvalReport(value, "enumerate", count)


# -- closed forms ---------------------------------------------------------------


def _closed_scalar(F: Mapping, t_head: np.ndarray, m2: np.ndarray, config: OperatorConfig) -> float:
    n, s = config.n, config.anchor
    if isinstance(F, One):
        return 1.0
    if isinstance(F, Coord):
        return float(t_head[F.j - 1]) if F.j <= n else s.coord(F.j)
    if isinstance(F, CoordSq):
        return float(m2[F.j - 1]) if F.j <= n else s.coord(F.j) ** 2
    if isinstance(F, LinearFunctional):
        return math.fsum((F.phi.coords(n) * t_head).tolist() + [inner(F.phi, s, start=n)])
    if isinstance(F, NormSq):
        return math.fsum(m2.tolist() + [s.tail_sq(n)])
    if isinstance(F, PsiSq):
        c = F.center.coords(n)
        return math.fsum((m2 - 2.0 * c * t_head + c * c).tolist() + [sq_distance(s, F.center, start=n)])
    if isinstance(F, Fbar):
        w = FBAR_WEIGHTS.coords(n)
        return math.fsum((w * m2).tolist() + [series_sum([FBAR_WEIGHTS, s], [1, 2], start=n)])
    raise StrategyError(f"no closed form for {type(F).__name__}")


def _closed_vector(F: Mapping, t_head, m2, config) -> np.ndarray:
    if isinstance(F, Tensor):
        return _closed_scalar(F.g, t_head, m2, config) * np.asarray(F.v)
    if isinstance(F, Combination):
        return sum(a * _closed_vector(G, t_head, m2, config) for a, G in F.terms)
    return np.array([_closed_scalar(F, t_head, m2, config)])


def closed_form_eval(F: Mapping, t: SequencePoint, config: OperatorConfig) -> EvalReport:
    """Exact image of a registered mapping, for any family, ``n`` and anchor.

    Uses only the first two moments of the family: the images of the
    constant, the coordinates, their squares, linear functionals, the squared
    norm, ``||. - c||^2`` and the weighted square sum ``sum 2^{-j} t_j^2``.
    """
    if not F.registered:
        raise StrategyError(f"no closed form for {type(F).__name__}")
    t_head = _head(t, config)
    m2 = np.asarray(family_moment(config.family, config.n, t_head, 2), dtype=float).reshape(-1)
    return EvalReport(_closed_vector(F, t_head, m2, config), "closed_form", config.n)


# -- rank factorization ---------------------------------------------------------


def _rank_value(F, t_head, config, tol, counter) -> np.ndarray:
    if isinstance(F, Tensor):
        return _rank_value(F.g, t_head, config, tol, counter)[0] * np.asarray(F.v)
    if isinstance(F, Combination):
        return sum(a * _rank_value(G, t_head, config, tol, counter) for a, G in F.terms)
    if not isinstance(F, RankStructured):
        raise StrategyError(f"rank factorization needs a rank-structured mapping, got {type(F).__name__}")
    n, s = config.n, config.anchor
    total = np.zeros(F.codomain_dim)
    for term in F.terms:
        prod = 1.0
        for j, g in term.factors:
            if j <= n:
                prod *= lift1d(config.family, n, g, float(t_head[j - 1]), tol)
                counter[0] += 1
            else:
                prod *= float(np.asarray(g(np.array([s.coord(j)]))).ravel()[0])
        total = total + prod * np.asarray(term.coef)
    return total


def rank_eval(F: Mapping, t: SequencePoint, config: OperatorConfig) -> EvalReport:
    """Evaluate a rank-structured mapping term by term via one-dimensional lifts.

    Each separable term factorizes under the product measure, so the cost is
    one :func:`lift1d` call per factor instead of a grid of ``(n+1)^n`` points.
    """
    tol = config.strategy.tol if isinstance(config.strategy, RankFactor) else 1e-12
    counter = [0]
    value = _rank_value(F, _head(t, config), config, tol, counter)
    return EvalReport(np.asarray(value, dtype=float), "rank_factor", counter[0])


# -- Monte Carlo ----------------------------------------------------------------


def _mc_values(F: Mapping, t_head, config: OperatorConfig, samples: int, seed: int) -> np.ndarray:
    n_batches = -(-samples // MC_BATCH)
    children = np.random.SeedSequence(seed).spawn(n_batches)
    out = []
    for i, child in enumerate(children):
        size = min(MC_BATCH, samples - i * MC_BATCH)
        rng = np.random.default_rng(child)
        draws = family_sample(config.family, config.n, t_head, rng, size=(size, config.n))
        out.append(F.evaluate_batch(np.asarray(draws).reshape(size, config.n), config.anchor))
    return np.concatenate(out, axis=0)


def mc_eval(F: Mapping, t: SequencePoint, config: OperatorConfig) -> EvalReport:
    """Monte Carlo estimate with CLT standard error (max over components)."""
    strategy = config.strategy
    if not isinstance(strategy, MonteCarlo):
        raise StrategyError("mc_eval needs a MonteCarlo strategy")
    vals = _mc_values(F, _head(t, config), config, strategy.samples, strategy.seed)
    mean = vals.mean(axis=0)
    std = vals.std(axis=0, ddof=1)
    return EvalReport(mean, "monte_carlo", strategy.samples, float(np.max(std)) / math.sqrt(strategy.samples))


# -- finite-dimensional product operator ------------------------------------------


def product_eval_k(
    f: Callable[[np.ndarray], np.ndarray],
    t: Sequence[float],
    family: KernelFamily,
    n: int,
    strategy: Strategy | None = None,
):
    """The product operator ``L_{n,k}(f)(t)`` on ``I^k``.

    ``f`` maps an ``(N, k)`` array of nodes to ``(N,)`` or ``(N, d)`` values.
    Bernstein is enumerated by contracting the tensor of grid values one
    axis at a time; ``k = 1`` for other families uses :func:`lift1d`; the
    remaining cases require a :class:`MonteCarlo` strategy.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    k = t.shape[0]
    family.check(t)
    if isinstance(strategy, MonteCarlo):
        n_batches = -(-strategy.samples // MC_BATCH)
        vals = []
        for i, child in enumerate(np.random.SeedSequence(strategy.seed).spawn(n_batches)):
            size = min(MC_BATCH, strategy.samples - i * MC_BATCH)
            draws = family_sample(family, n, t, np.random.default_rng(child), size=(size, k))
            vals.append(np.asarray(f(np.asarray(draws).reshape(size, k)), dtype=float))
        mean = np.concatenate(vals, axis=0).mean(axis=0)
        return float(mean) if np.ndim(mean) == 0 else mean
    if family == BERNSTEIN:
        budget = strategy.resolved_budget() if isinstance(strategy, Enumerate) else default_budget()
        if (n + 1) ** k > budget:
            raise FeasibilityError(f"product grid needs {(n + 1) ** k} terms, budget is {budget}",
                                   required=(n + 1) ** k, alternatives=("monte_carlo",))
        grid = np.arange(n + 1) / n
        nodes = grid[np.indices((n + 1,) * k).reshape(k, -1).T]
        vals = np.asarray(f(nodes), dtype=float)
        tail_shape = vals.shape[1:]
        tensor = vals.reshape((n + 1,) * k + tail_shape)
        psi = bernstein_row(n, t)
        for axis in range(k):
            tensor = np.tensordot(psi[axis], tensor, axes=(0, 0))
        return float(tensor) if np.ndim(tensor) == 0 else tensor
    if k == 1:
        return lift1d(family, n, lambda u: np.asarray(f(u[:, None]), dtype=float).reshape(-1), float(t[0]))
    raise StrategyError(f"product operator for {family} in dimension {k} needs a MonteCarlo strategy")


# -- dispatch -------------------------------------------------------------------


def apply_operator(F: Mapping, t: SequencePoint, config: OperatorConfig) -> EvalReport:
    """Evaluate ``L_n(F)(t)`` with the engine named by ``config.strategy``."""
    strategy = config.strategy
    if isinstance(strategy, Enumerate):
        return enumerate_eval(F, t, config)
    if isinstance(strategy, ClosedForm):
        return closed_form_eval(F, t, config)
    if isinstance(strategy, RankFactor):
        return rank_eval(F, t, config)
    if isinstance(strategy, MonteCarlo):
        return mc_eval(F, t, config)
    raise StrategyError(f"unknown strategy {strategy!r}")


def evaluate_with_fallback(
    F: Mapping,
    t: SequencePoint,
    config: OperatorConfig,
    monte_carlo: MonteCarlo | None = None,
    budget: int | None = None,
) -> EvalReport:
    """Try closed form, rank factorization, enumeration, then Monte Carlo.

    Monte Carlo is only attempted when ``monte_carlo`` is given; otherwise
    the last feasibility or strategy error is re-raised.
    """
    chain: list[Strategy] = [ClosedForm(), RankFactor(), Enumerate(budget)]
    if monte_carlo is not None:
        chain.append(monte_carlo)
    last: Exception | None = None
    for strategy in chain:
        try:
            return apply_operator(F, t, config.replace(strategy=strategy))
        except (StrategyError, FeasibilityError) as exc:
            last = exc
    assert last is not None
    raise last


def operator_mapping(F: Mapping, config: OperatorConfig, engine: Callable | None = None) -> BlackBox:
    """``L_n(F)`` as a mapping of the first ``n`` coordinates."""
    space = config.space
    run = engine or apply_operator

    def fn(x):
        return run(F, SequencePoint(tuple(x), space=space), config).value

    return BlackBox(fn, m_eff=config.n, dim=F.codomain_dim, thread_safe=getattr(F, "thread_safe", True))
