"""Mappings ``F`` from sequence points into ``R^d``.

Every mapping evaluates in batches: a batch is a 2-D array of head rows plus
an *anchor* point, and row ``i`` stands for ``anchor.splice(heads[i])``.
This is exactly the shape the diagonal operators need (grid values in the
first ``n`` slots, anchor coordinates beyond) and lets pointwise evaluation
reuse the same code: ``F(t)`` is the batch ``[t.head]`` anchored at ``t``.

Registered forms (:class:`One`, :class:`Coord`, :class:`CoordSq`,
:class:`LinearFunctional`, :class:`NormSq`, :class:`PsiSq`, :class:`Fbar`)
know their moduli of continuity and have closed-form operator images.
:class:`RankStructured` mappings are sums of products of one-dimensional
factors.  :class:`BlackBox` wraps an arbitrary callable of finitely many
coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping as TMapping, Sequence

import numpy as np
from scipy import optimize

from approxop.errors import DomainError
from approxop.sequence_space import (
    SequencePoint,
    Space,
    inner,
    series_sum,
    sq_distance,
)

__all__ = [
    "Mapping",
    "One",
    "Coord",
    "CoordSq",
    "LinearFunctional",
    "NormSq",
    "PsiSq",
    "Fbar",
    "Fn1D",
    "RankTerm",
    "RankStructured",
    "BlackBox",
    "Tensor",
    "Combination",
    "NormOf",
    "ModulusValue",
    "evaluate",
    "modulus",
    "empirical_modulus",
    "convexity_probe",
    "ConvexityReport",
    "mapping_from_dict",
    "FBAR_WEIGHTS",
]

# Coefficients 2^{-j} of the counterexample mapping.
FBAR_WEIGHTS = SequencePoint.geometric((), 0.5, 0.5, Space.REAL)


class Mapping:
    """Base class.  Subclasses implement :meth:`_batch` returning ``(N,)`` or ``(N, d)``."""

    codomain_dim: int = 1
    #: declared Lipschitz constant under the l^2 metric, if known
    lipschitz: float | None = None
    #: registered forms have closed-form operator images
    registered: bool = False

    def _batch(self, heads: np.ndarray, anchor: SequencePoint) -> np.ndarray:
        raise NotImplementedError

    def evaluate_batch(self, heads, anchor: SequencePoint) -> np.ndarray:
        """Values at ``anchor.splice(row)`` for each row; shape ``(N, d)``."""
        heads = np.atleast_2d(np.asarray(heads, dtype=float))
        out = np.asarray(self._batch(heads, anchor), dtype=float)
        if out.ndim == 1:
            out = out[:, None]
        return out

    def evaluate(self, t: SequencePoint) -> np.ndarray:
        return self.evaluate_batch(np.asarray(t.head, dtype=float)[None, :], t)[0]

    def __call__(self, t: SequencePoint) -> np.ndarray:
        return self.evaluate(t)

    def support(self) -> int | None:
        """Largest coordinate index the mapping depends on (``None``: infinitely many)."""
        return None

    # linear structure
    def __add__(self, other: "Mapping") -> "Combination":
        return Combination(((1.0, self), (1.0, other)))

    def __sub__(self, other: "Mapping") -> "Combination":
        return Combination(((1.0, self), (-1.0, other)))

    def __rmul__(self, a: float) -> "Combination":
        return Combination(((float(a), self),))

    def tensor(self, v) -> "Tensor":
        return Tensor(self, v)

    def to_dict(self) -> dict:
        raise DomainError(f"{type(self).__name__} is not serializable")


def _col(heads: np.ndarray, anchor: SequencePoint, j: int) -> np.ndarray:
    k = heads.shape[1]
    if j <= k:
        return heads[:, j - 1]
    return np.full(heads.shape[0], anchor.coord(j))


def _check_index(j) -> int:
    if isinstance(j, bool) or int(j) != j or j < 1:
        raise DomainError(f"coordinate index must be a positive integer, got {j!r}")
    return int(j)


@dataclass(frozen=True)
class One(Mapping):
    registered = True

    def _batch(self, heads, anchor):
        return np.ones(heads.shape[0])

    def support(self):
        return 0

    def to_dict(self):
        return {"kind": "one"}


@dataclass(frozen=True)
class Coord(Mapping):
    """Coordinate projection ``t -> t_j``."""

    j: int
    registered = True

    def __post_init__(self):
        object.__setattr__(self, "j", _check_index(self.j))

    @property
    def lipschitz(self):
        return 1.0

    def _batch(self, heads, anchor):
        return _col(heads, anchor, self.j)

    def support(self):
        return self.j

    def to_dict(self):
        return {"kind": "coord", "j": self.j}


@dataclass(frozen=True)
class CoordSq(Mapping):
    """Squared coordinate ``t -> t_j^2``."""

    j: int
    registered = True

    def __post_init__(self):
        object.__setattr__(self, "j", _check_index(self.j))

    def _batch(self, heads, anchor):
        return _col(heads, anchor, self.j) ** 2

    def support(self):
        return self.j

    def to_dict(self):
        return {"kind": "coord_sq", "j": self.j}


@dataclass(frozen=True)
class LinearFunctional(Mapping):
    """``t -> sum_j phi_j t_j`` for a square-summable coefficient sequence."""

    phi: SequencePoint
    registered = True

    def __post_init__(self):
        if self.phi.space is not Space.REAL:
            object.__setattr__(self, "phi", self.phi.with_space(Space.REAL))

    @property
    def lipschitz(self):
        return self.phi.norm()

    def _batch(self, heads, anchor):
        k = heads.shape[1]
        return heads @ self.phi.coords(k) + inner(self.phi, anchor, start=k)

    def to_dict(self):
        return {"kind": "linear", "phi": self.phi.to_dict()}


@dataclass(frozen=True)
class NormSq(Mapping):
    """``t -> ||t||^2``."""

    registered = True

    def _batch(self, heads, anchor):
        return np.sum(heads**2, axis=1) + anchor.tail_sq(heads.shape[1])

    def to_dict(self):
        return {"kind": "norm_sq"}


@dataclass(frozen=True)
class PsiSq(Mapping):
    """``u -> ||u - center||^2``."""

    center: SequencePoint
    registered = True

    def _batch(self, heads, anchor):
        k = heads.shape[1]
        return np.sum((heads - self.center.coords(k)) ** 2, axis=1) + sq_distance(anchor, self.center, start=k)

    def to_dict(self):
        return {"kind": "psi_sq", "center": self.center.to_dict()}


@dataclass(frozen=True)
class Fbar(Mapping):
    """Convex counterexample ``t -> sum_j 2^{-j} t_j^2``."""

    registered = True

    def _batch(self, heads, anchor):
        k = heads.shape[1]
        return heads**2 @ FBAR_WEIGHTS.coords(k) + series_sum([FBAR_WEIGHTS, anchor], [1, 2], start=k)

    def to_dict(self):
        return {"kind": "fbar"}


# -- rank-structured mappings ---------------------------------------------------

_FN1D = {
    "const": lambda u, c=1.0: np.full_like(u, c),
    "power": lambda u, p=1.0: u**p,
    "id": lambda u: u.copy(),
    "sq": lambda u: u * u,
    "abs": lambda u, shift=0.0: np.abs(u - shift),
    "affine": lambda u, a=0.0, b=1.0: a + b * u,
    "exp": lambda u, scale=1.0: np.exp(scale * u),
}


@dataclass(frozen=True)
class Fn1D:
    """A serializable one-dimensional function from a small registry."""

    name: str
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        if self.name not in _FN1D:
            raise DomainError(f"unknown 1-D function {self.name!r}; known: {sorted(_FN1D)}")
        if isinstance(self.params, dict):
            object.__setattr__(self, "params", tuple(sorted(self.params.items())))

    def __call__(self, u):
        return _FN1D[self.name](np.asarray(u, dtype=float), **dict(self.params))

    def to_dict(self):
        return {"fn": self.name, **dict(self.params)}

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        name = data.pop("fn")
        return cls(name, tuple(sorted((k, float(v)) for k, v in data.items())))


@dataclass(frozen=True)
class RankTerm:
    """``coef * prod_{j in factors} factors[j](u_j)``; unlisted coordinates contribute 1."""

    coef: tuple[float, ...]
    factors: tuple[tuple[int, Callable], ...]

    def __post_init__(self):
        coef = tuple(float(x) for x in np.atleast_1d(np.asarray(self.coef, dtype=float)))
        object.__setattr__(self, "coef", coef)
        factors = self.factors.items() if isinstance(self.factors, TMapping) else self.factors
        object.__setattr__(self, "factors", tuple(sorted((_check_index(j), g) for j, g in factors)))


@dataclass(frozen=True)
class RankStructured(Mapping):
    """Finite sum of separable terms ``sum_r v_r prod_j g_{r,j}(u_j)``."""

    terms: tuple[RankTerm, ...]
    lipschitz: float | None = None

    def __post_init__(self):
        terms = tuple(t if isinstance(t, RankTerm) else RankTerm(*t) for t in self.terms)
        if not terms:
            raise DomainError("rank-structured mapping needs at least one term")
        dims = {len(t.coef) for t in terms}
        if len(dims) != 1:
            raise DomainError("all rank terms must share the codomain dimension")
        object.__setattr__(self, "terms", terms)

    @property
    def codomain_dim(self):
        return len(self.terms[0].coef)

    def _batch(self, heads, anchor):
        out = np.zeros((heads.shape[0], self.codomain_dim))
        for term in self.terms:
            prod = np.ones(heads.shape[0])
            for j, g in term.factors:
                prod = prod * np.asarray(g(_col(heads, anchor, j)), dtype=float)
            out += prod[:, None] * np.asarray(term.coef)
        return out

    def support(self):
        return max((j for t in self.terms for j, _ in t.factors), default=0)

    def to_dict(self):
        terms = []
        for t in self.terms:
            if not all(isinstance(g, Fn1D) for _, g in t.factors):
                raise DomainError("rank terms with raw callables are not serializable")
            terms.append({"coef": list(t.coef), "factors": {str(j): g.to_dict() for j, g in t.factors}})
        d = {"kind": "rank", "terms": terms}
        if self.lipschitz is not None:
            d["lipschitz"] = self.lipschitz
        return d


@dataclass(frozen=True, eq=False)
class BlackBox(Mapping):
    """Arbitrary mapping of the first ``m_eff`` coordinates.

    ``fn`` receives a length-``m_eff`` array (or an ``(N, m_eff)`` array when
    ``vectorized``) and returns a scalar or a length-``dim`` vector per point.
    """

    fn: Callable
    m_eff: int
    dim: int = 1
    vectorized: bool = False
    thread_safe: bool = True
    lipschitz: float | None = None

    @property
    def codomain_dim(self):
        return self.dim

    def support(self):
        return self.m_eff

    def _batch(self, heads, anchor):
        k = heads.shape[1]
        m = self.m_eff
        if k >= m:
            X = heads[:, :m]
        else:
            X = np.empty((heads.shape[0], m))
            X[:, :k] = heads
            X[:, k:] = anchor.coords(m)[k:]
        if self.vectorized:
            out = np.asarray(self.fn(X), dtype=float)
        else:
            out = np.array([np.asarray(self.fn(x), dtype=float) for x in X])
        return out.reshape(heads.shape[0], self.dim)


@dataclass(frozen=True)
class Tensor(Mapping):
    """``g (x) v``: scalar mapping times a fixed vector."""

    g: Mapping
    v: tuple[float, ...]

    def __post_init__(self):
        if self.g.codomain_dim != 1:
            raise DomainError("tensor needs a scalar mapping")
        object.__setattr__(self, "v", tuple(float(x) for x in np.atleast_1d(self.v)))

    @property
    def codomain_dim(self):
        return len(self.v)

    @property
    def registered(self):
        return self.g.registered

    @property
    def lipschitz(self):
        L = self.g.lipschitz
        return None if L is None else L * float(np.linalg.norm(self.v))

    def _batch(self, heads, anchor):
        return self.g.evaluate_batch(heads, anchor) * np.asarray(self.v)

    def support(self):
        return self.g.support()

    def to_dict(self):
        return {"kind": "tensor", "g": self.g.to_dict(), "v": list(self.v)}


@dataclass(frozen=True)
class Combination(Mapping):
    """Finite linear combination ``sum_i a_i F_i``."""

    terms: tuple[tuple[float, Mapping], ...]

    def __post_init__(self):
        flat = []
        for a, F in self.terms:
            if isinstance(F, Combination):
                flat.extend((a * b, G) for b, G in F.terms)
            else:
                flat.append((float(a), F))
        if not flat:
            raise DomainError("empty combination")
        if len({F.codomain_dim for _, F in flat}) != 1:
            raise DomainError("combined mappings must share the codomain dimension")
        object.__setattr__(self, "terms", tuple(flat))

    @property
    def codomain_dim(self):
        return self.terms[0][1].codomain_dim

    @property
    def registered(self):
        return all(F.registered for _, F in self.terms)

    @property
    def lipschitz(self):
        Ls = [F.lipschitz for _, F in self.terms]
        if any(L is None for L in Ls):
            return None
        return sum(abs(a) * L for (a, _), L in zip(self.terms, Ls))

    def _batch(self, heads, anchor):
        return sum(a * F.evaluate_batch(heads, anchor) for a, F in self.terms)

    def support(self):
        s = [F.support() for _, F in self.terms]
        return None if any(x is None for x in s) else max(s)

    def to_dict(self):
        return {"kind": "sum", "terms": [[a, F.to_dict()] for a, F in self.terms]}


@dataclass(frozen=True)
class NormOf(Mapping):
    """Scalar mapping ``t -> ||F(t)||`` (Euclidean)."""

    F: Mapping

    @property
    def lipschitz(self):
        return self.F.lipschitz

    def _batch(self, heads, anchor):
        return np.linalg.norm(self.F.evaluate_batch(heads, anchor), axis=1)

    def support(self):
        return self.F.support()


def mapping_from_dict(data: dict) -> Mapping:
    """Inverse of ``Mapping.to_dict`` for the serializable forms."""
    if not isinstance(data, dict) or "kind" not in data:
        raise DomainError(f"mapping descriptor needs a 'kind': {data!r}")
    kind = data["kind"]
    if kind == "one":
        return One()
    if kind == "coord":
        return Coord(data["j"])
    if kind == "coord_sq":
        return CoordSq(data["j"])
    if kind == "linear":
        return LinearFunctional(SequencePoint.from_dict(data["phi"], Space.REAL))
    if kind == "norm_sq":
        return NormSq()
    if kind == "psi_sq":
        return PsiSq(SequencePoint.from_dict(data["center"]))
    if kind == "fbar":
        return Fbar()
    if kind == "rank":
        terms = []
        for t in data["terms"]:
            factors = {int(j): Fn1D.from_dict(g) for j, g in t.get("factors", {}).items()}
            terms.append(RankTerm(t["coef"], factors))
        return RankStructured(tuple(terms), lipschitz=data.get("lipschitz"))
    if kind == "tensor":
        return Tensor(mapping_from_dict(data["g"]), data["v"])
    if kind == "sum":
        return Combination(tuple((float(a), mapping_from_dict(F)) for a, F in data["terms"]))
    raise DomainError(f"unknown mapping kind {kind!r}")


def evaluate(F: Mapping, t: SequencePoint) -> np.ndarray:
    """``F(t)`` as a length-``d`` array."""
    return F.evaluate(t)


# -- moduli of continuity ------------------------------------------------------


@dataclass(frozen=True)
class ModulusValue:
    """A value of ``omega(F, delta)`` with its provenance.

    ``provenance`` is ``"exact"``, ``"upper"`` (a certified upper bound),
    ``"empirical-lower"`` or ``"unknown"`` (``value`` is ``None``).
    """

    value: float | None
    provenance: str

    @property
    def certifying(self) -> bool:
        return self.value is not None and self.provenance in ("exact", "upper")


_UNKNOWN = ModulusValue(None, "unknown")


def _fbar_modulus_gamma(delta: float) -> float:
    # sup sum_j w_j d_j (2 - d_j) over ||d|| <= delta, 0 <= d_j <= 1, attained
    # (in the limit) with u_j = 1, t_j = 1 - d_j.  KKT: d_j = w_j / (lam + w_j).
    w = 0.5 ** np.arange(1, 1100)

    def excess(log_lam):
        d = w / (math.exp(log_lam) + w)
        return math.fsum((d * d).tolist()) - delta * delta

    lo, hi = math.log(1e-300), math.log(1e300)
    if excess(lo) <= 0.0:
        return 1.0
    log_lam = optimize.brentq(excess, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    d = w / (math.exp(log_lam) + w)
    return min(1.0, math.fsum((w * d * (2.0 - d)).tolist()))


def _linear_modulus_box(phi: SequencePoint, delta: float) -> float:
    # sup <|phi|, d> over 0 <= d_j <= 1, ||d|| <= delta: d_j = min(1, |phi_j| / lam)
    head = np.abs(np.asarray(phi.head, dtype=float))
    c = abs(getattr(phi.tail, "c", 0.0))
    r = abs(getattr(phi.tail, "r", 0.0))
    if r == 0.0:
        head, c = np.append(head, c), 0.0

    def parts(lam):
        """(coordinates at 1, sum over them, sum of the remaining squares)."""
        ones = head >= lam
        count, total, rest = int(ones.sum()), math.fsum(head[ones].tolist()), math.fsum((head[~ones] ** 2).tolist())
        if c > 0.0:
            K = 0 if lam > c else int(math.floor(math.log(lam / c) / math.log(r))) + 1
            while K > 0 and c * r ** (K - 1) < lam:
                K -= 1
            while c * r**K >= lam:
                K += 1
            count += K
            total += c * (1.0 - r**K) / (1.0 - r)
            rest += c * c * r ** (2 * K) / (1.0 - r * r)
        return count, total, rest

    if c == 0.0 and delta * delta >= np.count_nonzero(head):
        return float(head.sum())

    def excess(log_lam):
        count, _, rest = parts(math.exp(log_lam))
        return count + rest * math.exp(-2.0 * log_lam) - delta * delta

    hi = math.log(max(float(head.max(initial=0.0)), c))
    lo = hi
    while excess(lo) < 0.0:
        lo -= 1.0
    log_lam = optimize.brentq(excess, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    lam = math.exp(log_lam)
    _, total, rest = parts(lam)
    return total + rest / lam


def modulus(F: Mapping, delta: float, space: Space = Space.GAMMA, radius: float | None = None) -> ModulusValue:
    """Modulus of continuity ``omega(F, delta)`` on ``space``.

    Unbounded quadratic forms (``NormSq``, ``PsiSq``) have no finite modulus on
    the unbounded set Gamma; pass ``radius`` (a bound on ``||t||``, or on
    ``||t - center||``) to get the upper bound ``delta (2 radius + delta)``.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    space = Space(space)
    bounded_box = space in (Space.GAMMA, Space.CUBE)
    if isinstance(F, One):
        return ModulusValue(0.0, "exact")
    if isinstance(F, Coord):
        return ModulusValue(min(delta, 1.0) if bounded_box else delta, "exact")
    if isinstance(F, CoordSq):
        if bounded_box:
            return ModulusValue(1.0 if delta >= 1.0 else 2.0 * delta - delta * delta, "exact")
        if radius is not None:
            return ModulusValue(delta * (2.0 * radius + delta), "upper")
        return _UNKNOWN
    if isinstance(F, LinearFunctional):
        norm = F.phi.norm()
        value = delta * norm
        if bounded_box:
            # the extremal direction d = delta phi/||phi|| fits in the box iff |d_j| <= 1
            max_abs = max([abs(x) for x in F.phi.head] + [abs(getattr(F.phi.tail, "c", 0.0))])
            if delta * max_abs > norm:
                value = _linear_modulus_box(F.phi, delta)
        return ModulusValue(value, "exact")
    if isinstance(F, Fbar):
        if bounded_box:
            return ModulusValue(_fbar_modulus_gamma(delta), "exact")
        if radius is not None:
            return ModulusValue(0.5 * delta * (2.0 * radius + delta), "upper")
        return _UNKNOWN
    if isinstance(F, (NormSq, PsiSq)):
        if radius is not None:
            return ModulusValue(delta * (2.0 * radius + delta), "upper")
        return _UNKNOWN
    if isinstance(F, Tensor):
        inner_mod = modulus(F.g, delta, space, radius)
        if inner_mod.value is None:
            return inner_mod
        return ModulusValue(inner_mod.value * float(np.linalg.norm(F.v)), inner_mod.provenance)
    if isinstance(F, Combination):
        parts = [(a, modulus(G, delta, space, radius)) for a, G in F.terms]
        if any(p.value is None for _, p in parts):
            return _UNKNOWN
        if len(parts) == 1:
            a, p = parts[0]
            return ModulusValue(abs(a) * p.value, p.provenance)
        return ModulusValue(sum(abs(a) * p.value for a, p in parts), "upper")
    if F.lipschitz is not None:
        return ModulusValue(delta * F.lipschitz, "upper")
    return _UNKNOWN


def _box(space: Space) -> tuple[float, float]:
    lo, hi = space.interval
    return (max(lo, -1.0), min(hi, 1.0))


def empirical_modulus(
    F: Mapping,
    delta: float,
    sample_count: int,
    rng: np.random.Generator,
    space: Space = Space.GAMMA,
    dim: int | None = None,
) -> ModulusValue:
    """Lower bound of ``omega(F, delta)`` from random pairs at distance ``<= delta``.

    Pairs live in the first ``dim`` coordinates (default: the mapping's
    support, or 16 when it depends on infinitely many coordinates).
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    space = Space(space)
    if dim is None:
        s = F.support()
        dim = 16 if s is None else max(s, 1)
    lo, hi = _box(space)
    t = rng.uniform(lo, hi, size=(sample_count, dim))
    direction = rng.standard_normal((sample_count, dim))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    # clipping onto the box is nonexpansive, so ||u - t|| <= delta still holds;
    # the shrink factor absorbs rounding in t + step
    u = np.clip(t + delta * (1.0 - 1e-12) * direction, space.interval[0], space.interval[1])
    anchor = SequencePoint.zeros(space)
    diff = F.evaluate_batch(u, anchor) - F.evaluate_batch(t, anchor)
    return ModulusValue(float(np.max(np.linalg.norm(diff, axis=1))), "empirical-lower")


# -- convexity -------------------------------------------------------------------


@dataclass
class ConvexityReport:
    """Result of :func:`convexity_probe`; ``violations`` hold witness dicts."""

    checked: int = 0
    violations: list[dict] = field(default_factory=list)
    max_excess: float = -math.inf

    @property
    def ok(self) -> bool:
        return not self.violations


def convexity_probe(
    f,
    axis: int,
    triples: int,
    rng: np.random.Generator,
    dim: int | None = None,
    space: Space = Space.GAMMA,
    tol: float = 1e-10,
) -> ConvexityReport:
    """Probe convexity of a scalar mapping along coordinate ``axis``.

    ``f`` is a scalar :class:`Mapping` or any callable taking a
    :class:`SequencePoint`.  Besides ``triples`` random ``(t, a, b, lam)``
    draws, the midpoint of the two box endpoints is always tested.
    """
    axis = _check_index(axis)
    space = Space(space)
    if dim is None:
        s = f.support() if isinstance(f, Mapping) else None
        dim = max(axis, s if s else axis)
    dim = max(dim, axis)
    lo, hi = _box(space)
    base = rng.uniform(lo, hi, size=(triples + 1, dim))
    a = rng.uniform(lo, hi, size=triples + 1)
    b = rng.uniform(lo, hi, size=triples + 1)
    lam = rng.uniform(0.0, 1.0, size=triples + 1)
    a[0], b[0], lam[0] = lo, hi, 0.5
    mid = lam * a + (1.0 - lam) * b

    def rows(x):
        out = base.copy()
        out[:, axis - 1] = x
        return out

    anchor = SequencePoint.zeros(space)
    if isinstance(f, Mapping):
        if f.codomain_dim != 1:
            raise DomainError("convexity is defined for scalar mappings")
        fa, fb, fm = (f.evaluate_batch(rows(x), anchor)[:, 0] for x in (a, b, mid))
    else:
        def ev(x):
            return np.array([float(np.asarray(f(anchor.splice(r))).ravel()[0]) for r in rows(x)])
        fa, fb, fm = ev(a), ev(b), ev(mid)
    excess = fm - (lam * fa + (1.0 - lam) * fb)
    report = ConvexityReport(checked=len(excess), max_excess=float(np.max(excess)))
    for i in np.flatnonzero(excess > tol):
        report.violations.append(
            {"t": base[i].tolist(), "axis": axis, "a": float(a[i]), "b": float(b[i]),
             "lam": float(lam[i]), "excess": float(excess[i])}
        )
    return report
