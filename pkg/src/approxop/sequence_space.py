"""Points of the Hilbert cube, of the cube ``[0,1]^N`` and of ``l^2``.

A :class:`SequencePoint` stores finitely many head coordinates ``t_1..t_m``
plus an analytic tail.  With a geometric tail the coordinates past the head
are ``t_{m+k} = c * r**(k-1)`` for ``k >= 1`` (so ``c`` is the first tail
coordinate), which makes every series used by the operators summable in
closed form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from approxop.errors import DomainError

__all__ = [
    "Space",
    "ZeroTail",
    "GeometricTail",
    "SequencePoint",
    "series_sum",
    "inner",
    "sq_distance",
]


class Space(str, Enum):
    """Ambient set a point is validated against."""

    GAMMA = "gamma"  # {t in l^2 : 0 <= t_j <= 1}
    CUBE = "cube"  # [0, 1]^N with the product topology
    HALFLINE = "halfline"  # {t in l^2 : t_j >= 0}
    REAL = "real"  # l^2

    @property
    def interval(self) -> tuple[float, float]:
        if self in (Space.GAMMA, Space.CUBE):
            return (0.0, 1.0)
        if self is Space.HALFLINE:
            return (0.0, math.inf)
        return (-math.inf, math.inf)

    @classmethod
    def for_family(cls, family) -> "Space":
        lo, hi = family.domain
        if hi == 1.0:
            return cls.GAMMA
        return cls.HALFLINE if lo == 0.0 else cls.REAL


@dataclass(frozen=True)
class ZeroTail:
    def coord(self, k: int) -> float:
        return 0.0


@dataclass(frozen=True)
class GeometricTail:
    """Tail ``c, c r, c r^2, ...`` with ``|r| < 1``."""

    c: float
    r: float

    def __post_init__(self):
        if not (math.isfinite(self.c) and math.isfinite(self.r)):
            raise DomainError("geometric tail parameters must be finite")
        if not abs(self.r) < 1.0:
            raise DomainError(f"geometric tail ratio must satisfy |r| < 1, got {self.r}")

    def coord(self, k: int) -> float:
        """Value at offset ``k >= 1`` past the head."""
        return self.c * self.r ** (k - 1)


Tail = ZeroTail | GeometricTail


@dataclass(frozen=True)
class SequencePoint:
    """An immutable sequence ``(t_j)_{j >= 1}`` with head and analytic tail."""

    head: tuple[float, ...] = ()
    tail: Tail = field(default_factory=ZeroTail)
    space: Space = Space.GAMMA

    def __post_init__(self):
        head = tuple(float(x) for x in np.asarray(self.head, dtype=float).ravel())
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "space", Space(self.space))
        if not all(math.isfinite(x) for x in head):
            raise DomainError("head coordinates must be finite")
        lo, hi = self.space.interval
        bad = [x for x in head if not lo <= x <= hi]
        if bad:
            raise DomainError(f"coordinates {bad[:3]} outside [{lo}, {hi}] for space {self.space.value}")
        if isinstance(self.tail, GeometricTail):
            c, r = self.tail.c, self.tail.r
            # the tail takes values c r^k (k >= 0) and accumulates at 0
            extremes = (c, c * r, 0.0)
            if min(extremes) < lo or max(extremes) > hi:
                raise DomainError(f"geometric tail leaves [{lo}, {hi}] for space {self.space.value}")

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, space: Space = Space.GAMMA) -> "SequencePoint":
        return cls((), ZeroTail(), space)

    @classmethod
    def from_head(cls, head: Iterable[float], space: Space = Space.GAMMA) -> "SequencePoint":
        return cls(tuple(head), ZeroTail(), space)

    @classmethod
    def geometric(cls, head: Iterable[float], c: float, r: float, space: Space = Space.GAMMA) -> "SequencePoint":
        return cls(tuple(head), GeometricTail(c, r), space)

    # -- coordinates ----------------------------------------------------------
    @property
    def m(self) -> int:
        """Head length."""
        return len(self.head)

    def coord(self, j: int) -> float:
        """Coordinate ``t_j`` (1-based), exact for any ``j``."""
        if j < 1:
            raise DomainError(f"coordinate index must be >= 1, got {j}")
        if j <= self.m:
            return self.head[j - 1]
        return self.tail.coord(j - self.m)

    def coords(self, k: int) -> np.ndarray:
        """The first ``k`` coordinates as an array."""
        out = np.zeros(k)
        h = min(k, self.m)
        out[:h] = self.head[:h]
        if isinstance(self.tail, GeometricTail) and k > self.m:
            out[self.m:] = self.tail.c * self.tail.r ** np.arange(k - self.m)
        return out

    def tail_after(self, k: int) -> Tail:
        """Tail descriptor of the coordinates past index ``k >= m``."""
        if isinstance(self.tail, ZeroTail) or k < self.m:
            return self.tail
        return GeometricTail(self.tail.c * self.tail.r ** (k - self.m), self.tail.r)

    def splice(self, prefix: Sequence[float], space: Space | None = None) -> "SequencePoint":
        """Point with coordinates ``prefix`` followed by ``t_{k+1}, t_{k+2}, ...``."""
        prefix = tuple(float(x) for x in prefix)
        k = len(prefix)
        space = self.space if space is None else space
        if k <= self.m:
            return SequencePoint(prefix + self.head[k:], self.tail, space)
        return SequencePoint(prefix, self.tail_after(k), space)

    def truncate(self, k: int) -> "SequencePoint":
        """Keep ``t_1..t_k`` and zero the rest."""
        return SequencePoint(tuple(self.coords(k)), ZeroTail(), self.space)

    def with_space(self, space: Space) -> "SequencePoint":
        return SequencePoint(self.head, self.tail, space)

    # -- metric ---------------------------------------------------------------
    def tail_sq(self, n: int) -> float:
        """``sum_{j > n} t_j^2`` in closed form."""
        if n < 0:
            raise DomainError("n must be nonnegative")
        return series_sum([self], [2], start=n)

    def norm_sq(self) -> float:
        return series_sum([self], [2])

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def distance(self, other: "SequencePoint") -> float:
        """l^2 distance; undefined between a cube point and a non-cube point."""
        if (self.space is Space.CUBE) != (other.space is Space.CUBE):
            raise DomainError(f"no common metric for spaces {self.space.value} and {other.space.value}")
        return math.sqrt(sq_distance(self, other))

    # -- serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        if isinstance(self.tail, GeometricTail):
            tail = {"kind": "geometric", "c": self.tail.c, "r": self.tail.r}
        else:
            tail = {"kind": "zero"}
        return {"head": list(self.head), "tail": tail, "space": self.space.value}

    @classmethod
    def from_dict(cls, data: dict, space: Space | None = None) -> "SequencePoint":
        if not isinstance(data, dict):
            raise DomainError(f"point must be an object, got {type(data).__name__}")
        tail_d = data.get("tail") or {"kind": "zero"}
        kind = tail_d.get("kind", "zero")
        if kind == "zero":
            tail = ZeroTail()
        elif kind == "geometric":
            tail = GeometricTail(float(tail_d["c"]), float(tail_d["r"]))
        else:
            raise DomainError(f"unknown tail kind {kind!r}")
        sp = Space(data["space"]) if "space" in data else (space or Space.GAMMA)
        return cls(tuple(data.get("head", ())), tail, sp)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "SequencePoint":
        return cls.from_dict(json.loads(text))


def series_sum(points: Sequence[SequencePoint], powers: Sequence[int], start: int = 0) -> float:
    """``sum_{j > start} prod_i points[i]_j ** powers[i]`` in closed form.

    The finite region is summed with ``math.fsum``; past every head the
    product of geometric tails is itself geometric.
    """
    if len(points) != len(powers) or not points:
        raise ValueError("points and powers must be nonempty and of equal length")
    M = max(max(p.m for p in points), start)
    total = []
    if M > start:
        block = np.ones(M - start)
        for p, e in zip(points, powers):
            block = block * p.coords(M)[start:] ** e
        total.extend(block.tolist())
    c, r = 1.0, 1.0
    for p, e in zip(points, powers):
        tail = p.tail_after(M)
        if isinstance(tail, ZeroTail):
            if e > 0:
                c = 0.0
                break
            continue
        c *= tail.c ** e
        r *= tail.r ** e
    if c != 0.0:
        total.append(c / (1.0 - r))
    return math.fsum(total)


def inner(u: SequencePoint, v: SequencePoint, start: int = 0) -> float:
    """``sum_{j > start} u_j v_j``."""
    return series_sum([u, v], [1, 1], start)


def sq_distance(u: SequencePoint, v: SequencePoint, start: int = 0) -> float:
    """``sum_{j > start} (u_j - v_j)^2``, never negative."""
    M = max(u.m, v.m, start)
    head = 0.0
    if M > start:
        head = math.fsum(((u.coords(M) - v.coords(M))[start:] ** 2).tolist())
    tu, tv = u.tail_after(M), v.tail_after(M)
    if isinstance(tu, GeometricTail) and isinstance(tv, GeometricTail) and tu.r == tv.r:
        tail = (tu.c - tv.c) ** 2 / (1.0 - tu.r**2)
    else:
        su = series_sum([u], [2], M)
        sv = series_sum([v], [2], M)
        tail = su + sv - 2.0 * series_sum([u, v], [1, 1], M)
    return max(head + tail, 0.0)
