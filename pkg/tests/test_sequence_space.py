"""Points of the Hilbert cube with exact zero or geometric tails."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from approxop import DomainError, GeometricTail, SequencePoint, Space, ZeroTail
from approxop.sequence_space import inner, series_sum, sq_distance

from conftest import random_gamma_point

unit = st.floats(0.0, 1.0)
rate = st.floats(0.0, 0.95)


@st.composite
def points(draw, max_head=6):
    head = draw(st.lists(unit, max_size=max_head))
    if draw(st.booleans()):
        return SequencePoint.geometric(head, draw(unit), draw(rate))
    return SequencePoint.from_head(head)


class TestCoordinates:
    def test_head_read(self):
        assert SequencePoint.from_head([0.5, 0.25]).coord(2) == 0.25

    def test_geometric_tail_starts_at_c(self):
        # t_{m+k} = c r^(k-1): the first tail coordinate is c itself
        t = SequencePoint.geometric([1.0], 0.5, 0.5)
        assert t.coord(2) == 0.5
        assert t.coord(3) == 0.25
        assert t.coord(4) == 0.125

    def test_zero_tail(self):
        t = SequencePoint.from_head([0.1, 0.2, 0.3])
        assert t.coord(t.m + 7) == 0.0

    def test_coords_vector(self):
        t = SequencePoint.geometric([0.9], 0.4, 0.5)
        np.testing.assert_allclose(t.coords(4), [0.9, 0.4, 0.2, 0.1])

    def test_index_must_be_positive(self):
        with pytest.raises(DomainError):
            SequencePoint.zeros().coord(0)


class TestValidation:
    def test_gamma_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            SequencePoint.from_head([0.5, 1.2])
        with pytest.raises(DomainError):
            SequencePoint.from_head([-0.1])

    def test_tail_checked(self):
        with pytest.raises(DomainError):
            SequencePoint.geometric([], 0.5, -0.5)  # second tail coordinate negative
        with pytest.raises(DomainError):
            SequencePoint.geometric([], 0.5, 1.0)

    def test_real_space_allows_signs(self):
        t = SequencePoint.geometric([-3.0], 2.0, -0.5, Space.REAL)
        assert t.coord(3) == -1.0

    def test_halfline(self):
        SequencePoint.from_head([2.0, 7.0], Space.HALFLINE)
        with pytest.raises(DomainError):
            SequencePoint.from_head([-1.0], Space.HALFLINE)

    def test_tail_types(self):
        assert isinstance(SequencePoint.zeros().tail, ZeroTail)
        assert isinstance(SequencePoint.geometric([], 0.1, 0.1).tail, GeometricTail)


class TestNorms:
    def test_tail_sq_zero_tail(self):
        t = SequencePoint.from_head([0.3, 0.4])
        assert t.tail_sq(2) == 0.0
        assert t.tail_sq(5) == 0.0

    def test_tail_sq_geometric(self):
        assert SequencePoint.geometric([], 0.5, 0.5).tail_sq(0) == pytest.approx(1 / 3, abs=1e-15)

    def test_tail_sq_single_term(self, half_half):
        assert half_half.tail_sq(1) == 0.25

    def test_norm_sq(self, half_half):
        assert half_half.norm_sq() == 0.5
        assert SequencePoint.geometric([], 0.5, 0.5).norm_sq() == pytest.approx(1 / 3, abs=1e-15)

    def test_self_distance(self, half_half):
        assert half_half.distance(half_half) == 0.0
        t = SequencePoint.geometric([0.2], 0.7, 0.3)
        assert t.distance(t) == 0.0

    def test_brute_force(self):
        t = SequencePoint.geometric([0.1, -0.9], 0.8, -0.6, Space.REAL)
        u = SequencePoint.geometric([0.3], 0.6, 0.9, Space.REAL)
        tv, uv = t.coords(2000), u.coords(2000)
        assert t.norm_sq() == pytest.approx(math.fsum(tv * tv), abs=1e-12)
        assert t.distance(u) ** 2 == pytest.approx(math.fsum((tv - uv) ** 2), abs=1e-12)
        assert inner(t, u) == pytest.approx(math.fsum(tv * uv), abs=1e-12)
        assert sq_distance(t, u, 3) == pytest.approx(math.fsum((tv[3:] - uv[3:]) ** 2), abs=1e-12)

    def test_series_sum_products(self):
        w = SequencePoint.geometric([], 0.5, 0.5, Space.REAL)
        t = SequencePoint.from_head([1.0, 1.0, 0.5, 0.5])
        assert series_sum([w, t], [1, 2], start=2) == pytest.approx(0.25 / 8 + 0.25 / 16, abs=1e-15)

    @given(points())
    def test_tail_zero_is_norm(self, t):
        assert t.tail_sq(0) == pytest.approx(t.norm_sq(), abs=1e-12)

    @given(st.lists(unit, max_size=4), st.floats(0.01, 1.0), st.floats(0.05, 0.95), st.integers(0, 10))
    def test_geometric_tail_ratio(self, head, c, r, n):
        t = SequencePoint.geometric(head, c, r)
        n = max(n, len(head))
        assert t.tail_sq(n + 1) <= t.tail_sq(n)
        assert t.tail_sq(n + 1) / t.tail_sq(n) == pytest.approx(r * r, rel=1e-12)

    def test_triangle_inequality(self, rng):
        for _ in range(1000):
            a, b, c = (random_gamma_point(rng, int(rng.integers(0, 5)), geometric=bool(rng.integers(2)))
                       for _ in range(3))
            assert a.distance(c) <= a.distance(b) + b.distance(c) + 1e-10

    def test_cube_distance_rejected(self):
        t = SequencePoint.from_head([0.5])
        u = SequencePoint.from_head([0.5], Space.CUBE)
        with pytest.raises(DomainError):
            t.distance(u)


class TestStructure:
    def test_splice_replaces_prefix(self):
        t = SequencePoint.geometric([0.1, 0.2], 0.5, 0.5)
        s = t.splice([0.9, 0.8, 0.7])
        np.testing.assert_allclose(s.coords(5), [0.9, 0.8, 0.7, 0.25, 0.125])

    def test_truncate(self):
        t = SequencePoint.geometric([0.1, 0.2], 0.5, 0.5).truncate(3)
        np.testing.assert_allclose(t.coords(5), [0.1, 0.2, 0.5, 0.0, 0.0])


class TestSerialization:
    def test_round_trip(self):
        t = SequencePoint.geometric([0.25, 0.5], 0.3, 0.6)
        assert SequencePoint.from_json(t.to_json()) == t
        assert SequencePoint.from_dict(t.to_dict()) == t

    def test_format(self):
        doc = json.loads(SequencePoint.geometric([0.5], 0.2, 0.4).to_json())
        assert doc == {"head": [0.5], "tail": {"kind": "geometric", "c": 0.2, "r": 0.4}, "space": "gamma"}

    def test_defaults(self):
        t = SequencePoint.from_dict({"head": [0.5, 0.5]})
        assert t == SequencePoint.from_head([0.5, 0.5])

    def test_bad_tail(self):
        with pytest.raises(DomainError):
            SequencePoint.from_dict({"head": [], "tail": {"kind": "harmonic"}})

    @given(points())
    @settings(max_examples=50)
    def test_round_trip_property(self, t):
        assert SequencePoint.from_json(t.to_json()) == t
