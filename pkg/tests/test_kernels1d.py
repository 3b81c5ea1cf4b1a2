"""One-dimensional kernel families: basis weights, moments, samplers and lifts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from approxop import (
    BASKAKOV,
    BERNSTEIN,
    FAMILIES,
    GAUSS_WEIERSTRASS,
    POST_WIDDER,
    SZASZ_MIRAKJAN,
    DomainError,
    KernelFamily,
    bernstein_basis,
    bernstein_row,
    family_check,
    family_moment,
    family_sample,
    lift1d,
)

# interior points used for every family
T_POINTS = {
    BERNSTEIN: [0.0, 0.2, 0.5, 0.9, 1.0],
    SZASZ_MIRAKJAN: [0.0, 0.3, 1.0, 2.5],
    BASKAKOV: [0.0, 0.3, 1.0, 2.5],
    POST_WIDDER: [0.0, 0.3, 1.0, 2.5],
    GAUSS_WEIERSTRASS: [-1.5, 0.0, 0.3, 1.0],
}

M2 = {
    BERNSTEIN: lambda n, t: t * t + t * (1 - t) / n,
    SZASZ_MIRAKJAN: lambda n, t: t * t + t / n,
    BASKAKOV: lambda n, t: t * t + t * (1 + t) / n,
    POST_WIDDER: lambda n, t: t * t * (1 + 1 / n),
    GAUSS_WEIERSTRASS: lambda n, t: t * t + 1 / (2 * n),
}


class TestKernelFamily:
    def test_aliases(self):
        assert KernelFamily.from_name("Szasz-Mirakjan") == SZASZ_MIRAKJAN
        assert KernelFamily.from_name("gauss_weierstrass") == GAUSS_WEIERSTRASS
        with pytest.raises(DomainError):
            KernelFamily.from_name("chebyshev")

    def test_domains(self):
        assert BERNSTEIN.domain == (0.0, 1.0)
        assert POST_WIDDER.domain[1] == math.inf
        assert GAUSS_WEIERSTRASS.domain == (-math.inf, math.inf)
        assert BERNSTEIN.is_discrete and not POST_WIDDER.is_discrete
        with pytest.raises(DomainError):
            SZASZ_MIRAKJAN.check(-0.1)


class TestBernsteinBasis:
    def test_endpoint_identity(self):
        assert bernstein_basis(1, 0, 0.0) == 1.0

    def test_direct_value(self):
        assert bernstein_basis(4, 2, 0.5) == pytest.approx(0.375, abs=1e-15)

    def test_small_partition(self):
        assert sum(bernstein_basis(3, j, 0.3) for j in range(4)) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("n,j,t", [(0, 0, 0.5), (3, 4, 0.5), (3, -1, 0.5), (3, 1, 1.2), (3, 1, -0.01)])
    def test_domain_errors(self, n, j, t):
        with pytest.raises(DomainError):
            bernstein_basis(n, j, t)

    def test_log_space_matches_scipy(self):
        t = 0.37
        for n in (31, 64, 200, 1000):
            for j in (0, 1, n // 3, n // 2, n - 1, n):
                ref = special.binom(n, j) * t**j * (1 - t) ** (n - j) if n <= 200 else math.exp(
                    special.gammaln(n + 1) - special.gammaln(j + 1) - special.gammaln(n - j + 1)
                    + j * math.log(t) + (n - j) * math.log1p(-t))
                assert bernstein_basis(n, j, t) == pytest.approx(ref, rel=1e-10, abs=1e-300)

    def test_endpoints_exact_large_n(self):
        assert bernstein_basis(100, 0, 0.0) == 1.0
        assert bernstein_basis(100, 100, 1.0) == 1.0
        assert bernstein_basis(100, 50, 0.0) == 0.0
        assert bernstein_basis(100, 50, 1.0) == 0.0

    def test_partition_of_unity(self, rng):
        ts = rng.uniform(0, 1, size=100)
        for n in range(1, 65):
            rows = bernstein_row(n, ts)
            assert rows.shape == (100, n + 1)
            assert np.all(rows >= 0)
            np.testing.assert_allclose(rows.sum(axis=1), 1.0, atol=1e-12)

    def test_row_agrees_with_scalar(self):
        for n in (5, 40):
            row = bernstein_row(n, 0.61)
            ref = [bernstein_basis(n, j, 0.61) for j in range(n + 1)]
            np.testing.assert_allclose(row, ref, rtol=1e-12, atol=1e-300)


class TestFamilyMoment:
    def test_bernstein_second_moment(self):
        assert family_moment(BERNSTEIN, 2, 0.5, 2) == pytest.approx(0.375, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 3, 8])
    @pytest.mark.parametrize("t", [-0.7, 0.0, 1.3])
    def test_gauss_weierstrass_offset(self, n, t):
        assert family_moment(GAUSS_WEIERSTRASS, n, t, 2) == pytest.approx(t * t + 1 / (2 * n), abs=1e-15)

    @pytest.mark.parametrize("family", FAMILIES)
    def test_zero_point(self, family):
        assert family_moment(family, 5, 0.0, 1) == 0.0
        assert family_moment(family, 5, 0.0, 0) == 1.0

    @pytest.mark.parametrize("family", FAMILIES)
    def test_second_moment_table(self, family):
        for t in T_POINTS[family]:
            assert family_moment(family, 7, t, 2) == pytest.approx(M2[family](7, t), abs=1e-15)

    def test_vectorized(self):
        t = np.array([0.1, 0.4])
        np.testing.assert_allclose(family_moment(SZASZ_MIRAKJAN, 4, t, 2), t**2 + t / 4)

    def test_out_of_domain(self):
        with pytest.raises(DomainError):
            family_moment(BERNSTEIN, 3, 1.5, 1)
        with pytest.raises(DomainError):
            family_moment(BERNSTEIN, 3, 0.5, 3)


class TestFamilySample:
    def test_degenerate_bernstein(self, rng):
        assert np.all(family_sample(BERNSTEIN, 9, 0.0, rng, size=100) == 0.0)
        assert np.all(family_sample(BERNSTEIN, 9, 1.0, rng, size=100) == 1.0)

    def test_degenerate_at_zero(self, rng):
        for fam in (SZASZ_MIRAKJAN, BASKAKOV, POST_WIDDER):
            assert np.all(family_sample(fam, 5, 0.0, rng, size=10) == 0.0)

    def test_bernstein_mean(self, rng):
        x = family_sample(BERNSTEIN, 10, 0.5, rng, size=100_000)
        se = x.std(ddof=1) / math.sqrt(x.size)
        assert abs(x.mean() - family_moment(BERNSTEIN, 10, 0.5, 1)) <= 4 * se

    def test_gauss_weierstrass_second_moment(self, rng):
        x = family_sample(GAUSS_WEIERSTRASS, 8, 1.0, rng, size=100_000)
        y = x * x
        se = y.std(ddof=1) / math.sqrt(y.size)
        assert abs(y.mean() - (1 + 1 / 16)) <= 4 * se

    @pytest.mark.parametrize("family", FAMILIES)
    def test_sampler_consistency(self, family):
        rng = np.random.default_rng(11)
        t = T_POINTS[family][2]
        x = family_sample(family, 6, t, rng, size=100_000)
        lo, hi = family.domain
        assert np.all((x >= lo) & (x <= hi))
        for order in (1, 2):
            y = x**order
            se = y.std(ddof=1) / math.sqrt(y.size)
            assert abs(y.mean() - family_moment(family, 6, t, order)) <= 4 * se

    def test_reproducible(self):
        a = family_sample(BASKAKOV, 4, 0.7, np.random.default_rng(3), size=20)
        b = family_sample(BASKAKOV, 4, 0.7, np.random.default_rng(3), size=20)
        np.testing.assert_array_equal(a, b)

    def test_scalar_draw(self, rng):
        x = family_sample(POST_WIDDER, 3, 1.0, rng)
        assert np.ndim(x) == 0 and x >= 0


class TestLift1d:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_constant_and_identity(self, family):
        for t in T_POINTS[family]:
            assert lift1d(family, 5, lambda u: np.ones_like(u), t) == pytest.approx(1.0, abs=1e-12)
            assert lift1d(family, 5, lambda u: u, t) == pytest.approx(t, abs=1e-10)

    def test_szasz_square(self):
        assert lift1d(SZASZ_MIRAKJAN, 4, lambda u: u * u, 1.0, 1e-10) == pytest.approx(1.25, abs=1e-10)

    @pytest.mark.parametrize("family", FAMILIES)
    def test_second_moment_quadrature(self, family):
        for t in T_POINTS[family]:
            assert lift1d(family, 9, lambda u: u * u, t) == pytest.approx(M2[family](9, t), abs=1e-8)

    def test_bernstein_same_arithmetic(self):
        g = np.cos
        for n, t in [(3, 0.2), (12, 0.77)]:
            ref = math.fsum(g(j / n) * bernstein_basis(n, j, t) for j in range(n + 1))
            assert lift1d(BERNSTEIN, n, g, t) == pytest.approx(ref, abs=1e-15)

    @given(st.integers(1, 40))
    def test_endpoint_interpolation(self, n):
        g = lambda u: np.sin(3 * u) + u**3
        assert lift1d(BERNSTEIN, n, g, 0.0) == pytest.approx(g(0.0), abs=1e-12)
        assert lift1d(BERNSTEIN, n, g, 1.0) == pytest.approx(g(1.0), abs=1e-12)

    def test_scalar_only_function(self):
        # a callable that rejects arrays still works
        assert lift1d(BERNSTEIN, 3, lambda u: float(abs(u - 0.5)), 0.5) == pytest.approx(0.25, abs=1e-15)

    @given(st.floats(0.0, 1.0), st.integers(1, 30))
    @settings(max_examples=50)
    def test_positivity(self, t, n):
        assert lift1d(BERNSTEIN, n, lambda u: (u - 0.3) ** 2, t) >= 0.0


class TestFamilyCheck:
    def test_bernstein_passes(self):
        rep = family_check(BERNSTEIN, [2, 4, 8], [0.0, 0.5, 1.0])
        assert rep.status == "PASS"
        assert rep.moments_ok
        for n in (2, 4, 8):
            a, b, c = rep.coefficients[n]
            assert a == pytest.approx(-1 / n, abs=1e-12)
            assert b == pytest.approx(1 / n, abs=1e-12)
            assert abs(c) <= 1e-12

    def test_szasz_passes(self):
        rep = family_check(SZASZ_MIRAKJAN, [2, 4, 8], [0.0, 0.5, 1.0, 2.0])
        assert rep.status == "PASS"
        for n in (2, 4, 8):
            assert rep.coefficients[n][1] == pytest.approx(1 / n, abs=1e-12)

    def test_gauss_weierstrass_flagged(self):
        rep = family_check(GAUSS_WEIERSTRASS, [2, 4, 8, 16], [-1.0, 0.0, 0.5, 1.0])
        assert rep.moments_ok
        assert rep.status == "FLAGGED"
        assert rep.slopes[2] == pytest.approx(-1.0, abs=1e-9)
        for n in (2, 4, 8, 16):
            assert rep.coefficients[n][2] == pytest.approx(1 / (2 * n), abs=1e-12)

    @pytest.mark.parametrize("family", [BASKAKOV, POST_WIDDER])
    def test_other_families_pass(self, family):
        assert family_check(family, [2, 4, 8], [0.0, 0.5, 1.0, 2.0]).status == "PASS"
