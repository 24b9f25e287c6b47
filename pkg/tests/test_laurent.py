import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framefactor.errors import NumericalError, ValidationError
from framefactor.laurent import (
    LaurentPoly,
    ToleranceConfig,
    coset_merge,
    coset_split,
    divide_linear,
    fejer_riesz,
    mz,
    poly_gcd,
    roots,
    sr,
    vmo,
)
from helpers import ONE, Z, bank

ZI = Z ** -1

coef = st.floats(-5, 5, allow_nan=False).filter(lambda x: abs(x) > 1e-3)
polys = st.builds(lambda c, lo: LaurentPoly(c, lo=lo), st.lists(coef, min_size=1, max_size=6),
                  st.integers(-4, 4))


class TestToleranceConfig:
    def test_defaults(self):
        t = ToleranceConfig()
        assert (t.eps_zero, t.eps_root, t.eps_circle, t.eps_residual, t.grid_size) == (1e-12, 1e-7, 1e-8, 1e-9, 512)

    def test_grid_minimum(self):
        with pytest.raises(ValidationError):
            ToleranceConfig(grid_size=32)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("FRAMEFACTOR_GRID", "128")
        assert ToleranceConfig.from_env().grid_size == 128
        assert ToleranceConfig.from_env(grid_size=256).grid_size == 256

    def test_grid_points_on_circle(self):
        g = ToleranceConfig(grid_size=64).grid()
        assert g.size == 64 and np.allclose(np.abs(g), 1) and g[0] == 1


class TestArithmetic:
    def test_support_and_length(self):
        p = LaurentPoly([0, 1, 2, 0], lo=-2)
        assert p.fsupp == (-1, 0) and p.length == 1 and p.ldeg == -1 and p.deg == 0

    def test_zero_poly(self):
        p = LaurentPoly()
        assert p.is_zero and p.fsupp is None and p.length == -np.inf

    def test_mul_and_shift(self):
        assert ((1 + Z) * (1 - Z)) == (1 - Z * Z)
        assert (Z ** -2 * (1 + Z)).fsupp == (-2, -1)

    def test_star(self):
        p = LaurentPoly([1, 2j, 3], lo=-1)
        assert p.star() == LaurentPoly([3, -2j, 1], lo=-1)

    def test_division_by_monomial(self):
        assert (Z ** 3 / (2 * Z)) == Z * Z / 2
        with pytest.raises(ValidationError):
            (1 + Z) / (1 + Z)

    def test_dilate_and_scale_var(self):
        p = 1 + 2 * Z
        assert p.dilate(3) == 1 + 2 * Z ** 3
        assert p.scale_var(-1) == 1 - 2 * Z

    def test_json_roundtrip(self):
        p = LaurentPoly([1.5, -2j, 0.25], lo=-3)
        assert LaurentPoly.from_json(json.loads(json.dumps(p.to_json()))) == p

    def test_divide_linear(self):
        q, r, _ = divide_linear((Z - 2) * (Z + 3) * ZI, 2.0)
        assert abs(r) < 1e-12 and q.allclose((Z + 3) * ZI)


class TestFunctionals:
    def test_mz(self):
        assert mz((Z - 1) ** 2 * (Z + 3), 1.0) == 2
        assert mz((Z - 1) ** 2 * (Z + 3), 2.0) == 0

    def test_mz_ex31(self):
        a = bank("ex3.1").a
        assert mz(1 - a * a.star(), 1.0) == 2

    def test_vmo(self):
        assert vmo(1 - Z) == 1
        assert vmo(bank("ex3.1").b[0]) == 1
        assert vmo(bank("ex3.5").b[2]) == 2

    def test_sr(self):
        assert sr((1 + Z) / 2, 2) == 1
        assert sr(bank("ex3.4").a, 2) == 4
        assert sr(bank("ex6.1").a, 3) == 2

    def test_coset_split(self):
        u0, u1 = coset_split(LaurentPoly([1, 2, 3, 4]), 2)
        assert u0 == LaurentPoly([1, 3]) and u1 == LaurentPoly([2, 4])
        u0, u1 = coset_split(ZI, 2)
        assert u0.is_zero and u1 == ZI


class TestRoots:
    def test_double_root_with_shift(self):
        r = roots((Z - 1) ** 2 * ZI)
        assert list(r) == [(1 + 0j, 2)] and r.shift == -1

    def test_det_ex41(self):
        r = roots(4 * (Z - 1) ** 2 * ZI)
        assert [(complex(x), m) for x, m in r] == [(1, 2)]

    def test_reciprocal_pair(self):
        got = sorted((round(x.real, 9), m) for x, m in roots((Z - 2) * (ZI - 2)))
        assert got == [(0.5, 1), (2.0, 1)]

    def test_high_multiplicity(self):
        assert list(roots((Z - 1) ** 6)) == [(1 + 0j, 6)]

    def test_gcd(self):
        g = poly_gcd((Z - 1) ** 2 * (Z + 2), (Z - 1) * (Z - 3))
        assert g.normalized_monic().allclose(Z - 1)


class TestFejerRiesz:
    def test_trivial(self):
        assert fejer_riesz(ONE).allclose(ONE)

    def test_binomial(self):
        th = fejer_riesz(2 + Z + ZI)
        assert (th * th.star()).allclose(2 + Z + ZI)
        assert th.length == 1

    def test_not_psd(self):
        with pytest.raises(ValidationError):
            fejer_riesz((Z + ZI) / 2)

    def test_not_hermitian(self):
        with pytest.raises(ValidationError):
            fejer_riesz(1 + Z)


# properties

ZS = np.exp(1j * np.linspace(0.1, 6.2, 100))


@given(polys, polys)
def test_ring_homomorphism(p, q):
    assert np.allclose((p * q)(ZS), p(ZS) * q(ZS), atol=1e-9 * (1 + np.abs(p(ZS) * q(ZS)).max()))
    assert np.allclose((p + q)(ZS), p(ZS) + q(ZS))


@given(polys, polys)
def test_star_antiautomorphism(p, q):
    assert (p * q).star().allclose(p.star() * q.star(), atol=1e-12)
    assert p.star().star() == p
    assert np.allclose(p.star()(ZS), np.conj(p(ZS)))


@given(polys, st.integers(2, 4))
def test_coset_roundtrip(p, M):
    assert coset_merge(coset_split(p, M), M) == p


@given(polys)
def test_vmo_sr_are_root_orders(p):
    assert vmo(p) == mz(p, 1.0)
    assert sr(p, 2) == mz(p, -1.0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
                .filter(lambda r: abs(r) > 0.2), min_size=1, max_size=5), st.integers(-3, 3))
def test_roots_reconstruct(rs, shift):
    p = LaurentPoly.from_roots(rs, scale=1.5, shift=shift)
    r = roots(p)
    assert r.total == p.length
    assert r.to_poly().allclose(p, atol=1e-6 * p.max_abs())


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=4))
def test_fejer_riesz_grid_residual(c):
    th0 = LaurentPoly(c).prune(1e-6)
    if th0.is_zero:
        return
    Theta = th0 * th0.star()
    try:
        th = fejer_riesz(Theta)
    except NumericalError:
        pytest.skip("ill-conditioned sample")
    g = ToleranceConfig().grid()
    assert np.max(np.abs(th(g) * np.conj(th(g)) - Theta(g))) <= 1e-9 * max(1, Theta.max_abs())
