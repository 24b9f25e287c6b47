import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framefactor.errors import InertiaBoundError, SignatureError, ValidationError
from framefactor.factorizer import (
    augment_to_constant_signature,
    const_signature_factor,
    dominance_step,
    extract_divisor,
    extract_single_circle_root,
    general_factor,
    partial_multiplicities,
    reduce_column,
    signature_profile,
    unimodular_factor,
    zero_diag_extract,
)
from framefactor.framelet import build_M, build_N
from framefactor.laurent import ToleranceConfig
from framefactor.lpmatrix import LPMatrix, eig_signs, grid_residual, is_diag_dominant
from helpers import ONE, Z, bank, fixture, random_instance, random_psd_with_circle_zero

ZI = Z ** -1
O = 0 * ONE


def ex41():
    return LPMatrix.from_json(fixture("ex4.1")["matrix"])


def N_of(name):
    b = bank(name)
    return build_N(b.a, b.Theta, b.nb, b.dilation)


class TestProfile:
    def test_ex31(self):
        b = bank("ex3.1")
        p = signature_profile(build_M(b.a, b.Theta))
        assert (p.s_plus, p.s_minus) == (2, 1) and not p.constant

    def test_ex32(self):
        b = bank("ex3.2")
        p = signature_profile(build_M(b.a, b.Theta))
        assert (p.s_plus, p.s_minus) == (1, 1)

    def test_constant(self):
        p = signature_profile(LPMatrix.diag([1.0, -1.0]))
        assert len(p.arcs) == 1 and (p.s_plus, p.s_minus) == (1, 1) and p.constant

    def test_congruence_invariance(self):
        A = N_of("ex3.1")
        C = LPMatrix.from_constant(np.array([[2.0, 1.0], [0.5, -1.0]]))
        p0, p1 = signature_profile(A), signature_profile(C @ A @ C.star())
        assert (p0.s_plus, p0.s_minus) == (p1.s_plus, p1.s_minus)


class TestReduceColumn:
    def test_constant_diagonal(self):
        X, Y = reduce_column(LPMatrix.diag([2.0, 3.0]), [Z, Z * Z])
        assert X[0].allclose(Z / 2) and X[1].allclose(Z * Z / 3)
        assert all(y.is_zero for y in Y)

    def test_identity(self):
        X, Y = reduce_column(LPMatrix.identity(1), [5 * ONE])
        assert X[0].allclose(5 * ONE) and Y[0].is_zero

    def test_toeplitz(self):
        q = Z + 4 + ZI
        X, Y = reduce_column(LPMatrix([[q]]), [Z * Z])
        assert Y[0].deg <= 0 and Y[0].fsupp[0] >= -1 and Y[0].fsupp != (-1, 1)
        assert (q * X[0] + Y[0]).allclose(Z * Z)


class TestDominanceStep:
    def test_already_dominant(self):
        Q = LPMatrix.diag([2.0, -1.0])
        Ut, Qt = dominance_step(Q, 0)
        assert grid_residual(Qt, Q) < 1e-12

    def test_one_elimination(self):
        Ut, Qt = dominance_step(LPMatrix([[ONE, Z], [ZI, ONE]]), 0)
        assert grid_residual(Qt, LPMatrix.diag([1.0, 0.0])) < 1e-12
        assert Ut.is_unimodular()

    def test_congruence(self):
        Q = LPMatrix([[2 * ONE, Z + 1], [ZI + 1, 3 * ONE + Z + ZI]])
        Ut, Qt = dominance_step(Q, 0)
        assert grid_residual(Ut @ Q @ Ut.star(), Qt) < 1e-10
        assert is_diag_dominant(Qt, 1)


class TestZeroDiag:
    @pytest.mark.parametrize("a", [ONE, Z])
    def test_antidiagonal(self, a):
        Q = LPMatrix([[O, a], [a.star(), O]])
        U, Qt = zero_diag_extract(Q)
        assert Qt.shape == (1, 1) and Qt[0, 0].allclose(-ONE)
        rec = U @ LPMatrix([[ONE, O], [O, Qt[0, 0]]]) @ U.star()
        assert grid_residual(rec, Q) < 1e-12


class TestUnimodularFactor:
    def test_diag(self):
        r = unimodular_factor(LPMatrix.diag([2.0, -3.0]))
        assert (r.m_plus, r.m_minus) == (1, 1)
        assert np.allclose(np.abs(r.U.eval(1.0)), np.diag([np.sqrt(2), np.sqrt(3)]))

    def test_swap(self):
        r = unimodular_factor(LPMatrix([[O, ONE], [ONE, O]]))
        assert (r.m_plus, r.m_minus) == (1, 1) and r.residual < 1e-12

    def test_random_unimodular(self):
        V = LPMatrix([[ONE, Z + 2], [O, ONE]]) @ LPMatrix([[ONE, O], [ZI - 1, ONE]])
        A = V @ LPMatrix.diag([1.0, -1.0]) @ V.star()
        r = unimodular_factor(A)
        assert (r.m_plus, r.m_minus) == (1, 1) and r.residual <= 1e-9

    def test_rejects_nonunimodular(self):
        with pytest.raises(ValidationError):
            unimodular_factor(LPMatrix([[(Z - 2) * (ZI - 2)]]))


class TestExtraction:
    def test_off_circle_scalar(self):
        A = LPMatrix([[(Z - 2) * (ZI - 2)]])
        U, At = extract_divisor(A, 2.0, 1)
        assert At[0, 0].length == 0 and At[0, 0][0].real > 0
        assert grid_residual(U @ At @ U.star(), A) < 1e-10

    def test_circle_scalar(self):
        A = LPMatrix([[(Z - 1) * (ZI - 1)]])
        U, At = extract_divisor(A, 1.0, 2)
        assert At[0, 0].allclose(ONE)

    def test_single_circle_root_ex41(self):
        A = ex41()
        U, At = extract_single_circle_root(A, 1.0)
        assert At.det().length == A.det().length - 2
        assert grid_residual(U @ At @ U.star(), A) <= 1e-9

    def test_single_circle_root_precheck(self):
        with pytest.raises(ValidationError):
            extract_single_circle_root(LPMatrix.diag([(Z - 1) * (ZI - 1), ONE]), 1.0)


class TestConstSignature:
    def test_ex41(self):
        r = const_signature_factor(ex41())
        assert (r.m_plus, r.m_minus) == (1, 1) and r.residual <= 1e-9

    def test_scalar_psd(self):
        r = const_signature_factor(LPMatrix([[(1 - Z) * (1 - ZI)]]))
        assert (r.m_plus, r.m_minus) == (1, 0)
        u = r.U[0, 0]
        assert u.length == 1 and (u * u.star()).allclose((1 - Z) * (1 - ZI))

    def test_constant(self):
        r = const_signature_factor(LPMatrix.diag([2.0, -3.0]))
        assert (r.m_plus, r.m_minus) == (1, 1)

    def test_rejects_nonconstant(self):
        with pytest.raises(SignatureError):
            const_signature_factor(N_of("ex3.1"))


class TestAugment:
    def test_ex31(self):
        mus, At = augment_to_constant_signature(N_of("ex3.1"))
        assert len(mus) == 1 and At.shape == (3, 3)
        p = signature_profile(At)
        assert p.constant and (p.s_plus, p.s_minus) == (2, 1)
        assert all(m.allclose(m.star()) for m in mus)


class TestGeneralFactor:
    def test_haar(self):
        N = LPMatrix.diag([0.0, 0.25])
        r = general_factor(N, 1, 0)
        assert r.U.shape == (2, 1) and r.residual <= 1e-9
        assert abs(r.U.eval(1.0)[0, 0]) < 1e-12 and np.isclose(abs(r.U.eval(1.0)[1, 0]), 0.5)

    def test_ex31(self):
        r = general_factor(N_of("ex3.1"), 2, 1)
        assert r.U.shape == (2, 3) and r.residual <= 1e-9

    def test_ex31_below_bound(self):
        with pytest.raises(InertiaBoundError):
            general_factor(N_of("ex3.1"), 1, 1)

    def test_padding(self):
        r = general_factor(ex41(), 2, 2)
        assert r.U.shape == (2, 4) and r.residual <= 1e-9

    def test_json(self):
        d = general_factor(ex41()).to_json()
        assert d["m_plus"] == 1 and d["m_minus"] == 1 and "U" in d and d["transcript"]


class TestPartialMultiplicities:
    def test_ex41(self):
        assert partial_multiplicities(ex41(), 1.0).alphas == [1, 1]

    def test_off_spectrum(self):
        assert partial_multiplicities(ex41(), 2.0).alphas == [0, 0]

    def test_scalar_multiple_of_identity(self):
        A = LPMatrix.diag([(Z - 1) * (ZI - 1)] * 2)
        assert partial_multiplicities(A, 1.0).alphas == [2, 2]

    def test_mixed(self):
        A = LPMatrix.diag([(Z - 1) ** 3, (Z - 1) * (Z + 2)])
        assert partial_multiplicities(A, 1.0).alphas == [1, 3]


GRID = ToleranceConfig(grid_size=128).grid()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_random_factorization(seed):
    A, p, q = random_instance(seed)
    r = general_factor(A)
    assert r.residual <= 1e-7
    assert r.m_plus <= p and r.m_minus <= q
    for H in A.eval(GRID):
        nu_p, nu_m, _ = eig_signs(H)
        assert nu_p <= r.m_plus and nu_m <= r.m_minus


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 100_000))
def test_psd_circle_multiplicities_even(seed):
    A, zeta = random_psd_with_circle_zero(seed)
    al = partial_multiplicities(A, zeta).alphas
    assert sum(al) >= 2 and all(a % 2 == 0 for a in al)
