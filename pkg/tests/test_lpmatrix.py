import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framefactor.errors import ValidationError
from framefactor.laurent import LaurentPoly, ToleranceConfig
from framefactor.lpmatrix import (
    LPMatrix,
    eig_signs,
    elementary_divisors,
    grid_residual,
    is_diag_dominant,
    smith_normal_form,
)
from framefactor.framelet import build_M, polyphase_P
from helpers import ONE, Z, bank, fixture, rand_matrix, random_instance

ZI = Z ** -1


def ex41():
    fx = fixture("ex4.1")
    return LPMatrix.from_json(fx["matrix"]), LPMatrix.from_json(fx["smith_E"]), LPMatrix.from_json(fx["smith_F"])


class TestBasics:
    def test_json_roundtrip(self):
        A, _, _ = ex41()
        B = LPMatrix.from_json(json.loads(json.dumps(A.to_json())))
        assert all(A[i, j] == B[i, j] for i in range(2) for j in range(2))

    def test_bad_json(self):
        with pytest.raises(ValidationError):
            LPMatrix.from_json({"rows": 3, "cols": 1, "entries": [[{"lo": 0, "coeffs": [[1, 0]]}]]})

    def test_hermitian(self):
        A, _, _ = ex41()
        assert A.is_hermitian()
        H = A.eval(np.exp(1j * 0.7))
        assert np.allclose(H, H.conj().T)

    def test_matmul_matches_pointwise(self):
        rng = np.random.default_rng(1)
        A, B = rand_matrix(rng, 2, 3), rand_matrix(rng, 3, 2)
        z = np.exp(1j * 1.3)
        assert np.allclose((A @ B).eval(z), A.eval(z) @ B.eval(z))


class TestDet:
    def test_identity(self):
        assert LPMatrix.identity(2).det() == ONE

    def test_ex41(self):
        A, _, _ = ex41()
        assert A.det().allclose(4 * (Z - 1) ** 2 * ZI)

    def test_polyphase_P(self):
        for nb in (1, 2):
            expect = -2 * Z * (1 - ZI) ** nb * (1 + ZI) ** nb
            assert polyphase_P(nb, 2).det().allclose(expect)


class TestUnimodular:
    def test_cases(self):
        assert LPMatrix.diag([Z ** 3, 2 * ONE]).is_unimodular()
        assert not LPMatrix.diag([1 - Z, ONE]).is_unimodular()

    def test_ex41_E(self):
        _, E, F = ex41()
        assert E.is_unimodular() and F.is_unimodular()

    def test_inverse(self):
        U = LPMatrix([[ONE, Z + 2], [0 * ONE, 3 * ZI]])
        assert grid_residual(U @ U.inverse_unimodular(), LPMatrix.identity(2)) < 1e-12


class TestEigSigns:
    def test_constants(self):
        assert eig_signs(np.diag([1.0, -1.0])) == (1, 1, 0)
        assert eig_signs(np.zeros((2, 2))) == (0, 0, 2)

    def test_ex32_samples(self):
        b = bank("ex3.2")
        Mm = build_M(b.a, b.Theta)
        # Theta(+-i) = 0 and Theta(-1) = -1, so M(i) = a a^H is rank one
        assert eig_signs(Mm.eval(1j)) == (1, 0, 1)
        H = Mm.eval(np.exp(0.4j))
        ev = np.linalg.eigvalsh(H)
        assert eig_signs(H) == (int((ev > 0).sum()), int((ev < 0).sum()), 0) == (1, 1, 0)


class TestDominance:
    def test_diagonal(self):
        assert is_diag_dominant(LPMatrix.diag([2.0, -3.0, 5.0]), 3)

    def test_cases(self):
        assert is_diag_dominant(LPMatrix([[Z + ZI, ONE], [ONE, Z + ZI]]), 1)
        assert not is_diag_dominant(LPMatrix([[ONE, Z], [ZI, ONE]]), 1)


class TestSmith:
    def test_ex41(self):
        A, E0, F0 = ex41()
        S = smith_normal_form(A)
        assert all(d.allclose(Z - 1) for d in S.D)
        assert S.residual <= 1e-9 and S.general_rank == 2
        assert S.E.is_unimodular() and S.F.is_unimodular()
        # the transcribed transformation matrices reconstruct A as well
        assert grid_residual(E0 @ S.diag_matrix() @ F0, A) <= 1e-12
        assert sorted((complex(z).real, m) for z, m in elementary_divisors(S)) == [(1.0, 1), (1.0, 1)]

    def test_already_smith(self):
        S = smith_normal_form(LPMatrix.diag([ONE, (Z - 1) ** 2]))
        assert S.D[0].allclose(ONE) and S.D[1].allclose((Z - 1) ** 2)

    def test_recover_known_form(self):
        E = LPMatrix([[ONE, Z + 1], [0 * ONE, ONE]]) @ LPMatrix([[ONE, 0 * ONE], [2 - Z, ONE]])
        F = LPMatrix([[ONE, 0 * ONE], [ZI - 3, ONE]]) @ LPMatrix([[ONE, 2 * Z], [0 * ONE, ONE]])
        A = E @ LPMatrix.diag([ONE, (Z - 1) * (Z - 2)]) @ F
        S = smith_normal_form(A)
        assert S.D[0].allclose(ONE) and S.D[1].allclose((Z - 1) * (Z - 2), atol=1e-8)

    def test_elementary_divisors(self):
        assert elementary_divisors(smith_normal_form(LPMatrix.identity(3))) == []
        S = smith_normal_form(LPMatrix.diag([Z - 2, (Z - 2) ** 2]))
        assert sorted((round(z.real, 9), m) for z, m in elementary_divisors(S)) == [(2.0, 1), (2.0, 2)]

    def test_degenerate(self):
        S = smith_normal_form(LPMatrix.diag([Z - 1, 0 * ONE]))
        assert S.general_rank == 1 and S.D[1].is_zero

    def test_not_square(self):
        with pytest.raises(ValidationError):
            smith_normal_form(LPMatrix([[ONE, Z]]))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_det_multiplicative(seed):
    rng = np.random.default_rng(seed)
    A, B = rand_matrix(rng, 2), rand_matrix(rng, 2)
    g = ToleranceConfig(grid_size=64).grid()
    lhs = (A @ B).det()(g)
    rhs = A.det()(g) * B.det()(g)
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1, np.abs(rhs).max())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_inertia_counts_sum_to_n(seed):
    A, _, _ = random_instance(seed)
    for H in A.eval(ToleranceConfig(grid_size=64).grid()):
        assert sum(eig_signs(H)) == A.rows
