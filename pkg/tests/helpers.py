"""Shared builders for the test suite."""

import json
from importlib import resources

import numpy as np

from framefactor.framelet import FilterBank
from framefactor.laurent import LaurentPoly
from framefactor.lpmatrix import LPMatrix

Z = LaurentPoly([1.0], lo=1)
ONE = LaurentPoly([1.0])


def fixture(name):
    return json.loads((resources.files("framefactor") / "fixtures" / f"{name}.json").read_text())


def bank(name):
    return FilterBank.from_json(fixture(name)["bank"])


def rand_poly(rng, lo=-1, hi=1, cplx=False):
    c = rng.normal(size=hi - lo + 1)
    if cplx:
        c = c + 1j * rng.normal(size=c.size)
    return LaurentPoly(c, lo=lo)


def rand_matrix(rng, n, k=None, cplx=False):
    k = n if k is None else k
    return LPMatrix([[rand_poly(rng, 0, int(rng.integers(0, 2)), cplx) for _ in range(k)] for _ in range(n)])


def random_instance(seed):
    """A = U diag(I_p, -I_q) U* for a random small U; returns (A, p, q)."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    k = n + int(rng.integers(0, 2))
    p = int(rng.integers(0, k + 1))
    U = rand_matrix(rng, n, k, cplx=bool(rng.integers(0, 2)))
    A = U @ LPMatrix.diag([1.0] * p + [-1.0] * (k - p)) @ U.star()
    return A.hermitian_part(), p, k - p


def random_psd_with_circle_zero(seed):
    """A = V V* where det V vanishes at a random point of the unit circle."""
    rng = np.random.default_rng(10_000 + seed)
    n = int(rng.integers(1, 3))
    zeta = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
    V = rand_matrix(rng, n) @ LPMatrix.diag([Z - zeta] + [ONE] * (n - 1))
    return (V @ V.star()).hermitian_part(), zeta
