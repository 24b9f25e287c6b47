"""Dense matrices whose entries are Laurent polynomials.

Besides arithmetic this module provides the determinant, pointwise
evaluation, eigenvalue sign counts of Hermitian evaluations, the diagonal
dominance predicate used by the unimodular factorization, and a Smith normal
form with explicit unimodular transformation matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericalError, ValidationError
from .laurent import (
    DEFAULT_TOL,
    LaurentPoly,
    ToleranceConfig,
    as_poly,
    mz,
    poly_divmod,
    roots,
)

_ZERO = LaurentPoly()
_ONE = LaurentPoly([1.0])


class LPMatrix:
    """Row-major grid of LaurentPoly entries.

    Instances are treated as immutable; every operation returns a new matrix.
    """

    __slots__ = ("_e", "rows", "cols")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [[as_poly(x) for x in row] for row in entries]
        if not rows or not rows[0]:
            raise ValidationError("LPMatrix needs at least one row and one column")
        w = len(rows[0])
        if any(len(r) != w for r in rows):
            raise ValidationError("ragged LPMatrix rows")
        self._e = tuple(tuple(r) for r in rows)
        self.rows = len(rows)
        self.cols = w

    # constructors
    @classmethod
    def identity(cls, n: int) -> "LPMatrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "LPMatrix":
        return cls([[_ZERO] * c for _ in range(r)])

    @classmethod
    def diag(cls, items: Sequence) -> "LPMatrix":
        n = len(items)
        return cls([[as_poly(items[i]) if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_constant(cls, a) -> "LPMatrix":
        a = np.atleast_2d(np.asarray(a, dtype=complex))
        return cls([[LaurentPoly([v]) for v in row] for row in a])

    @classmethod
    def from_json(cls, obj) -> "LPMatrix":
        try:
            r, c = int(obj["rows"]), int(obj["cols"])
            ents = [[LaurentPoly.from_json(p) for p in row] for row in obj["entries"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed LPMatrix JSON: {exc}") from None
        m = cls(ents)
        if (m.rows, m.cols) != (r, c):
            raise ValidationError("LPMatrix JSON shape does not match its entries")
        return m

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[p.to_json() for p in row] for row in self._e]}

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> LaurentPoly:
        i, j = ij
        return self._e[i][j]

    def tolist(self) -> list[list[LaurentPoly]]:
        return [list(r) for r in self._e]

    def row(self, i: int) -> list[LaurentPoly]:
        return list(self._e[i])

    def col(self, j: int) -> list[LaurentPoly]:
        return [r[j] for r in self._e]

    def submatrix(self, rows, cols) -> "LPMatrix":
        return LPMatrix([[self._e[i][j] for j in cols] for i in rows])

    def __repr__(self):
        return f"LPMatrix({self.rows}x{self.cols})"

    # arithmetic
    def __add__(self, other: "LPMatrix") -> "LPMatrix":
        self._same_shape(other)
        return LPMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)])

    def __sub__(self, other: "LPMatrix") -> "LPMatrix":
        self._same_shape(other)
        return LPMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)])

    def __neg__(self):
        return LPMatrix([[-a for a in r] for r in self._e])

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValidationError(f"shape mismatch {self.shape} vs {other.shape}")

    def __matmul__(self, other: "LPMatrix") -> "LPMatrix":
        if self.cols != other.rows:
            raise ValidationError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = _ZERO
                for k in range(self.cols):
                    a, b = self._e[i][k], other._e[k][j]
                    if not (a.is_zero or b.is_zero):
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LPMatrix(out)

    def scale(self, c) -> "LPMatrix":
        c = as_poly(c)
        return LPMatrix([[c * a for a in r] for r in self._e])

    def star(self) -> "LPMatrix":
        """Conjugate transpose with z replaced by 1/z."""
        return LPMatrix([[self._e[i][j].star() for i in range(self.rows)] for j in range(self.cols)])

    def transpose(self) -> "LPMatrix":
        return LPMatrix([[self._e[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def max_abs(self) -> float:
        return max(p.max_abs() for r in self._e for p in r)

    def prune(self, rel: float = DEFAULT_TOL.eps_zero) -> "LPMatrix":
        """Drop coefficients below ``rel`` times the largest coefficient of the matrix."""
        thr = rel * self.max_abs()
        return LPMatrix([[p.prune(thr) for p in r] for r in self._e])

    def hermitian_part(self) -> "LPMatrix":
        """(A + A*) / 2, used to remove roundoff asymmetry."""
        s = self.star()
        return LPMatrix([[(a + b) / 2 for a, b in zip(r, q)] for r, q in zip(self._e, s._e)])

    def is_hermitian(self, rel: float = DEFAULT_TOL.eps_zero) -> bool:
        if self.rows != self.cols:
            return False
        s = self.star()
        scale = max(self.max_abs(), 1e-300)
        return all((a - b).max_abs() <= rel * scale for r, q in zip(self._e, s._e) for a, b in zip(r, q))

    # evaluation
    def eval(self, z) -> np.ndarray:
        """Complex matrix at a scalar z, or an array of shape (len(z), rows, cols)."""
        z = np.asarray(z, dtype=complex)
        out = np.empty(z.shape + (self.rows, self.cols), dtype=complex)
        for i in range(self.rows):
            for j in range(self.cols):
                out[..., i, j] = self._e[i][j](z)
        return out

    def eval_grid(self, tol: ToleranceConfig | None = None) -> np.ndarray:
        tol = tol or DEFAULT_TOL
        return self.eval(tol.grid())

    # determinant and friends
    def det(self, rel: float | None = None) -> LaurentPoly:
        """Determinant by cofactor expansion over column subsets.

        Coefficients smaller than ``rel`` (default ``eps_zero``) times the
        Hadamard-type bound prod_i sum_j ||A_ij||_1 are pruned.
        """
        if self.rows != self.cols:
            raise ValidationError("determinant of a non-square matrix")
        n = self.rows
        rel = DEFAULT_TOL.eps_zero if rel is None else rel
        f = {0: _ONE}
        for r in range(n):
            g = {}
            for mask, val in f.items():
                if val.is_zero:
                    continue
                for j in range(n):
                    if mask >> j & 1:
                        continue
                    a = self._e[r][j]
                    if a.is_zero:
                        continue
                    above = bin(mask >> (j + 1)).count("1")
                    term = a * val
                    if above & 1:
                        term = -term
                    key = mask | (1 << j)
                    g[key] = g[key] + term if key in g else term
            f = g
        d = f.get((1 << n) - 1, _ZERO)
        bound = 1.0
        for r in self._e:
            bound *= sum(p.norm1() for p in r)
        return d.prune(rel * bound)

    def is_unimodular(self, rel: float | None = None) -> bool:
        if self.rows != self.cols:
            raise ValidationError("unimodularity needs a square matrix")
        d = self.det(rel)
        return d.is_monomial()

    def adjugate(self) -> "LPMatrix":
        n = self.rows
        if n == 1:
            return LPMatrix([[_ONE]])
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = self.submatrix([r for r in range(n) if r != j], [c for c in range(n) if c != i])
                d = minor.det(0.0)
                out[i][j] = -d if (i + j) & 1 else d
        return LPMatrix(out)

    def inverse_unimodular(self, rel: float | None = None) -> "LPMatrix":
        d = self.det(rel)
        if not d.is_monomial():
            raise ValidationError("matrix is not unimodular")
        return self.adjugate().scale(LaurentPoly([1.0 / d.coef_array[0]], lo=-d.lo))


def eig_signs(H, tol: ToleranceConfig | float | None = None) -> tuple[int, int, int]:
    """Counts of positive, negative and near-zero eigenvalues of a Hermitian matrix."""
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    eps = (tol.eps_zero if isinstance(tol, ToleranceConfig) else
           DEFAULT_TOL.eps_zero if tol is None else float(tol))
    lam = np.linalg.eigvalsh((H + H.conj().T) / 2)
    nrm = float(np.max(np.abs(lam))) if lam.size else 0.0
    thr = eps * nrm
    pos = int(np.sum(lam > thr))
    neg = int(np.sum(lam < -thr))
    return pos, neg, H.shape[0] - pos - neg


# ---------------------------------------------------------------------------
# diagonal dominance

def _strict_sub(inner: LaurentPoly, outer: LaurentPoly) -> bool:
    """fsupp(inner) is a proper subset of fsupp(outer)."""
    if outer.is_zero:
        return False
    if inner.is_zero:
        return True
    a, b = inner.fsupp
    c, d = outer.fsupp
    return c <= a and b <= d and (a, b) != (c, d)


def dominant_at(Q: LPMatrix, s: int) -> bool:
    """Diagonal dominance at the 1-based diagonal entry s."""
    k = Q.rows
    i0 = s - 1
    qs = Q[i0, i0]
    for i in range(k):
        if i == i0:
            continue
        if not (_strict_sub(Q[i, i0], qs) and _strict_sub(Q[i0, i], qs)):
            return False
        if i > i0 and not Q[i0, i].is_zero and Q[i0, i].deg >= qs.deg:
            return False
    return True


def is_diag_dominant(Q: LPMatrix, upto: int | None = None) -> bool:
    """True when Q is diagonally dominant at every entry s = 1..upto."""
    if Q.rows != Q.cols:
        raise ValidationError("diagonal dominance needs a square matrix")
    upto = Q.rows if upto is None else int(upto)
    return all(dominant_at(Q, s) for s in range(1, upto + 1))


def dominance_depth(Q: LPMatrix) -> int:
    """Largest s such that Q is dominant at its first s diagonal entries."""
    s = 0
    while s < Q.rows and dominant_at(Q, s + 1):
        s += 1
    return s


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass
class SmithDecomposition:
    """A = E diag(D) F with unimodular E, F and monic invariant polynomials D."""

    E: LPMatrix
    D: list
    F: LPMatrix
    general_rank: int
    residual: float = 0.0
    steps: list = field(default_factory=list)

    def diag_matrix(self) -> LPMatrix:
        return LPMatrix.diag(self.D)


def _shape_tol(tol: ToleranceConfig) -> float:
    return tol.eps_residual


def smith_normal_form(A: LPMatrix, tol: ToleranceConfig | None = None) -> SmithDecomposition:
    """Smith normal form over the Laurent ring.

    The pivot is a nonzero entry of minimal length (ties go to the smallest
    (row, col)).  Its row and column are cleared by division with remainder;
    when some remaining entry is not divisible by the pivot, that entry's
    row is added to the pivot row and the step repeats.  This keeps the
    divisibility chain d_j | d_j+1 without a separate gcd pass.
    """
    tol = tol or DEFAULT_TOL
    if A.rows != A.cols:
        raise ValidationError("Smith normal form needs a square matrix")
    n = A.rows
    scale = max(A.max_abs(), 1e-300)
    zt = _shape_tol(tol) * scale
    M = [[p.prune(zt) for p in r] for r in A.tolist()]
    E = LPMatrix.identity(n).tolist()
    F = LPMatrix.identity(n).tolist()
    steps = []

    def clean(p):
        return p.prune(zt)

    def row_axpy(dst, src, c):  # row_dst += c * row_src ; E col_src -= c * col_dst
        for j in range(n):
            if not M[src][j].is_zero:
                M[dst][j] = clean(M[dst][j] + c * M[src][j])
        for i in range(n):
            if not E[i][dst].is_zero:
                E[i][src] = E[i][src] - c * E[i][dst]

    def col_axpy(dst, src, c):  # col_dst += c * col_src ; F row_src -= c * row_dst
        for i in range(n):
            if not M[i][src].is_zero:
                M[i][dst] = clean(M[i][dst] + c * M[i][src])
        for j in range(n):
            if not F[dst][j].is_zero:
                F[src][j] = F[src][j] - c * F[dst][j]

    def scale_row(i, u):  # row_i *= u (a unit) ; E col_i /= u
        inv = LaurentPoly([1.0 / u.coef_array[0]], lo=-u.lo)
        M[i] = [p * u for p in M[i]]
        for r in range(n):
            E[r][i] = E[r][i] * inv

    budget = 200 * n * n + 50 * sum(max(p.length, 0) for r in M for p in r)
    t = 0
    while t < n:
        budget -= 1
        if budget < 0:
            raise NumericalError("SNF numerically failed (no convergence)")
        best = None
        for i in range(t, n):
            for j in range(t, n):
                p = M[i][j]
                if not p.is_zero and (best is None or p.length < best[0]):
                    best = (p.length, i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            M[i], M[t] = M[t], M[i]
            for r in range(n):
                E[r][i], E[r][t] = E[r][t], E[r][i]
        if j != t:
            for r in range(n):
                M[r][j], M[r][t] = M[r][t], M[r][j]
            F[j], F[t] = F[t], F[j]
        piv = M[t][t]
        lead = piv.coef_array[-1]
        scale_row(t, LaurentPoly([1.0 / lead], lo=-piv.lo))
        piv = M[t][t]
        done = True
        for i in range(t + 1, n):
            if M[i][t].is_zero:
                continue
            q, r = poly_divmod(M[i][t], piv, zt)
            row_axpy(i, t, -q)
            M[i][t] = r
            if not r.is_zero:
                done = False
        for j in range(t + 1, n):
            if M[t][j].is_zero:
                continue
            q, r = poly_divmod(M[t][j], piv, zt)
            col_axpy(j, t, -q)
            M[t][j] = r
            if not r.is_zero:
                done = False
        if not done:
            continue
        bad = None
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                if M[i][j].is_zero:
                    continue
                _, r = poly_divmod(M[i][j], piv, zt)
                if not r.is_zero:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_axpy(t, bad, _ONE)
            steps.append(f"fix divisibility: row {t} += row {bad}")
            continue
        steps.append(f"pivot {t}: len {piv.length}")
        t += 1

    # monic normalization with nonzero constant term is already in place
    D = [M[i][i] for i in range(n)]
    rank = sum(not d.is_zero for d in D)
    Em, Fm = LPMatrix(E), LPMatrix(F)
    recon = Em @ LPMatrix.diag(D) @ Fm
    res = _grid_residual(recon, A, tol)
    if res > tol.eps_residual * max(1.0, scale):
        raise NumericalError(f"SNF numerically failed (residual {res:.3g})")
    return SmithDecomposition(Em, D, Fm, rank, res, steps)


def _grid_residual(X: LPMatrix, Y: LPMatrix, tol: ToleranceConfig) -> float:
    g = tol.grid()
    diff = X.eval(g) - Y.eval(g)
    return float(np.max(np.linalg.norm(diff, ord=2, axis=(-2, -1))))


def grid_residual(X: LPMatrix, Y: LPMatrix, tol: ToleranceConfig | None = None) -> float:
    """max over the circle grid of the spectral norm of X(z) - Y(z)."""
    return _grid_residual(X, Y, tol or DEFAULT_TOL)


def elementary_divisors(S: SmithDecomposition, tol: ToleranceConfig | None = None) -> list[tuple[complex, int]]:
    """All (z0, alpha) with (z - z0)**alpha an elementary divisor."""
    tol = tol or DEFAULT_TOL
    out = []
    for d in S.D:
        if d.is_zero or d.is_monomial():
            continue
        out.extend(roots(d, tol).roots)
    return out


def partial_multiplicities_at(S: SmithDecomposition, z0, tol: ToleranceConfig | None = None) -> list[int]:
    """Multiplicity of z0 in each invariant polynomial (nondecreasing)."""
    tol = tol or DEFAULT_TOL
    out = []
    for d in S.D:
        out.append(0 if d.is_zero else mz(d, z0, tol))
    return out
