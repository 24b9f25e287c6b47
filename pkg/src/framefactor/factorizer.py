"""Generalized spectral factorization of Hermitian Laurent polynomial matrices.

Given a Hermitian ``A(z)`` the functions here produce ``U(z)`` with

    A(z) = U(z) diag(I_m1, -I_m2) U*(z).

Routes:

* ``unimodular_factor`` handles a monomial determinant by congruence steps
  (sorting, zero-diagonal extraction, diagonal dominance, constant diagonal).
* ``const_signature_factor`` peels the roots of ``det A`` one conjugate pair
  at a time until the remainder is unimodular.
* ``general_factor`` pads, augments with scalar entries when the signature
  changes along the circle, or reduces a singular matrix through its Smith
  normal form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InertiaBoundError, NumericalError, SignatureError, ValidationError
from .laurent import (
    DEFAULT_TOL,
    LaurentPoly,
    ToleranceConfig,
    divide_linear,
    mz,
    roots,
)
from .lpmatrix import (
    LPMatrix,
    dominance_depth,
    eig_signs,
    grid_residual,
    smith_normal_form,
)

_ZERO = LaurentPoly()
_ONE = LaurentPoly([1.0])
Z = LaurentPoly([1.0], lo=1)

# relative size under which a coefficient produced by a congruence step is
# treated as roundoff
STRUCT_REL = 1e-10
# loose acceptance for the remainder of a single division by (z - z0)
DIVISION_REL = 1e-6


@dataclass
class SignatureProfile:
    """Eigenvalue sign counts of A(z) on the open arcs between circle roots of det A."""

    circle_spectrum: list
    arcs: list
    s_plus: int
    s_minus: int
    degenerate: bool = False

    @property
    def constant(self) -> bool:
        return len({(p, m) for _, p, m in self.arcs}) <= 1


@dataclass
class FactorizationResult:
    """U with A = U diag(I_m_plus, -I_m_minus) U*."""

    U: LPMatrix
    m_plus: int
    m_minus: int
    residual: float
    transcript: list = field(default_factory=list)

    @property
    def D(self) -> np.ndarray:
        return np.diag([1.0] * self.m_plus + [-1.0] * self.m_minus)

    def reconstruct(self) -> LPMatrix:
        return self.U @ LPMatrix.diag([1.0] * self.m_plus + [-1.0] * self.m_minus) @ self.U.star()

    def to_json(self) -> dict:
        return {"U": self.U.to_json(), "m_plus": self.m_plus, "m_minus": self.m_minus,
                "residual": self.residual, "transcript": list(self.transcript)}


@dataclass
class PartialMultiplicities:
    z0: complex
    alphas: list


# ---------------------------------------------------------------------------
# helpers

def _clean(Q: LPMatrix, rel: float = STRUCT_REL) -> LPMatrix:
    """Hermitian part with roundoff-level coefficients removed."""
    return Q.hermitian_part().prune(rel)


def _block_diag(*blocks) -> LPMatrix:
    """Block diagonal matrix from LPMatrix blocks or integer identity sizes."""
    mats = [LPMatrix.identity(b) if isinstance(b, int) else b for b in blocks if not (isinstance(b, int) and b == 0)]
    n = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = [[_ZERO] * c for _ in range(n)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return LPMatrix(out)


def _sign_diag(p: int, m: int) -> LPMatrix:
    return LPMatrix.diag([1.0] * p + [-1.0] * m)


def _check_square_hermitian(A: LPMatrix, tol: ToleranceConfig):
    if A.rows != A.cols:
        raise ValidationError("matrix must be square")
    if not A.is_hermitian(max(tol.eps_zero, 1e-12)):
        raise ValidationError("matrix is not Hermitian")


def _residual(A: LPMatrix, U: LPMatrix, p: int, m: int, tol: ToleranceConfig) -> float:
    return grid_residual(U @ _sign_diag(p, m) @ U.star(), A, tol)


def _accept(res: float, A: LPMatrix, tol: ToleranceConfig, what: str):
    scale = max(1.0, A.max_abs())
    if res > tol.eps_residual * scale:
        raise NumericalError(f"{what}: reconstruction residual {res:.3g} exceeds tolerance")


def _xi(z: complex) -> float:
    """Angle xi in [0, 2 pi) with z = exp(-i xi)."""
    return (-cmath.phase(z)) % (2 * math.pi)


# ---------------------------------------------------------------------------
# signature profile

def signature_profile(A: LPMatrix, tol: ToleranceConfig | None = None) -> SignatureProfile:
    """Locate circle roots of det A and count eigenvalue signs on each open arc."""
    tol = tol or DEFAULT_TOL
    if A.rows != A.cols:
        raise ValidationError("signature profile needs a square matrix")
    d = A.det()
    if d.is_zero:
        z = tol.grid()
        vals = A.eval(z)
        arcs = []
        for zk, H in zip(z, vals):
            p, m, _ = eig_signs(H, tol)
            arcs.append((complex(zk), p, m))
        return SignatureProfile([], arcs, max(a[1] for a in arcs), max(a[2] for a in arcs), True)
    xs = sorted(_xi(r) for r, _ in roots(d, tol).on_circle()) if not d.is_monomial() else []
    if not xs:
        mids = [0.0]
    else:
        mids = []
        for i, x in enumerate(xs):
            nxt = xs[i + 1] if i + 1 < len(xs) else xs[0] + 2 * math.pi
            mids.append((x + nxt) / 2)
    arcs = []
    for xm in mids:
        zm = complex(np.exp(-1j * xm))
        p, m, _ = eig_signs(A.eval(zm), tol)
        arcs.append((zm, p, m))
    return SignatureProfile(xs, arcs, max(a[1] for a in arcs), max(a[2] for a in arcs))


# ---------------------------------------------------------------------------
# building blocks of the unimodular factorization

def reduce_column(Q: LPMatrix, b, tol: ToleranceConfig | None = None):
    """Find X with Y = b - Q X short relative to the diagonal of Q.

    Q must be Hermitian, diagonally dominant, with nondecreasing diagonal
    lengths, and ``ldeg(b_l) >= ldeg(Q_ll)``.  On return every ``Y_l`` has
    support strictly inside that of ``Q_ll`` and ``deg Y_l < deg Q_ll``.
    """
    tol = tol or DEFAULT_TOL
    b = [LaurentPoly([x]) if not isinstance(x, LaurentPoly) else x for x in b]
    k = Q.rows
    if len(b) != k:
        raise ValidationError("column length does not match matrix size")
    ns = []
    for l in range(k):
        q = Q[l, l]
        if q.is_zero:
            raise ValidationError("reduce_column needs nonzero diagonal entries")
        ns.append(q.deg)
        if not b[l].is_zero and b[l].ldeg < q.ldeg:
            raise ValidationError("column entry starts below the diagonal support")
    if all(b[l].is_zero or b[l].deg < ns[l] for l in range(k)):
        return [_ZERO] * k, list(b)
    nk = max(ns)
    w = (Z + 1) * (Z.star() + 1)
    Dl = [w ** (nk - n) for n in ns]
    Qt = [[Dl[l] * Q[l, i] for i in range(k)] for l in range(k)]
    bt = [Dl[l] * b[l] for l in range(k)]
    top = max(p.deg for p in bt if not p.is_zero)
    # coefficient matrices Qt_j, j in [-nk, nk]
    Qc = {j: np.array([[Qt[l][i][j] for i in range(k)] for l in range(k)]) for j in range(-nk, nk + 1)}
    L = Qc[nk]
    dscale = max(float(np.max(np.abs(L))), 1e-300)
    if np.min(np.abs(np.diag(L))) <= 1e-12 * dscale or np.max(np.abs(np.triu(L, 1))) > 1e-8 * dscale:
        raise NumericalError("dominance violated")
    L = np.tril(L)
    nx = top - nk + 1
    X = [None] * nx
    for i in range(nx - 1, -1, -1):
        e = nk + i
        rhs = np.array([bt[l][e] for l in range(k)], dtype=complex)
        for ip in range(i + 1, nx):
            j = nk + i - ip
            if j < -nk:
                break
            rhs = rhs - Qc[j] @ X[ip]
        X[i] = np.linalg.solve(L, rhs)
    Xp = [LaurentPoly([X[i][l] for i in range(nx)], lo=0) for l in range(k)]
    QX = [sum((Q[l, i] * Xp[i] for i in range(k)), _ZERO) for l in range(k)]
    Y = []
    for l in range(k):
        y = b[l] - QX[l]
        lo_, hi_ = -ns[l], ns[l] - 1
        kept = {e: c for e, c in y.coeffs.items() if lo_ <= e <= hi_}
        dropped = max((abs(c) for e, c in y.coeffs.items() if not lo_ <= e <= hi_), default=0.0)
        ref = max(1.0, b[l].max_abs(), max(abs(v) for v in X[0]) if nx else 0.0) * max(Q.max_abs(), 1.0)
        if dropped > 1e-7 * ref:
            raise NumericalError("dominance violated")
        Y.append(LaurentPoly(kept, eps=0.0))
    return Xp, Y


def dominance_step(Q: LPMatrix, s: int, tol: ToleranceConfig | None = None):
    """Make Q dominant at its first s+1 diagonal entries by a unimodular congruence.

    Returns ``(Ut, Qt)`` with ``Qt = Ut Q Ut*``.  The top-left (s+1) block of
    Q is left untouched.
    """
    tol = tol or DEFAULT_TOL
    k = Q.rows
    if Q[0, 0].is_zero:
        raise ValidationError("dominance step needs a nonzero first diagonal entry")
    if s + 1 >= k:
        return LPMatrix.identity(k), Q
    p = s + 1
    A = Q.submatrix(range(p), range(p))
    lam = []
    for i in range(p, k):
        cands = [Q[l, i].ldeg - A[l, l].ldeg for l in range(p) if not Q[l, i].is_zero]
        lam.append(min(cands) if cands else 0)
    Bt = [[Q[l, i].shift(-lam[i - p]) for i in range(p, k)] for l in range(p)]
    Xcols, Ycols = [], []
    for c in range(k - p):
        x, y = reduce_column(A, [Bt[l][c] for l in range(p)], tol)
        Xcols.append(x)
        Ycols.append(y)
    Xt = LPMatrix([[Xcols[c][l] for c in range(k - p)] for l in range(p)])
    Ym = LPMatrix([[Ycols[c][l] for c in range(k - p)] for l in range(p)])
    Btm = LPMatrix(Bt)
    Lam = LPMatrix.diag([LaurentPoly([1.0], lo=v) for v in lam])
    C = Q.submatrix(range(p, k), range(p, k))
    # full congruence: the X* A X term is needed for Qt = Ut Q Ut*
    E = Lam @ C @ Lam.star() - Btm.star() @ Xt - Xt.star() @ Btm + Xt.star() @ A @ Xt
    E = E.hermitian_part()
    rows = []
    for i in range(k):
        if i < p:
            rows.append([A[i, j] if j < p else Ym[i, j - p] for j in range(k)])
        else:
            rows.append([Ym[j, i - p].star() if j < p else E[i - p, j - p] for j in range(k)])
    Qt = LPMatrix(rows)
    Ut = _block_ut(Xt, lam)
    return Ut, Qt


def _block_ut(Xt: LPMatrix, lam) -> LPMatrix:
    """[[I, 0], [-Xt*, diag(z**lam)]]."""
    p, q = Xt.rows, Xt.cols
    Xs = Xt.star()
    rows = []
    for i in range(p + q):
        row = []
        for j in range(p + q):
            if i < p:
                row.append(_ONE if i == j else _ZERO)
            elif j < p:
                row.append(-Xs[i - p, j])
            else:
                row.append(LaurentPoly([1.0], lo=lam[i - p]) if i == j else _ZERO)
        rows.append(row)
    return LPMatrix(rows)


def _block_ut_inv(Xt: LPMatrix, lam) -> LPMatrix:
    """Inverse of _block_ut: [[I, 0], [diag(z**-lam) Xt*, diag(z**-lam)]]."""
    p, q = Xt.rows, Xt.cols
    Xs = Xt.star()
    rows = []
    for i in range(p + q):
        row = []
        for j in range(p + q):
            if i < p:
                row.append(_ONE if i == j else _ZERO)
            elif j < p:
                row.append(Xs[i - p, j].shift(-lam[i - p]))
            else:
                row.append(LaurentPoly([1.0], lo=-lam[i - p]) if i == j else _ZERO)
        rows.append(row)
    return LPMatrix(rows)


def zero_diag_extract(Q: LPMatrix, tol: ToleranceConfig | None = None):
    """Split off a unit diagonal entry when Q_11 vanishes identically.

    Returns ``(U, Qt)`` with ``Q = U diag(1, Qt) U*`` and U unimodular.
    """
    tol = tol or DEFAULT_TOL
    k = Q.rows
    if not Q[0, 0].is_zero:
        raise ValidationError("first diagonal entry is not identically zero")
    if k < 2:
        raise ValidationError("a 1x1 zero matrix is not unimodular")
    det = Q.det(STRUCT_REL)
    if not det.is_monomial():
        raise ValidationError("matrix is not unimodular")
    Qi = Q.adjugate().scale(LaurentPoly([1.0 / det.coef_array[0]], lo=-det.lo)).prune(STRUCT_REL)
    b = Qi[0, 0]
    c = [Qi[i, 0] for i in range(1, k)]
    a = [Q[i, 0] for i in range(1, k)]
    x = [(b - 1) * ai / 2 for ai in a]
    Eblk = Q.submatrix(range(1, k), range(1, k))
    bm1 = b - 1
    Qt = LPMatrix([[bm1 * a[i] * a[j].star() + Eblk[i, j] for j in range(k - 1)] for i in range(k - 1)])
    rows = [[_ONE] + [-cj.star() for cj in c]]
    for i in range(k - 1):
        rows.append([-x[i]] + [(_ONE if i == j else _ZERO) + x[i] * c[j].star() for j in range(k - 1)])
    return LPMatrix(rows), _clean(Qt)


def unimodular_factor(A: LPMatrix, tol: ToleranceConfig | None = None) -> FactorizationResult:
    """Factor a Hermitian matrix whose determinant is a nonzero monomial."""
    tol = tol or DEFAULT_TOL
    _check_square_hermitian(A, tol.with_(eps_zero=max(tol.eps_zero, 1e-9)))
    n = A.rows
    Q = _clean(A)
    if not Q.det(STRUCT_REL).is_monomial():
        raise ValidationError("matrix is not unimodular")
    U = LPMatrix.identity(n)
    off = 0
    transcript = []
    budget = 200 + 50 * n * n + 20 * sum(max(Q[i, j].length, 0) for i in range(n) for j in range(n))
    while True:
        budget -= 1
        if budget < 0:
            raise NumericalError("algorithm stalled")
        k = Q.rows
        # sort diagonal lengths
        lens = [Q[i, i].length for i in range(k)]
        perm = sorted(range(k), key=lambda i: lens[i])
        if perm != list(range(k)):
            Q = Q.submatrix(perm, perm)
            Pinv = LPMatrix([[_ONE if perm[j] == i else _ZERO for j in range(k)] for i in range(k)])
            U = U @ _block_diag(off, Pinv)
            transcript.append(f"permute {perm}")
        # zero first diagonal entry
        if Q[0, 0].is_zero:
            Uz, Qt = zero_diag_extract(Q, tol)
            U = (U @ _block_diag(off, Uz)).prune(1e-15)
            transcript.append(f"zero-diagonal extraction (size {k} -> {k - 1})")
            off += 1
            if k == 1:
                raise NumericalError("algorithm stalled")
            Q = Qt
            continue
        # diagonal dominance
        s = dominance_depth(Q)
        if s == k:
            break
        Ut, Qt = dominance_step(Q, s, tol)
        p = s + 1
        Xt = LPMatrix([[-Ut[i, j].star() for i in range(p, k)] for j in range(p)])
        lam = [Ut[i, i].lo for i in range(p, k)]
        U = (U @ _block_diag(off, _block_ut_inv(Xt, lam))).prune(1e-15)
        Q = _clean(Qt)
        if dominance_depth(Q) < p:
            raise NumericalError("algorithm stalled")
        transcript.append(f"dominance step s={s} lengths {[Q[i, i].length for i in range(k)]}")
        # loop again; rows are re-sorted only when needed

    # constant diagonal
    k = Q.rows
    lamv = []
    for i in range(k):
        q = Q[i, i]
        if not q.is_monomial() or q.lo != 0:
            raise NumericalError("algorithm stalled (diagonal not constant)")
        lamv.append(q.coef_array[0].real)
    off_diag = max((Q[i, j].max_abs() for i in range(k) for j in range(k) if i != j), default=0.0)
    if off_diag > 1e-8 * max(abs(v) for v in lamv):
        raise NumericalError("algorithm stalled (off-diagonal residue)")
    order = [i for i in range(k) if lamv[i] > 0] + [i for i in range(k) if lamv[i] < 0]
    Pinv = LPMatrix([[_ONE if order[j] == i else _ZERO for j in range(k)] for i in range(k)])
    Sq = LPMatrix.diag([math.sqrt(abs(lamv[i])) for i in order])
    U = U @ _block_diag(off, Pinv @ Sq)
    npos = off + sum(v > 0 for v in lamv)
    nneg = n - npos
    transcript.append(f"constant diagonal {np.round(lamv, 12).tolist()}")
    res = _residual(A, U, npos, nneg, tol)
    _accept(res, A, tol, "unimodular factorization")
    return FactorizationResult(U, npos, nneg, res, transcript)


# ---------------------------------------------------------------------------
# root extraction

def _divide_row(p: LaurentPoly, z0: complex) -> LaurentPoly:
    q, r, s = divide_linear(p, z0)
    if abs(r) > DIVISION_REL * max(s, 1e-300):
        raise NumericalError(f"divisor (z - {z0:.6g}) not present (relative remainder {abs(r) / max(s, 1e-300):.2g})")
    return q


def _peel(Q: LPMatrix, z0: complex, r: np.ndarray):
    """Remove (z - z0) from one row and its star from the matching column.

    ``r`` satisfies r^T Q(z0) = 0.  Returns ``(Ustep, Qnew)`` with
    ``Q = Ustep Qnew Ustep*``.
    """
    n = Q.rows
    k = int(np.argmax(np.abs(r)))
    t = np.asarray(r, dtype=complex) / r[k]
    T = np.eye(n, dtype=complex)
    T[k, :] = t
    Tinv = np.eye(n, dtype=complex)
    Tinv[k, :] = -t
    Tinv[k, k] = 1.0
    Tm = LPMatrix.from_constant(T)
    B = Tm @ Q @ LPMatrix.from_constant(T.conj().T)
    rows = B.tolist()
    w = 1.0 / np.conj(z0)
    newrow = []
    for j in range(n):
        if j == k:
            q = _divide_row(rows[k][k], z0)
            q = _divide_row(q, w)
            # (1/z - conj z0) = -conj(z0) z^-1 (z - w)
            q = q * LaurentPoly([-1.0 / np.conj(z0)], lo=1)
            newrow.append(q)
        else:
            newrow.append(_divide_row(rows[k][j], z0))
    for j in range(n):
        rows[k][j] = newrow[j]
        rows[j][k] = newrow[j].star() if j != k else newrow[k].hermitian_part()
    Dk = LPMatrix.diag([Z - z0 if i == k else _ONE for i in range(n)])
    Ustep = LPMatrix.from_constant(Tinv) @ Dk
    return Ustep, _clean(LPMatrix(rows))


def _left_null(Q: LPMatrix, z0: complex) -> np.ndarray:
    C = Q.eval(z0)
    _, sv, vh = np.linalg.svd(C.T)
    return vh[-1].conj()


def _circle_null_space(Q: LPMatrix, z0: complex, mult: int):
    C = Q.eval(z0)
    C = (C + C.conj().T) / 2
    lam, V = np.linalg.eigh(C)
    order = np.argsort(np.abs(lam))
    scale = max(Q.max_abs() * Q.rows, 1e-300)
    K = int(np.sum(np.abs(lam) <= 1e-7 * scale))
    K = max(1, min(K, mult, Q.rows))
    return V[:, order[:K]]


def _circle_direction(Q: LPMatrix, z0: complex, mult: int, allow_balanced: bool = True,
                      allow_null: bool = True) -> np.ndarray:
    """Null vector u of Q(z0) with u^H Q'(z0) u = 0, as a row functional conj(u)."""
    N = _circle_null_space(Q, z0, mult)
    dQ = LPMatrix([[Q[i, j].derivative() for j in range(Q.cols)] for i in range(Q.rows)])
    AK = -1j * z0 * (N.conj().T @ dQ.eval(z0) @ N)
    AK = (AK + AK.conj().T) / 2
    mu, W = np.linalg.eigh(AK)
    dscale = max(float(np.linalg.norm(dQ.eval(z0), 2)), 1e-300)
    zero = np.abs(mu) <= 1e-7 * dscale
    if allow_null and zero.any():
        u = N @ W[:, int(np.argmin(np.abs(mu)))]
        return u.conj()
    pos = np.nonzero(mu > 0)[0]
    neg = np.nonzero(mu < 0)[0]
    K = len(mu)
    if not allow_balanced or K % 2 or len(pos) != K // 2 or len(neg) != K // 2:
        raise SignatureError()
    vp, vn = W[:, pos[-1]], W[:, neg[0]]
    w = vp / math.sqrt(mu[pos[-1]]) + vn / math.sqrt(-mu[neg[0]])
    u = N @ w
    return u.conj()


def extract_divisor(A: LPMatrix, z0, alpha: int, tol: ToleranceConfig | None = None):
    """Factor an elementary divisor (z - z0)**alpha out of a Hermitian matrix.

    Off the circle the whole power is removed (and with it the mirrored
    root 1/conj(z0)).  On the circle, alpha >= 2 is required and
    floor(alpha/2) factors are removed from a row and its star from the
    matching column.  Returns ``(U, At)`` with ``A = U At U*``.
    """
    tol = tol or DEFAULT_TOL
    z0 = complex(z0)
    alpha = int(alpha)
    if alpha < 1:
        raise ValidationError("alpha must be positive")
    on = abs(abs(z0) - 1.0) <= tol.eps_circle
    if on and alpha < 2:
        raise ValidationError("single circle divisors are handled by extract_single_circle_root")
    Q = _clean(A)
    n = Q.rows
    U = LPMatrix.identity(n)
    det = A.det(STRUCT_REL)
    if det.is_zero:
        raise ValidationError("determinant vanishes identically")
    reps = alpha // 2 if on else alpha
    total = mz(det, z0, tol.with_(eps_residual=1e-6))
    need = 2 * reps if on else reps
    if total < need:
        raise ValidationError("divisor not present")
    for _ in range(reps):
        if on:
            z0 = z0 / abs(z0)
            r = _circle_direction(Q, z0, total, allow_balanced=False)
        else:
            r = _left_null(Q, z0)
        Us, Q = _peel(Q, z0, r)
        U = U @ Us
        total -= 2 if on else 1
    return U, Q


def extract_single_circle_root(A: LPMatrix, z0, tol: ToleranceConfig | None = None):
    """Remove one conjugate pair of degree-one circle divisors at z0.

    The null space of A(z0) must carry a balanced quadratic form
    -i z0 A'(z0) (as many positive as negative directions); an isotropic
    combination of a positive and a negative direction is peeled.
    """
    tol = tol or DEFAULT_TOL
    z0 = complex(z0)
    if abs(abs(z0) - 1.0) > tol.eps_circle:
        raise ValidationError("z0 must lie on the unit circle")
    z0 = z0 / abs(z0)
    Q = _clean(A)
    det = A.det(STRUCT_REL)
    if det.is_zero:
        raise ValidationError("determinant vanishes identically")
    total = mz(det, z0, tol.with_(eps_residual=1e-6))
    if total < 2:
        raise SignatureError()
    r = _circle_direction(Q, z0, total, allow_null=False)
    return _peel(Q, z0, r)


def const_signature_factor(A: LPMatrix, tol: ToleranceConfig | None = None) -> FactorizationResult:
    """Factor a Hermitian matrix whose signature is constant off its circle spectrum."""
    tol = tol or DEFAULT_TOL
    _check_square_hermitian(A, tol.with_(eps_zero=max(tol.eps_zero, 1e-9)))
    n = A.rows
    Q = _clean(A)
    det = Q.det()
    if det.is_zero:
        raise ValidationError("determinant vanishes identically; use general_factor")
    transcript = []
    U = LPMatrix.identity(n)
    if not det.is_monomial():
        rm = roots(det, tol)
        for r, m in rm.on_circle():
            if m % 2:
                raise SignatureError("signature not constant; use general_factor")
        prof = signature_profile(A, tol)
        if not prof.constant:
            raise SignatureError("signature not constant; use general_factor")
        inside = [(r, m) for r, m in rm.off_circle() if abs(r) < 1.0]
        outside = sum(m for r, m in rm.off_circle() if abs(r) > 1.0)
        if sum(m for _, m in inside) != outside:
            raise NumericalError("roots of det are not symmetric about the circle")
        cur_len = det.length
        for z0, m in inside:
            for _ in range(m):
                r = _left_null(Q, z0)
                Us, Q = _peel(Q, z0, r)
                U = (U @ Us).prune(1e-15)
                cur_len -= 2
                transcript.append(f"extract off-circle root {z0:.12g}; len(det) -> {cur_len}")
        for z0, m in rm.on_circle():
            left = m
            while left > 0:
                r = _circle_direction(Q, z0, left)
                Us, Q = _peel(Q, z0, r)
                U = (U @ Us).prune(1e-15)
                left -= 2
                cur_len -= 2
                transcript.append(f"extract circle root {z0:.12g}; len(det) -> {cur_len}")
    res_u = unimodular_factor(Q, tol)
    transcript.extend(res_u.transcript)
    U = U @ res_u.U
    res = _residual(A, U, res_u.m_plus, res_u.m_minus, tol)
    _accept(res, A, tol, "constant-signature factorization")
    return FactorizationResult(U, res_u.m_plus, res_u.m_minus, res, transcript)


# ---------------------------------------------------------------------------
# general case

def augment_to_constant_signature(A: LPMatrix, tol: ToleranceConfig | None = None):
    """Append scalar Hermitian entries so the signature becomes constant.

    Returns ``(mus, At)`` with ``At = diag(A, mu_1, ..., mu_r)`` and
    ``r = s_plus + s_minus - n``.
    """
    tol = tol or DEFAULT_TOL
    prof = signature_profile(A, tol)
    if prof.degenerate:
        raise ValidationError("determinant vanishes identically")
    n = A.rows
    extra = prof.s_plus + prof.s_minus - n
    if extra <= 0:
        raise ValidationError("signature already constant; nothing to augment")
    xs = prof.circle_spectrum
    K = len(xs)
    etas = []
    for j in range(K):
        z1 = complex(np.exp(-1j * xs[j]))
        z2 = complex(np.exp(-1j * xs[(j + 1) % K]))
        s = 1.0 / cmath.sqrt(z1 * z2)
        eta = LaurentPoly({1: s, 0: -s * (z1 + z2), -1: s * z1 * z2})
        if eta(prof.arcs[j][0]).real < 0:
            eta = -eta
        etas.append(eta.real_if_close(1e-12))
    counts = [[p, m] for _, p, m in prof.arcs]
    mus = []
    for _ in range(extra):
        J = [j for j in range(K) if counts[j][1] == prof.s_minus]
        mu = LaurentPoly([(-1.0) ** (len(J) + 1)])
        for j in J:
            mu = mu * etas[j]
        mu = mu.hermitian_part()
        mus.append(mu)
        for j in range(K):
            if j in J:
                counts[j][0] += 1
            else:
                counts[j][1] += 1
    At = _block_diag(A, LPMatrix.diag(mus))
    return mus, At


def general_factor(A: LPMatrix, m1: int | None = None, m2: int | None = None,
                   tol: ToleranceConfig | None = None) -> FactorizationResult:
    """A = U diag(I_m1, -I_m2) U* for any Hermitian A with m1 >= s_plus, m2 >= s_minus."""
    tol = tol or DEFAULT_TOL
    _check_square_hermitian(A, tol.with_(eps_zero=max(tol.eps_zero, 1e-9)))
    n = A.rows
    prof = signature_profile(A, tol)
    m1 = prof.s_plus if m1 is None else int(m1)
    m2 = prof.s_minus if m2 is None else int(m2)
    if m1 < prof.s_plus or m2 < prof.s_minus:
        raise InertiaBoundError(
            f"below inertia lower bound: need m1 >= {prof.s_plus} and m2 >= {prof.s_minus}")
    transcript = [f"profile s+={prof.s_plus} s-={prof.s_minus} arcs={len(prof.arcs)}"]
    if prof.degenerate:
        S = smith_normal_form(A, tol)
        r = S.general_rank
        transcript.append(f"degenerate: general rank {r}")
        if r == 0:
            U = LPMatrix.zeros(n, max(m1 + m2, 1)) if m1 + m2 == 0 else LPMatrix.zeros(n, m1 + m2)
            return FactorizationResult(U, m1, m2, _residual(A, U, m1, m2, tol), transcript)
        Einv = S.E.inverse_unimodular(STRUCT_REL)
        At = _clean(Einv @ A @ Einv.star())
        B = At.submatrix(range(r), range(r))
        rest = max((At[i, j].max_abs() for i in range(n) for j in range(n) if i >= r or j >= r), default=0.0)
        if rest > 1e-7 * max(At.max_abs(), 1.0):
            raise NumericalError("degenerate reduction left a nonzero complement block")
        sub = general_factor(B, m1, m2, tol)
        V = sub.U
        Vp = LPMatrix([[V[i, j] if i < r else _ZERO for j in range(V.cols)] for i in range(n)])
        U = S.E @ Vp
        transcript.extend(sub.transcript)
    elif prof.s_plus + prof.s_minus == n:
        sub = const_signature_factor(A, tol)
        U = _pad(sub.U, sub.m_plus, sub.m_minus, m1, m2)
        transcript.extend(sub.transcript)
    else:
        mus, At = augment_to_constant_signature(A, tol)
        transcript.append(f"augmented with {len(mus)} scalar entries")
        sub = const_signature_factor(At, tol)
        Ucut = sub.U.submatrix(range(n), range(sub.U.cols))
        U = _pad(Ucut, sub.m_plus, sub.m_minus, m1, m2)
        transcript.extend(sub.transcript)
    res = _residual(A, U, m1, m2, tol)
    _accept(res, A, tol, "general factorization")
    return FactorizationResult(U, m1, m2, res, transcript)


def _pad(U: LPMatrix, p: int, m: int, m1: int, m2: int) -> LPMatrix:
    """Columns [U_plus, 0, U_minus, 0] for a target split (m1, m2)."""
    if p > m1 or m > m2:
        raise InertiaBoundError()
    rows = []
    for i in range(U.rows):
        row = [U[i, j] for j in range(p)] + [_ZERO] * (m1 - p)
        row += [U[i, p + j] for j in range(m)] + [_ZERO] * (m2 - m)
        rows.append(row)
    return LPMatrix(rows)


def partial_multiplicities(A: LPMatrix, z0, tol: ToleranceConfig | None = None) -> PartialMultiplicities:
    """Multiplicities of z0 in the invariant polynomials of A.

    Computed locally: with A(z) = sum_k A_k (z - z0)^k and T_k the block
    lower-triangular Toeplitz matrix of A_0..A_k, dim ker T_k equals
    sum_i min(alpha_i, k + 1).  This avoids a global Smith form, which is
    fragile in floating point.
    """
    tol = tol or DEFAULT_TOL
    z0 = complex(z0)
    d = A.det()
    if d.is_zero:
        raise ValidationError("determinant vanishes identically")
    n = A.rows
    total = mz(d, z0, tol)
    if total == 0:
        return PartialMultiplicities(z0, [0] * n)
    taylor = []
    cur = A.tolist()
    fact = 1.0
    kers = []
    for k in range(total + 1):
        taylor.append(np.array([[p(z0) for p in row] for row in cur], dtype=complex) / fact)
        cur = [[p.derivative() for p in row] for row in cur]
        fact *= k + 1
        T = np.zeros(((k + 1) * n, (k + 1) * n), dtype=complex)
        for i in range(k + 1):
            for j in range(i + 1):
                T[i * n:(i + 1) * n, j * n:(j + 1) * n] = taylor[i - j]
        sv = np.linalg.svd(T, compute_uv=False)
        thr = max(sv[0], 1.0) * 1e-8
        kers.append(int(np.sum(sv <= thr)))
        if kers[-1] >= total:
            break
    if kers[-1] != total:
        raise NumericalError("partial multiplicities do not add up to the root multiplicity of det")
    # number of alphas >= k + 1 is kers[k] - kers[k - 1]
    ge = [kers[0]] + [kers[k] - kers[k - 1] for k in range(1, len(kers))]
    alphas = [0] * n
    for k, c in enumerate(ge):
        for i in range(c):
            alphas[n - 1 - i] = k + 1
    return PartialMultiplicities(z0, alphas)
