"""Quasi-tight framelet filter banks.

Translates a low-pass filter ``a`` and a Hermitian ``Theta`` into the
Hermitian matrices ``M_{a,Theta}`` and ``N_{a,Theta|n_b}``, factors ``N`` and
reads the high-pass filters off the polyphase rows of the factor.  Also
verifies banks, classifies ``(a, Theta)`` for dilation 2, estimates the
Sobolev smoothness exponent of ``a`` and samples the refinable function and
framelet generators by the cascade algorithm.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError, VanishingMomentError
from .factorizer import FactorizationResult, general_factor, signature_profile
from .laurent import (
    DEFAULT_TOL,
    LaurentPoly,
    ToleranceConfig,
    as_poly,
    divide_linear,
    fejer_riesz,
    roots,
    sr,
    vmo,
)
from .lpmatrix import LPMatrix

Z = LaurentPoly([1.0], lo=1)


@dataclass
class FilterBank:
    """Low-pass ``a``, weight ``Theta`` and high-pass filters with signs."""

    a: LaurentPoly
    Theta: LaurentPoly
    dilation: int = 2
    nb: int = 1
    highpass: list = field(default_factory=list)

    @property
    def b(self) -> list:
        return [h for h, _ in self.highpass]

    @property
    def eps(self) -> list:
        return [e for _, e in self.highpass]

    @property
    def s(self) -> int:
        return len(self.highpass)

    def to_json(self) -> dict:
        return {"dilation": self.dilation, "a": self.a.to_json(), "theta": self.Theta.to_json(),
                "nb": self.nb, "highpass": [{"b": b.to_json(), "eps": int(e)} for b, e in self.highpass]}

    @classmethod
    def from_json(cls, obj) -> "FilterBank":
        try:
            hp = []
            for h in obj.get("highpass", []):
                e = int(h["eps"])
                if e not in (-1, 1):
                    raise ValueError(f"eps must be +1 or -1, got {e}")
                hp.append((LaurentPoly.from_json(h["b"]), e))
            M = int(obj.get("dilation", 2))
            return cls(LaurentPoly.from_json(obj["a"]), LaurentPoly.from_json(obj["theta"]), M,
                       int(obj.get("nb", 1)), hp)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed FilterBank JSON: {exc}") from None


@dataclass
class Classification:
    case_id: int
    case_name: str
    sublabel: str | None
    s_plus: int
    s_minus: int

    @property
    def label(self) -> str:
        return f"({self.case_id})" + (f"/({self.sublabel})" if self.sublabel else "")


@dataclass
class CascadeSamples:
    level: int
    grid: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    xi: np.ndarray
    det_curve: np.ndarray


_CASES = {1: "deg-pos", 2: "deg-neg", 3: "psd", 4: "nsd", 5: "indefinite-det-neg", 6: "mixed"}


def _omega(M: int) -> complex:
    return cmath.exp(-2j * math.pi / M)


def _check_inputs(a, Theta, M, tol):
    a, Theta = as_poly(a), as_poly(Theta)
    if a.is_zero or Theta.is_zero:
        raise ValidationError("a and Theta must be nonzero")
    if int(M) != M or M < 2:
        raise ValidationError("dilation must be an integer >= 2")
    if (Theta - Theta.star()).max_abs() > tol.eps_residual * Theta.max_abs():
        raise ValidationError("Theta must satisfy Theta* = Theta")
    return a, Theta, int(M)


def build_M(a, Theta, M: int = 2, tol: ToleranceConfig | None = None) -> LPMatrix:
    """M x M Hermitian matrix diag(Theta(w^p z)) - Theta(z^M) [a(w^p z)] [a(w^q z)]*."""
    tol = tol or DEFAULT_TOL
    a, Theta, M = _check_inputs(a, Theta, M, tol)
    w = _omega(M)
    ThM = Theta.dilate(M)
    ap = [a.scale_var(w ** p) for p in range(M)]
    rows = []
    for p in range(M):
        row = []
        for q in range(M):
            e = -(ThM * ap[p] * ap[q].star())
            if p == q:
                e = e + Theta.scale_var(w ** p)
            row.append(e.real_if_close(1e-14))
        rows.append(row)
    return LPMatrix(rows)


def max_vm(a, Theta, M: int = 2, tol: ToleranceConfig | None = None) -> int:
    """min(sr(a, M), floor(vmo(Theta(z) - Theta(z^M) a a*) / 2))."""
    tol = tol or DEFAULT_TOL
    a, Theta, M = _check_inputs(a, Theta, M, tol)
    r = Theta - Theta.dilate(M) * a * a.star()
    s = sr(a, M, tol)
    scale = max(Theta.max_abs(), (Theta.dilate(M) * a * a.star()).max_abs())
    r = r.prune(tol.eps_zero * 100 * scale)
    if r.is_zero:
        return s
    return min(s, vmo(r, tol) // 2)


def _exact_div_pow(p: LaurentPoly, z0: complex, n: int) -> LaurentPoly:
    for _ in range(n):
        q, r, s = divide_linear(p, z0)
        if abs(r) > 1e-7 * max(s, 1e-300):
            raise VanishingMomentError()
        p = q
    return p


def build_N(a, Theta, nb: int, M: int = 2, tol: ToleranceConfig | None = None) -> LPMatrix:
    """Hermitian N with M_{a,Theta}(z) = P(z) N(z^M) P*(z)."""
    tol = tol or DEFAULT_TOL
    a, Theta, M = _check_inputs(a, Theta, M, tol)
    nb = int(nb)
    if nb < 1:
        raise ValidationError("n_b must be a positive integer")
    if nb > max_vm(a, Theta, M, tol):
        raise VanishingMomentError()
    w = _omega(M)
    Mm = build_M(a, Theta, M, tol)
    # divide entry (p, q) by (1 - w^q z)^nb (1 - (w^p z)^-1)^nb
    Mnb = [[None] * M for _ in range(M)]
    for p in range(M):
        for q in range(M):
            e = Mm[p, q]
            # (1 - w^q z) = -w^q (z - w^-q)
            e = _exact_div_pow(e, w ** (-q), nb) * (-(w ** (-q))) ** nb
            # (1 - w^-p z^-1) = z^-1 (z - w^-p)
            e = _exact_div_pow(e, w ** (-p), nb).shift(nb)
            Mnb[p][q] = e
    rows = []
    for j in range(M):
        row = []
        for k in range(M):
            acc = LaurentPoly()
            for p in range(M):
                for q in range(M):
                    acc = acc + Mnb[p][q] * (w ** (k * q - j * p))
            acc = (acc / M ** 2).shift(k - j)
            row.append(_compress(acc, M, tol))
        rows.append(row)
    N = LPMatrix(rows).hermitian_part()
    return LPMatrix([[e.real_if_close(1e-13) for e in r] for r in N.tolist()])


def _compress(p: LaurentPoly, M: int, tol: ToleranceConfig) -> LaurentPoly:
    """p(z) = q(z^M) -> q(z); off-lattice coefficients must vanish."""
    if p.is_zero:
        return p
    scale = p.max_abs()
    keep = {}
    for k, c in p.coeffs.items():
        if k % M == 0:
            keep[k // M] = c
        elif abs(c) > 1e-8 * max(scale, 1.0):
            raise NumericalError("N(z) does not depend on z^M only")
    return LaurentPoly(keep).prune(1e-13 * max(scale, 1e-300))


def polyphase_P(nb: int, M: int = 2) -> LPMatrix:
    """P(z) = diag((1 - (w^j z)^-1)^nb) F(z) with F_jk = w^(jk) z^k."""
    w = _omega(M)
    rows = []
    for j in range(M):
        d = (1 - LaurentPoly([w ** (-j)], lo=-1)) ** nb
        rows.append([d * LaurentPoly([w ** (j * k)], lo=k) for k in range(M)])
    return LPMatrix(rows)


def theta_split(Theta, tol: ToleranceConfig | None = None):
    """(theta_tilde, theta) with Theta = theta_tilde theta*."""
    tol = tol or DEFAULT_TOL
    Theta = as_poly(Theta)
    vals = Theta(tol.grid()).real
    if vals.min() >= -tol.eps_residual * Theta.max_abs():
        th = fejer_riesz(Theta, tol)
        return th, th
    return Theta, LaurentPoly([1.0])


def _normalize_filter(b: LaurentPoly, M: int) -> LaurentPoly:
    if b.is_zero:
        return b
    c = b.coef_array
    # ties go to the highest exponent
    i = c.size - 1 - int(np.argmax(np.abs(c[::-1])))
    b = b * (abs(c[i]) / c[i])
    # shift by a multiple of M so that |ldeg| is as small as possible
    k = -int(round(b.lo / M))
    b = b.shift(M * k)
    return b.real_if_close(1e-12)


def construct(a, Theta, nb: int, M: int = 2, m1: int | None = None, m2: int | None = None,
              tol: ToleranceConfig | None = None) -> FilterBank:
    """Quasi-tight framelet filter bank with the minimal number of generators."""
    tol = tol or DEFAULT_TOL
    a, Theta, M = _check_inputs(a, Theta, M, tol)
    N = build_N(a, Theta, nb, M, tol)
    fac = general_factor(N, m1, m2, tol)
    bank = bank_from_factor(a, Theta, nb, M, fac)
    rep = verify(bank, tol)
    if not rep["passed"]:
        raise NumericalError(f"constructed bank fails verification (residual {rep['residual']:.3g})")
    return bank


def bank_from_factor(a, Theta, nb: int, M: int, fac: FactorizationResult) -> FilterBank:
    """Assemble b_l = (1 - 1/z)^nb sum_g z^g U_gl(z^M) from a factor of N."""
    U = fac.U
    eps = [1] * fac.m_plus + [-1] * fac.m_minus
    vm = (1 - LaurentPoly([1.0], lo=-1)) ** nb
    hp = []
    for l in range(U.cols):
        bo = LaurentPoly()
        for g in range(M):
            bo = bo + U[g, l].dilate(M).shift(g)
        b = vm * bo
        if b.is_zero:
            continue
        hp.append((_normalize_filter(b, M), eps[l]))
    return FilterBank(as_poly(a), as_poly(Theta), M, int(nb), hp)


def verify(bank: FilterBank, tol: ToleranceConfig | None = None) -> dict:
    """Compare [b_l(w^p z)] diag(eps) [b_l(w^p z)]* with M_{a,Theta} on the grid."""
    tol = tol or DEFAULT_TOL
    M = bank.dilation
    Mm = build_M(bank.a, bank.Theta, M, tol)
    z = tol.grid()
    w = _omega(M)
    rhs = Mm.eval(z)
    s = bank.s
    if s:
        B = np.empty((z.size, M, s), dtype=complex)
        for p in range(M):
            for l, b in enumerate(bank.b):
                B[:, p, l] = b(w ** p * z)
        E = np.diag(np.asarray(bank.eps, dtype=float))
        lhs = B @ E @ np.conj(np.transpose(B, (0, 2, 1)))
    else:
        lhs = np.zeros_like(rhs)
    diff = np.abs(lhs - rhs)
    residual = float(diff.max())
    per_entry = diff.max(axis=0)
    vmos = [vmo(b, tol) if not b.is_zero else None for b in bank.b]
    finite = [v for v in vmos if v is not None]
    scale = max(1.0, float(np.abs(rhs).max()))
    return {
        "residual": residual,
        "per_entry": per_entry.tolist(),
        "passed": residual <= tol.eps_residual * scale,
        "vmo": vmos,
        "min_vmo": min(finite) if finite else None,
        "vm_ok": bool(finite) and min(finite) >= bank.nb,
    }


def _sign_pattern(p: LaurentPoly, tol: ToleranceConfig) -> str:
    """'zero', 'nonneg', 'nonpos' or 'mixed' for a real-valued function on the circle."""
    if p.is_zero:
        return "zero"
    vals = p(tol.grid()).real
    scale = float(np.abs(vals).max())
    if not p.is_monomial():
        odd = [r for r, m in roots(p, tol).on_circle() if m % 2]
        if odd:
            return "mixed"
    hi, lo = vals.max(), vals.min()
    thr = 1e-9 * max(scale, 1e-300)
    if lo >= -thr:
        return "nonneg"
    if hi <= thr:
        return "nonpos"
    return "mixed"


def classify(a, Theta, tol: ToleranceConfig | None = None) -> Classification:
    """Case (1)-(6) of the dilation-2 table, with the det sub-label (i)-(iv)."""
    tol = tol or DEFAULT_TOL
    a, Theta, _ = _check_inputs(a, Theta, 2, tol)
    Mm = build_M(a, Theta, 2, tol)
    d = Mm.det()
    dsign = _sign_pattern(d, tol)
    tsign = _sign_pattern(Theta, tol)
    sub = {"zero": "i", "nonneg": "ii", "nonpos": "iii", "mixed": "iv"}[dsign]
    if dsign == "zero":
        if tsign in ("nonneg",):
            case, sp, sm_ = 1, 1, 0
        elif tsign == "nonpos":
            case, sp, sm_ = 2, 0, 1
        else:
            raise NumericalError("degenerate det with sign-changing Theta")
    elif dsign == "nonneg" and tsign == "nonneg":
        case, sp, sm_ = 3, 2, 0
    elif dsign == "nonneg" and tsign == "nonpos":
        case, sp, sm_ = 4, 0, 2
    elif dsign == "nonpos":
        case, sp, sm_ = 5, 1, 1
    else:
        prof = signature_profile(Mm, tol)
        case, sp, sm_ = 6, prof.s_plus, prof.s_minus
    return Classification(case, _CASES[case], sub, sp, sm_)


def smoothness_sm(a, M: int = 2, restrict_cycles: bool = True, tol: ToleranceConfig | None = None) -> float:
    """Sobolev smoothness exponent sm(a) = -1/2 - log2 sqrt(rho) for dilation 2.

    ``a = (1 + z)^m a0`` with ``a0(-1) != 0``; ``w = a0 a0*`` and ``rho`` is
    the spectral radius of ``T = (w(2j - k))_{-K <= j, k <= K}``.  With
    ``restrict_cycles`` the radius is taken on the T-invariant subspace that
    annihilates the doubling cycles on which the Fourier transform of the
    refinable function vanishes identically; those cycles carry eigenvalues
    that do not affect the smoothness of phi.
    """
    tol = tol or DEFAULT_TOL
    a = as_poly(a)
    if int(M) != 2:
        raise ValidationError("smoothness exponent is implemented for dilation 2 only")
    if a.is_zero or abs(a(1.0) - 1.0) > 1e-9:
        raise ValidationError("unnormalized filter")
    m = sr(a, 2, tol)
    a0 = a
    for _ in range(m):
        a0, _r, _s = divide_linear(a0, -1.0)
    w = (a0 * a0.star()).hermitian_part()
    K = max(w.deg, 0) if not w.is_zero else 0
    idx = np.arange(-K, K + 1)
    T = np.zeros((2 * K + 1, 2 * K + 1), dtype=complex)
    for r, j in enumerate(idx):
        for c, k in enumerate(idx):
            T[r, c] = w[2 * j - k]
    if restrict_cycles and not a0.is_monomial():
        C = _cycle_constraints(a0, idx, tol)
        if C is not None:
            _, sv, vh = np.linalg.svd(C)
            rank = int(np.sum(sv > 1e-10 * sv[0]))
            Q = vh[rank:].conj().T
            if Q.shape[1] == 0:
                raise NumericalError("cycle restriction leaves an empty subspace")
            T = Q.conj().T @ T @ Q
    rho = float(np.max(np.abs(np.linalg.eigvals(T))))
    return -0.5 - math.log2(math.sqrt(rho))


def _cycle_constraints(a0: LaurentPoly, idx: np.ndarray, tol: ToleranceConfig):
    """Rows v -> d^i/dxi^i v^(xi_c) for the killed doubling cycles of a0."""
    zeros = []
    for r, m in roots(a0, tol).on_circle():
        zeros.append(((-cmath.phase(r)) % (2 * math.pi), m))
    if not zeros:
        return None
    twopi = 2 * math.pi

    def close(x, y):
        d = abs((x - y) % twopi)
        return min(d, twopi - d) < 1e-8

    def zero_mult(x):
        return max((m for xz, m in zeros if close(xz, x)), default=0)

    rows = []
    seen = []
    for xz, _ in zeros:
        start = (2 * xz) % twopi
        cyc = [start]
        x = start
        periodic = False
        for _ in range(64):
            x = (2 * x) % twopi
            if close(x, start):
                periodic = True
                break
            cyc.append(x)
        if not periodic or any(close(c, s) for c in cyc for s in seen):
            continue
        mus = []
        for c in cyc:
            prev = [p for p in cyc if close(2 * p, c)]
            if not prev:
                break
            mus.append(zero_mult(prev[0] + math.pi))
        if len(mus) != len(cyc) or min(mus) == 0:
            continue
        mu = min(mus)
        seen.extend(cyc)
        for c in cyc:
            e = np.exp(-1j * idx * c)
            for i in range(2 * mu):
                rows.append(((-1j * idx) ** i) * e)
    if not rows:
        return None
    return np.array(rows)


def cascade_sample(bank: FilterBank, level: int = 8, tol: ToleranceConfig | None = None) -> CascadeSamples:
    """Sample phi and psi_l on the grid k / M^level by subdivision from a delta seed."""
    tol = tol or DEFAULT_TOL
    level = int(level)
    if level < 1:
        raise ValidationError("level must be >= 1")
    a = bank.a
    M = bank.dilation
    if abs(a(1.0) - 1.0) > 1e-9:
        raise ValidationError("unnormalized filter")
    # the hat function sampled on the integers is the delta sequence
    v, lo = np.array([1.0 + 0j]), 0
    levels = [(v, lo)]
    ac = np.asarray(a.coef_array)
    for _ in range(level):
        up = np.zeros((v.size - 1) * M + 1, dtype=complex)
        up[::M] = v
        v = M * np.convolve(up, ac)
        lo = lo * M + a.lo
        levels.append((v, lo))
    phi, plo = levels[level]
    vprev, lprev = levels[level - 1]
    step = M ** (level - 1)
    psis = []
    for b in bank.b:
        bc = np.asarray(b.coef_array)
        up = np.zeros((bc.size - 1) * step + 1, dtype=complex)
        up[::step] = bc
        psis.append((M * np.convolve(up, vprev), lprev + b.lo * step))
    los = [plo] + [p[1] for p in psis]
    his = [plo + phi.size - 1] + [p[1] + p[0].size - 1 for p in psis]
    k0, k1 = min(los), max(his)
    ks = np.arange(k0, k1 + 1)
    x = ks / float(M ** level)
    PHI = np.zeros(ks.size, dtype=complex)
    PHI[plo - k0: plo - k0 + phi.size] = phi
    PSI = np.zeros((len(psis), ks.size), dtype=complex)
    for i, (p, l0) in enumerate(psis):
        PSI[i, l0 - k0: l0 - k0 + p.size] = p
    xi = np.linspace(-np.pi, np.pi, tol.grid_size)
    Mm = build_M(bank.a, bank.Theta, M, tol)
    det = Mm.det()(np.exp(-1j * xi))
    return CascadeSamples(level, x, PHI, PSI, xi, np.real(det))
