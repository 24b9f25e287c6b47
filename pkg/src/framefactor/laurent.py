"""Scalar Laurent polynomials with complex coefficients.

A Laurent polynomial ``p(z) = sum_k u(k) z**k`` is stored as a dense
coefficient vector together with the exponent of its first entry.  All values
are immutable.  Coefficients whose magnitude falls below ``eps_zero`` times the
largest stored magnitude are dropped at construction, so the representation is
canonical up to that relative threshold.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import NumericalError, ValidationError

DEFAULT_EPS_ZERO = 1e-12


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used throughout the package.

    eps_zero
        Relative magnitude under which a coefficient counts as zero.
    eps_root
        Radius for clustering nearby roots into one multiple root.
    eps_circle
        Distance from the unit circle under which a root is snapped onto it.
    eps_residual
        Acceptance threshold for reconstruction residuals.  It also serves as
        the relative size under which a division remainder counts as zero.
    grid_size
        Number of equispaced points on the unit circle used for checks.
    """

    eps_zero: float = DEFAULT_EPS_ZERO
    eps_root: float = 1e-7
    eps_circle: float = 1e-8
    eps_residual: float = 1e-9
    grid_size: int = 512

    def __post_init__(self):
        for name in ("eps_zero", "eps_root", "eps_circle", "eps_residual"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise ValidationError(f"{name} must be a positive finite number, got {v!r}")
        if int(self.grid_size) != self.grid_size or self.grid_size < 64:
            raise ValidationError(f"grid_size must be an integer >= 64, got {self.grid_size!r}")

    @classmethod
    def from_env(cls, **overrides) -> "ToleranceConfig":
        """Defaults, then the FRAMEFACTOR_GRID variable, then explicit overrides."""
        kw = {}
        env = os.environ.get("FRAMEFACTOR_GRID")
        if env:
            try:
                kw["grid_size"] = int(env)
            except ValueError:
                raise ValidationError(f"FRAMEFACTOR_GRID must be an integer, got {env!r}") from None
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)

    def with_(self, **kw) -> "ToleranceConfig":
        return replace(self, **kw)

    def grid(self) -> np.ndarray:
        """Points z = exp(-i xi) for xi = 2 pi k / grid_size."""
        xi = 2.0 * np.pi * np.arange(self.grid_size) / self.grid_size
        return np.exp(-1j * xi)


DEFAULT_TOL = ToleranceConfig()


def _resolve(tol: ToleranceConfig | None) -> ToleranceConfig:
    return DEFAULT_TOL if tol is None else tol


class LaurentPoly:
    """Immutable Laurent polynomial over the complex numbers.

    Parameters
    ----------
    coeffs : sequence or mapping
        Either coefficients listed from exponent ``lo`` upward, or a mapping
        ``{exponent: coefficient}``.
    lo : int
        Exponent of the first coefficient when ``coeffs`` is a sequence.
    eps : float
        Relative pruning threshold.
    """

    __slots__ = ("_lo", "_c")

    def __init__(self, coeffs: Sequence | Mapping | None = None, lo: int = 0, *, eps: float = DEFAULT_EPS_ZERO):
        if coeffs is None:
            arr = np.zeros(0, dtype=complex)
        elif isinstance(coeffs, Mapping):
            if len(coeffs) == 0:
                arr = np.zeros(0, dtype=complex)
            else:
                keys = [int(k) for k in coeffs]
                lo = min(keys)
                arr = np.zeros(max(keys) - lo + 1, dtype=complex)
                for k, v in coeffs.items():
                    arr[int(k) - lo] += complex(v)
        else:
            arr = np.array(coeffs, dtype=complex).ravel()
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValidationError("non-finite coefficient")
        lo = int(lo)
        if arr.size:
            mags = np.abs(arr)
            top = mags.max()
            if top > 0 and eps > 0:
                arr = np.where(mags <= eps * top, 0.0, arr)
            nz = np.nonzero(arr)[0]
            if nz.size == 0:
                arr = np.zeros(0, dtype=complex)
                lo = 0
            else:
                lo += int(nz[0])
                arr = arr[nz[0]: nz[-1] + 1]
        else:
            lo = 0
        arr.setflags(write=False)
        self._lo = lo
        self._c = arr

    # construction helpers
    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls([c])

    @classmethod
    def monomial(cls, c, k: int) -> "LaurentPoly":
        return cls([c], lo=k)

    @classmethod
    def from_roots(cls, roots: Iterable, scale=1.0, shift: int = 0) -> "LaurentPoly":
        r = np.asarray(list(roots), dtype=complex)
        desc = np.poly(r) if r.size else np.array([1.0])
        return cls(np.asarray(desc, dtype=complex)[::-1] * scale, lo=shift, eps=0.0)

    @classmethod
    def from_json(cls, obj: Mapping) -> "LaurentPoly":
        try:
            lo = int(obj["lo"])
            raw = obj["coeffs"]
            coeffs = []
            for c in raw:
                if isinstance(c, (list, tuple)):
                    if len(c) != 2:
                        raise ValueError("coefficient pair must have two entries")
                    coeffs.append(complex(float(c[0]), float(c[1])))
                else:
                    coeffs.append(complex(float(c)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed LaurentPoly JSON: {exc}") from None
        if coeffs and (coeffs[0] == 0 or coeffs[-1] == 0):
            raise ValidationError("malformed LaurentPoly JSON: leading/trailing zero coefficient")
        return cls(coeffs, lo=lo, eps=0.0)

    def to_json(self) -> dict:
        return {"lo": self._lo, "coeffs": [[float(c.real), float(c.imag)] for c in self._c]}

    # basic attributes
    @property
    def lo(self) -> int:
        return self._lo

    @property
    def coef_array(self) -> np.ndarray:
        """Coefficients from ``ldeg`` to ``deg`` (read-only view)."""
        return self._c

    @property
    def coeffs(self) -> dict:
        return {self._lo + i: complex(c) for i, c in enumerate(self._c) if c != 0}

    def __getitem__(self, k: int) -> complex:
        i = int(k) - self._lo
        if 0 <= i < self._c.size:
            return complex(self._c[i])
        return 0j

    @property
    def is_zero(self) -> bool:
        return self._c.size == 0

    def _need_nonzero(self):
        if self.is_zero:
            raise ValidationError("degree of the zero polynomial is undefined")

    @property
    def ldeg(self) -> int:
        self._need_nonzero()
        return self._lo

    @property
    def deg(self) -> int:
        self._need_nonzero()
        return self._lo + self._c.size - 1

    @property
    def length(self):
        """deg - ldeg, or -inf for the zero polynomial."""
        return -math.inf if self.is_zero else self._c.size - 1

    @property
    def fsupp(self) -> tuple[int, int] | None:
        """Closed exponent interval [ldeg, deg], or None for zero."""
        return None if self.is_zero else (self._lo, self._lo + self._c.size - 1)

    def is_monomial(self) -> bool:
        return self._c.size == 1

    def max_abs(self) -> float:
        return float(np.abs(self._c).max()) if self._c.size else 0.0

    def norm1(self) -> float:
        return float(np.abs(self._c).sum())

    # arithmetic
    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if np.isscalar(other) or isinstance(other, (int, float, complex, np.number)):
            return LaurentPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self._lo, other._lo)
        hi = max(self._lo + self._c.size, other._lo + other._c.size)
        out = np.zeros(hi - lo, dtype=complex)
        out[self._lo - lo: self._lo - lo + self._c.size] += self._c
        out[other._lo - lo: other._lo - lo + other._c.size] += other._c
        # cancellation is judged against the operands, not the result
        scale = max(self.max_abs(), other.max_abs())
        out[np.abs(out) <= DEFAULT_EPS_ZERO * scale] = 0
        return LaurentPoly(out, lo=lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(-self._c, lo=self._lo, eps=0.0)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return LaurentPoly()
        return LaurentPoly(np.convolve(self._c, other._c), lo=self._lo + other._lo)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            if not other.is_monomial():
                raise ValidationError("division by a non-monomial Laurent polynomial; use exact_div")
            return LaurentPoly(self._c / other._c[0], lo=self._lo - other._lo, eps=0.0)
        return LaurentPoly(self._c / complex(other), lo=self._lo, eps=0.0)

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            if not self.is_monomial():
                raise ValidationError("negative powers are only defined for monomials")
            return LaurentPoly([self._c[0] ** n], lo=self._lo * n, eps=0.0)
        out = LaurentPoly([1.0])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self._lo == other._lo and np.array_equal(self._c, other._c)

    __hash__ = None

    def allclose(self, other, atol: float = 1e-9) -> bool:
        """Coefficientwise comparison with an absolute tolerance."""
        other = self._coerce(other)
        return (self - other).max_abs() <= atol

    def __call__(self, z):
        """Evaluate at a scalar or an array of nonzero points."""
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            return np.zeros_like(z) if z.ndim else 0j
        val = npoly.polyval(z, self._c) * z ** self._lo
        return val if z.ndim else complex(val)

    def __repr__(self):
        if self.is_zero:
            return "LaurentPoly(0)"
        terms = ", ".join(f"{k}: {_fmt(c)}" for k, c in self.coeffs.items())
        return f"LaurentPoly({{{terms}}})"

    # structural operations
    def star(self) -> "LaurentPoly":
        """Conjugate coefficients and reflect exponents."""
        if self.is_zero:
            return self
        return LaurentPoly(np.conj(self._c[::-1]), lo=-(self._lo + self._c.size - 1), eps=0.0)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by z**k."""
        return LaurentPoly(self._c, lo=self._lo + int(k), eps=0.0) if not self.is_zero else self

    def dilate(self, m: int) -> "LaurentPoly":
        """Return p(z**m)."""
        m = int(m)
        if m < 1:
            raise ValidationError("dilation factor must be positive")
        if self.is_zero:
            return self
        out = np.zeros((self._c.size - 1) * m + 1, dtype=complex)
        out[::m] = self._c
        return LaurentPoly(out, lo=self._lo * m, eps=0.0)

    def scale_var(self, c) -> "LaurentPoly":
        """Return p(c z) for a nonzero scalar c."""
        if self.is_zero:
            return self
        c = complex(c)
        k = np.arange(self._lo, self._lo + self._c.size)
        return LaurentPoly(self._c * c ** k, lo=self._lo)

    def derivative(self) -> "LaurentPoly":
        if self.is_zero:
            return self
        k = np.arange(self._lo, self._lo + self._c.size)
        return LaurentPoly(self._c * k, lo=self._lo - 1)

    def prune(self, abs_tol: float) -> "LaurentPoly":
        """Zero every coefficient with magnitude at most ``abs_tol``."""
        if self.is_zero:
            return self
        c = np.where(np.abs(self._c) <= abs_tol, 0.0, self._c)
        return LaurentPoly(c, lo=self._lo, eps=0.0)

    def real_if_close(self, tol: float = 1e-13) -> "LaurentPoly":
        if self.is_zero:
            return self
        if np.abs(self._c.imag).max() <= tol * max(self.max_abs(), 1e-300):
            return LaurentPoly(self._c.real.astype(complex), lo=self._lo, eps=0.0)
        return self

    def hermitian_part(self) -> "LaurentPoly":
        """(p + p*) / 2."""
        return (self + self.star()) / 2

    def normalized_monic(self) -> "LaurentPoly":
        """Shift to ldeg 0 and scale to leading coefficient 1."""
        self._need_nonzero()
        return LaurentPoly(self._c / self._c[-1], lo=0, eps=0.0)


def _fmt(c: complex) -> str:
    if abs(c.imag) <= 1e-15 * max(abs(c.real), 1e-300):
        return f"{c.real:.12g}"
    return f"({c.real:.12g}{c.imag:+.12g}j)"


def as_poly(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly([x])


# ---------------------------------------------------------------------------
# division helpers

def _synthetic(c_asc: np.ndarray, z0: complex) -> tuple[np.ndarray, complex]:
    """Divide an ordinary polynomial (ascending coefficients) by (z - z0)."""
    n = c_asc.size
    if n == 0:
        return c_asc, 0j
    q = np.zeros(max(n - 1, 0), dtype=complex)
    acc = c_asc[-1]
    for i in range(n - 2, -1, -1):
        q[i] = acc
        acc = c_asc[i] + z0 * acc
    return q, complex(acc)


def _eval_scale(c_asc: np.ndarray, z0: complex) -> float:
    """Natural magnitude of the evaluation sum at z0."""
    if c_asc.size == 0:
        return 0.0
    return float(np.sum(np.abs(c_asc) * np.abs(z0) ** np.arange(c_asc.size)))


def divide_linear(p: LaurentPoly, z0: complex) -> tuple[LaurentPoly, complex, float]:
    """Split p = (z - z0) q + r z**ldeg(p).

    Returns ``(q, r, scale)`` where ``scale`` is the natural size of ``r``
    (the sum of |coefficient| |z0|**k), so callers can apply a relative test.
    """
    if p.is_zero:
        return p, 0j, 0.0
    q, r = _synthetic(np.asarray(p.coef_array), complex(z0))
    return LaurentPoly(q, lo=p.lo, eps=0.0), r, _eval_scale(np.asarray(p.coef_array), z0)


def exact_div_linear(p: LaurentPoly, z0: complex, rel_tol: float = 1e-9) -> LaurentPoly:
    """Divide by (z - z0), raising NumericalError when the remainder is not small."""
    q, r, s = divide_linear(p, z0)
    if abs(r) > rel_tol * max(s, 1e-300):
        raise NumericalError(f"division by (z - {z0:.6g}) is not exact (remainder {abs(r):.3g})")
    return q


def poly_divmod(p: LaurentPoly, d: LaurentPoly, abs_tol: float = 0.0) -> tuple[LaurentPoly, LaurentPoly]:
    """Division with remainder over the Laurent ring.

    Both operands are shifted to ordinary polynomials first.  The remainder
    ``r`` satisfies ``len(r) < len(d)``.  Coefficients of the running remainder
    with magnitude at most ``abs_tol`` are treated as zero.
    """
    if d.is_zero:
        raise ValidationError("division by zero polynomial")
    if p.is_zero:
        return LaurentPoly(), LaurentPoly()
    P = np.array(p.coef_array, dtype=complex)
    D = np.asarray(d.coef_array)
    nd = D.size
    if P.size < nd:
        return LaurentPoly(), p
    q = np.zeros(P.size - nd + 1, dtype=complex)
    lead = D[-1]
    for i in range(P.size - nd, -1, -1):
        c = P[i + nd - 1] / lead
        q[i] = c
        P[i: i + nd] -= c * D
        P[i + nd - 1] = 0
    R = P[: nd - 1]
    if abs_tol > 0:
        R = np.where(np.abs(R) <= abs_tol, 0.0, R)
    return LaurentPoly(q, lo=p.lo - d.lo, eps=0.0), LaurentPoly(R, lo=p.lo, eps=0.0)


def divides(d: LaurentPoly, p: LaurentPoly, rel_tol: float = 1e-9) -> bool:
    """True when d | p up to a remainder of relative size ``rel_tol``."""
    if p.is_zero:
        return True
    if d.is_zero:
        return False
    _, r = poly_divmod(p, d)
    return r.max_abs() <= rel_tol * max(p.max_abs(), 1e-300)


# ---------------------------------------------------------------------------
# framelet functionals

def star(p: LaurentPoly) -> LaurentPoly:
    return as_poly(p).star()


def mz(p: LaurentPoly, z0: complex, tol: ToleranceConfig | None = None) -> int:
    """Multiplicity of z0 as a root of p, by repeated synthetic division."""
    tol = _resolve(tol)
    p = as_poly(p)
    if p.is_zero:
        raise ValidationError("multiplicity undefined")
    z0 = complex(z0)
    if z0 == 0:
        raise ValidationError("multiplicity at z0 = 0 is undefined for Laurent polynomials")
    c = np.asarray(p.coef_array)
    m = 0
    while c.size > 1:
        q, r = _synthetic(c, z0)
        if abs(r) > tol.eps_residual * max(_eval_scale(c, z0), 1e-300):
            break
        c = q
        m += 1
    return m


def vmo(p: LaurentPoly, tol: ToleranceConfig | None = None) -> int:
    """Order of vanishing moments: the multiplicity of the root z = 1."""
    return mz(p, 1.0, tol)


def sr(p: LaurentPoly, M: int = 2, tol: ToleranceConfig | None = None) -> int:
    """Largest n with (1 + z + ... + z**(M-1))**n dividing p."""
    tol = _resolve(tol)
    p = as_poly(p)
    M = int(M)
    if M < 2:
        raise ValidationError("dilation must be at least 2")
    if p.is_zero:
        raise ValidationError("multiplicity undefined")
    if M == 2:
        return mz(p, -1.0, tol)
    d = LaurentPoly(np.ones(M))
    n = 0
    cur = p
    while not cur.is_zero and cur.length >= M - 1:
        q, r = poly_divmod(cur, d)
        if r.max_abs() > tol.eps_residual * cur.norm1():
            break
        cur = q
        n += 1
    return n


def coset_split(p: LaurentPoly, M: int) -> list[LaurentPoly]:
    """Cosets u^[g](z) = sum_k u(g + M k) z**k for g = 0..M-1."""
    p = as_poly(p)
    M = int(M)
    if M < 1:
        raise ValidationError("coset count must be positive")
    parts = [dict() for _ in range(M)]
    for k, c in p.coeffs.items():
        g = k % M
        parts[g][(k - g) // M] = c
    return [LaurentPoly(d, eps=0.0) for d in parts]


def coset_merge(parts: Sequence[LaurentPoly], M: int | None = None) -> LaurentPoly:
    """Inverse of coset_split: sum_g z**g u^[g](z**M)."""
    M = len(parts) if M is None else int(M)
    out = LaurentPoly()
    for g, u in enumerate(parts):
        out = out + as_poly(u).dilate(M).shift(g)
    return out


# ---------------------------------------------------------------------------
# roots

@dataclass(frozen=True)
class RootMultiset:
    """Roots with multiplicities plus the monomial unit ``scale * z**shift``."""

    roots: tuple = field(default_factory=tuple)
    scale: complex = 1.0
    shift: int = 0

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.roots)

    def to_poly(self) -> LaurentPoly:
        rs = [r for r, m in self.roots for _ in range(m)]
        return LaurentPoly.from_roots(rs, scale=self.scale, shift=self.shift)

    def on_circle(self) -> list:
        return [(r, m) for r, m in self.roots if _snapped(r)]

    def off_circle(self) -> list:
        return [(r, m) for r, m in self.roots if not _snapped(r)]

    def multiplicity(self, z0: complex, radius: float = 1e-7) -> int:
        return sum(m for r, m in self.roots if abs(r - z0) <= radius * max(1.0, abs(z0)))


def _snapped(r: complex) -> bool:
    # snapped roots have modulus 1 up to the rounding of z / |z|
    return abs(abs(r) - 1.0) <= 1e-14


def _taylor(c_asc: np.ndarray, z0: complex, m: int) -> list[tuple[complex, float]]:
    """First m Taylor coefficients at z0 with their natural scales."""
    out = []
    c = c_asc
    for _ in range(m):
        if c.size == 0:
            out.append((0j, 0.0))
            continue
        s = _eval_scale(c, z0)
        c, r = _synthetic(c, z0)
        out.append((r, s))
    return out


def _is_multiple_root(c_asc: np.ndarray, z0: complex, m: int, rel: float) -> bool:
    return all(abs(r) <= rel * max(s, 1e-300) for r, s in _taylor(c_asc, z0, m))


def roots(p: LaurentPoly, tol: ToleranceConfig | None = None) -> RootMultiset:
    """Nonzero roots of p with multiplicities.

    Companion-matrix eigenvalues are polished by one Newton step, clustered
    within ``eps_root``, and wider clusters are merged when the Taylor
    coefficients at their centroid confirm a multiple root.  Roots within
    ``eps_circle`` of the unit circle are snapped onto it.
    """
    tol = _resolve(tol)
    p = as_poly(p)
    if p.is_zero:
        raise ValidationError("roots of the zero polynomial are undefined")
    c = np.asarray(p.coef_array)
    lead = complex(c[-1])
    if c.size == 1:
        return RootMultiset((), lead, p.lo)
    raw = [complex(r) for r in np.roots(c[::-1])]
    groups = _cluster(c, raw, tol.eps_root)

    out = []
    for cl in groups:
        z = _refine(c, complex(np.mean(cl)), len(cl))
        if abs(abs(z) - 1.0) <= tol.eps_circle:
            z = z / abs(z)
            if abs(z.imag) <= tol.eps_circle:
                z = complex(np.sign(z.real), 0.0)
        if abs(z.imag) <= 1e-14 * abs(z):
            z = complex(z.real, 0.0)
        out.append((z, len(cl)))
    out.sort(key=lambda t: (round(abs(t[0]), 9), np.angle(t[0])))
    return RootMultiset(tuple(out), lead, p.lo)


_RADII = (3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5, 1e-6)


def _components(pts, radius):
    """Connected components under |a - b| <= radius * max(1, |a|)."""
    n = len(pts)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(pts[i] - pts[j]) <= radius * max(1.0, abs(pts[i])):
                parent[find(i)] = find(j)
    comps = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(pts[i])
    return list(comps.values())


def _cluster(c, pts, eps_root, level=0):
    """Split eigenvalues into groups that each represent one multiple root.

    A wide group is accepted when the Taylor coefficients at its centroid
    confirm the multiplicity; otherwise it is split at a smaller radius,
    ending at ``eps_root`` where groups are accepted unconditionally.
    """
    if level >= len(_RADII) or _RADII[level] <= eps_root:
        return _components(pts, eps_root)
    out = []
    for comp in _components(pts, _RADII[level]):
        if len(comp) == 1 or _is_multiple_root(c, complex(np.mean(comp)), len(comp), 1e-10):
            out.append(comp)
        else:
            out.extend(_cluster(c, comp, eps_root, level + 1))
    return out


def _refine(c, z, m):
    """Newton steps on the (m-1)th derivative, kept only while they help."""
    d = c
    for _ in range(m - 1):
        d = npoly.polyder(d)
    dd = npoly.polyder(d)
    for _ in range(3):
        f = npoly.polyval(z, d)
        g = npoly.polyval(z, dd)
        if g == 0:
            break
        z2 = z - f / g
        if abs(npoly.polyval(z2, d)) >= abs(f):
            break
        z = complex(z2)
    return z


def poly_gcd(p: LaurentPoly, q: LaurentPoly, tol: ToleranceConfig | None = None) -> LaurentPoly:
    """Monic approximate gcd by matching root clusters within ``eps_root``."""
    tol = _resolve(tol)
    p, q = as_poly(p), as_poly(q)
    if p.is_zero:
        return q.normalized_monic() if not q.is_zero else LaurentPoly()
    if q.is_zero:
        return p.normalized_monic()
    rq = list(roots(q, tol).roots)
    common = []
    for r, m in roots(p, tol).roots:
        for i, (s, n) in enumerate(rq):
            if abs(r - s) <= max(tol.eps_root, 1e-6) * max(1.0, abs(r)):
                k = min(m, n)
                common.extend([(r + s) / 2] * k)
                rq[i] = (s, n - k)
                break
    return LaurentPoly.from_roots(common)


def fejer_riesz(Theta: LaurentPoly, tol: ToleranceConfig | None = None) -> LaurentPoly:
    """Return theta with theta * theta.star() == Theta for Theta >= 0 on the circle.

    theta has its roots in the closed unit disk (half of every circle root),
    ldeg 0 and a positive leading coefficient.
    """
    tol = _resolve(tol)
    Theta = as_poly(Theta)
    if Theta.is_zero:
        return LaurentPoly()
    scale = Theta.max_abs()
    if (Theta - Theta.star()).max_abs() > tol.eps_residual * scale:
        raise ValidationError("Theta is not Hermitian (Theta* != Theta)")
    z = tol.grid()
    vals = Theta(z)
    if vals.real.min() < -tol.eps_residual * scale:
        raise ValidationError("not positive semidefinite on circle")
    rm = roots(Theta, tol)
    keep = []
    for r, m in rm.roots:
        if _snapped(r):
            if m % 2:
                raise ValidationError("not positive semidefinite on circle")
            keep.extend([r] * (m // 2))
        elif abs(r) < 1.0:
            keep.extend([r] * m)
    raw = LaurentPoly.from_roots(keep)
    rv = np.abs(raw(z)) ** 2
    c = math.sqrt(max(float(np.sum(vals.real)) / float(np.sum(rv)), 0.0))
    theta = raw * c
    res = float(np.max(np.abs(np.abs(theta(z)) ** 2 - vals)))
    if res > tol.eps_residual * max(1.0, scale):
        raise NumericalError(f"Fejer-Riesz factor residual {res:.3g} exceeds tolerance")
    return theta
