"""scikit-learn front end for the filter bank construction."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .errors import ValidationError
from .framelet import FilterBank, construct, verify
from .laurent import LaurentPoly, ToleranceConfig


def _to_poly(x, lo: int = 0) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, dict):
        return LaurentPoly.from_json(x) if "coeffs" in x else LaurentPoly(x)
    return LaurentPoly(np.atleast_1d(np.asarray(x, dtype=complex)), lo=lo)


class QuasiTightFrameletDesigner(TransformerMixin, BaseEstimator):
    """Design a quasi-tight framelet filter bank from a low-pass filter.

    Parameters
    ----------
    nb : int
        Vanishing moments imposed on every high-pass filter.
    dilation : int
        Dilation factor M >= 2.
    m1, m2 : int or None
        Signature counts; None uses the minimal values.
    eps_residual : float
        Acceptance threshold for the identity check.
    grid_size : int
        Number of circle samples used in checks.
    a_lo : int
        Lowest exponent when ``a`` is passed as a plain coefficient array.

    Attributes
    ----------
    filter_bank_ : FilterBank
    s_plus_, s_minus_ : int
        Number of high-pass filters with eps = +1 and eps = -1.
    residual_ : float
    """

    def __init__(self, nb=1, dilation=2, m1=None, m2=None, eps_residual=1e-9, grid_size=512, a_lo=0):
        self.nb = nb
        self.dilation = dilation
        self.m1 = m1
        self.m2 = m2
        self.eps_residual = eps_residual
        self.grid_size = grid_size
        self.a_lo = a_lo

    def _tol(self):
        return ToleranceConfig(eps_residual=self.eps_residual, grid_size=self.grid_size)

    def fit(self, a, Theta=None):
        """Build the bank for low-pass ``a`` and weight ``Theta`` (default 1)."""
        tol = self._tol()
        a = _to_poly(a, self.a_lo)
        Theta = LaurentPoly([1.0]) if Theta is None else _to_poly(Theta)
        if Theta.is_zero:
            raise ValidationError("Theta must be nonzero")
        if not Theta.is_monomial() and Theta.lo != -Theta.deg:
            raise ValidationError("Theta must be a symmetric Laurent polynomial")
        bank = construct(a, Theta, self.nb, self.dilation, self.m1, self.m2, tol)
        self.filter_bank_ = bank
        self.s_plus_ = bank.eps.count(1)
        self.s_minus_ = bank.eps.count(-1)
        self.residual_ = verify(bank, tol)["residual"]
        return self

    def transform(self, X):
        """One analysis level with periodic boundary.

        Each row of X (length divisible by M) maps to the concatenation of the
        low-pass band and the high-pass bands, each of length n / M.
        """
        check_is_fitted(self, "filter_bank_")
        X = np.asarray(X)
        one = X.ndim == 1
        X = np.atleast_2d(X)
        if X.ndim != 2:
            raise ValidationError("X must be 1-D or 2-D")
        M = self.filter_bank_.dilation
        n = X.shape[1]
        if n == 0 or n % M:
            raise ValidationError(f"signal length must be a positive multiple of {M}")
        bands = [_analysis(X, f, M) for f in [self.filter_bank_.a] + self.filter_bank_.b]
        out = np.concatenate(bands, axis=1)
        if np.isrealobj(X) and np.allclose(out.imag, 0, atol=1e-12 * max(1.0, np.abs(out).max())):
            out = out.real
        return out[0] if one else out


def _analysis(X: np.ndarray, h: LaurentPoly, M: int) -> np.ndarray:
    # y[k] = sum_j conj(h[j]) x[(M k + j) mod n]
    n = X.shape[1]
    Y = np.zeros((X.shape[0], n // M), dtype=complex)
    base = M * np.arange(n // M)
    for j, c in h.coeffs.items():
        Y += np.conj(c) * X[:, (base + j) % n]
    return Y
