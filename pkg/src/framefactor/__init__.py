"""Generalized spectral factorization of Hermitian Laurent polynomial matrices
and quasi-tight framelet filter bank design."""

from .errors import (
    FrameFactorError,
    InertiaBoundError,
    NumericalError,
    SignatureError,
    ValidationError,
    VanishingMomentError,
)
from .estimator import QuasiTightFrameletDesigner
from .factorizer import (
    FactorizationResult,
    SignatureProfile,
    const_signature_factor,
    general_factor,
    signature_profile,
    unimodular_factor,
)
from .framelet import (
    Classification,
    FilterBank,
    build_M,
    build_N,
    cascade_sample,
    classify,
    construct,
    max_vm,
    smoothness_sm,
    verify,
)
from .laurent import LaurentPoly, RootMultiset, ToleranceConfig, fejer_riesz, roots, sr, vmo
from .lpmatrix import LPMatrix, smith_normal_form

__version__ = "0.1.0"

__all__ = [
    "Classification", "FactorizationResult", "FilterBank", "FrameFactorError", "InertiaBoundError",
    "LPMatrix", "LaurentPoly", "NumericalError", "QuasiTightFrameletDesigner", "RootMultiset",
    "SignatureError", "SignatureProfile", "ToleranceConfig", "ValidationError", "VanishingMomentError",
    "build_M", "build_N", "cascade_sample", "classify", "const_signature_factor", "construct",
    "fejer_riesz", "general_factor", "max_vm", "roots", "signature_profile", "smith_normal_form",
    "smoothness_sm", "sr", "unimodular_factor", "verify", "vmo",
]
