"""Exception types shared by all modules.

Two families matter to callers: ``ValidationError`` (bad or inadmissible
input, CLI exit code 2) and ``NumericalError`` (the computation ran but could
not meet its residual or structural tolerances, CLI exit code 3).
"""


class FrameFactorError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1


class ValidationError(FrameFactorError, ValueError):
    """Input violates a precondition."""

    exit_code = 2


class NumericalError(FrameFactorError, ArithmeticError):
    """A floating-point procedure failed its acceptance test."""

    exit_code = 3


class InertiaBoundError(ValidationError):
    """Requested signature counts are below the pointwise inertia maxima."""

    def __init__(self, msg="below inertia lower bound"):
        super().__init__(msg)


class VanishingMomentError(ValidationError):
    """Requested n_b exceeds the admissible vanishing-moment order."""

    def __init__(self, msg="vanishing-moment bound exceeded"):
        super().__init__(msg)


class SignatureError(ValidationError):
    """Input does not have constant signature where it is required."""

    def __init__(self, msg="signature not constant"):
        super().__init__(msg)
