"""Exceptions raised by numradius.

Every failure a caller can act on derives from NumRadiusError, so the CLI
can map the whole family onto one exit code.
"""


class NumRadiusError(Exception):
    """Base class for all numradius failures."""

    def __init__(self, message, **details):
        Exception.__init__(self, message)
        self.message = message
        self.details = details

    def __str__(self):
        if not self.details:
            return self.message
        extra = ", ".join(
            "%s=%.6g" % (k, v) if isinstance(v, float) else "%s=%s" % (k, v)
            for k, v in sorted(self.details.items())
        )
        return "%s (%s)" % (self.message, extra)


class InvalidMatrix(NumRadiusError):
    """Input is not a finite square complex matrix."""


class NotHermitian(NumRadiusError):
    """A matrix claimed Hermitian fails the hermitize tolerance."""


class NotPositiveDefinite(NumRadiusError):
    """A Hermitian matrix has a non-positive eigenvalue."""


class Singular(NumRadiusError):
    """Pivoted elimination met a pivot below the singular threshold."""


class NotAccretive(NumRadiusError):
    """Re(A) is not positive definite."""


class ZeroInRange(NumRadiusError):
    """No rotation moves W(A) into the open right half-plane."""


class Defective(NumRadiusError):
    """The eigenvector matrix is too ill-conditioned for spectral calculus."""


class BranchCut(NumRadiusError):
    """An eigenvalue lies on or next to the closed negative real axis."""


class TailNotConverged(NumRadiusError):
    """The analytic tail bound at the integration window is too large."""


class QuadratureNotConverged(NumRadiusError):
    """Panel doubling did not reach the requested tolerance."""


class Unsupported(NumRadiusError):
    """Neither fractional power method applies to the matrix."""


class ClassMismatch(NumRadiusError):
    """The matrix is outside the class a property is stated for."""


class SectorUnreachable(NumRadiusError):
    """Sectorial generator could not meet the requested angle."""
