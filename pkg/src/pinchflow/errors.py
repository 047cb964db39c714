"""Exception types shared across the package."""


class PinchflowError(Exception):
    """Base class for all package errors."""


class DegenerateMeanCurvature(PinchflowError):
    """|H| is below the degeneracy threshold; the principal direction is undefined."""


class UnsupportedDimension(PinchflowError):
    """Dimension outside the range a formula is stated for."""


class InvalidConstants(PinchflowError):
    """Pinching constants violate the preconditions of the requested formula."""


class NonpositiveKappa(PinchflowError):
    """The gradient-estimate constant 3/(n+2) - c is not positive."""


class NotPinched(PinchflowError):
    """The pinching quantity f is not positive where positivity is required."""


class NotPinchedAtBase(NotPinched):
    """Rescaling base record has f <= 0."""


class InvalidSample(PinchflowError):
    """A sampled tensor violates a structural constraint (symmetry, trace identity)."""


class PastBlowup(PinchflowError):
    """Requested time is at or beyond the family's blow-up time."""


class NonpositiveZ(PinchflowError):
    """Quotient-identity denominator field is not strictly positive."""
