"""Exception hierarchy shared by every module.

``DomainError`` covers evaluations requested outside an operation's domain
(poles, bad fields, abscissa violations); the CLI maps it to exit code 3.
"""


class NazetaError(Exception):
    pass


class DomainError(NazetaError, ValueError):
    pass


class PoleError(DomainError):
    pass


class PoleAtNonPositiveInteger(PoleError):
    pass


class PoleAtOne(PoleError):
    pass


class PoleAtZeroOrOne(PoleError):
    pass


class NonPositiveArgument(DomainError):
    pass


class FieldIsRationals(DomainError):
    pass


class NotImaginaryQuadratic(DomainError):
    pass


class UnsupportedField(DomainError):
    pass


class AbscissaViolation(DomainError):
    pass


class DegenerateCusp(DomainError):
    pass


class CancellationAtHalf(NazetaError):
    """Residues of the two terms of the rank-two zeta failed to cancel at s = 1/2."""


class RealnessViolated(NazetaError):
    """A value that must be real on the critical line has a large imaginary part."""


class BoundaryTooCloseToZero(NazetaError):
    """Argument-principle contour could not be moved off a zero or pole."""


class PrecisionError(NazetaError):
    pass
