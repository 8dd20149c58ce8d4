"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: input/validation problems
exit with 2, numerical failures with 3 and operator-hypothesis failures
with 4 (see cli.py).
"""


class HankelcError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HankelcError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionMismatch(DomainError):
    """Objects with incompatible dimensions were combined."""


class ComponentExceeds(DomainError):
    """A componentwise bound between multi-indices is violated."""


class DecayRequired(DomainError):
    """The operation needs a function with a positive Gaussian decay rate."""


class SpecError(HankelcError):
    """A problem-spec file or CLI argument could not be validated."""


class NumericError(HankelcError):
    """A numerical procedure failed to reach its accuracy goal."""


class LimitExceeded(NumericError):
    """A configured resource cap (points, panels, ladder length) was hit."""


class ExtrapolationDiverged(NumericError):
    """A Richardson ladder did not contract towards a limit."""


class SupportViolation(NumericError):
    """A functional assumed to be point-supported reacts to far-field input."""


class HypothesisFailed(HankelcError):
    """An operator polynomial fails the sign/nonvanishing hypothesis."""
