"""
Exception hierarchy for lang_heights.

Every error raised by the package derives from LangHeightsError so callers
(the CLI, the batch pipeline) can isolate failures per record.
"""

from fractions import Fraction


class LangHeightsError(Exception):
    """Base class for all package errors."""


class ConfigError(LangHeightsError):
    """Invalid configuration value (environment or flag)."""


class SingularModel(LangHeightsError):
    """The Weierstrass equation has zero discriminant."""

    def __init__(self, coefficients: tuple[int, ...]):
        self.coefficients = coefficients
        super().__init__(f"singular model {list(coefficients)}: discriminant is 0")


class PointNotOnCurve(LangHeightsError):
    """An affine point does not satisfy the model equation."""

    def __init__(self, x: Fraction, y: Fraction, coefficients: tuple[int, ...] | None = None):
        self.x = x
        self.y = y
        self.coefficients = coefficients
        where = f" on {list(coefficients)}" if coefficients else ""
        super().__init__(f"point ({x}, {y}) is not on the curve{where}")


class UnfactorableDiscriminant(LangHeightsError):
    """Discriminant could not be completely factored at desk scale."""


class PrecisionExhausted(LangHeightsError):
    """A high-precision evaluation failed its self-check at the requested precision."""


class PointIsOrigin(LangHeightsError):
    """Local heights are undefined at the point at infinity."""


class DuplicatePoints(LangHeightsError):
    """A configuration of points that must be distinct contains a repeat."""


class NotMinimalModel(LangHeightsError):
    """An operation requiring a globally minimal model received another model."""


class NotSplitMultiplicative(LangHeightsError):
    """The place is not of split multiplicative reduction."""


class TorsionShortCircuit(LangHeightsError):
    """An intermediate multiple hit the origin, so the point is torsion."""

    def __init__(self, doublings: int):
        self.doublings = doublings
        super().__init__(f"[2^{doublings}]P is the origin; point is torsion")


class ParameterTooSmall(LangHeightsError):
    """Pigeonhole parameters n, N violate their lower bounds."""


class H0Violated(LangHeightsError):
    """log|N Delta| is below the floor 10^8 d log(2d)."""


class InstanceTooLarge(LangHeightsError):
    """An exhaustive oracle was asked for an instance above its caps."""


class PreconditionViolated(LangHeightsError):
    """A documented precondition of an operation does not hold."""


class ParseError(LangHeightsError):
    """Malformed corpus line."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class UnknownFormat(LangHeightsError):
    """Requested report format is not supported."""


# Errors the CLI reports as bad input (exit code 2)
INPUT_ERRORS = (
    ConfigError,
    ParseError,
    SingularModel,
    PointNotOnCurve,
    UnknownFormat,
    H0Violated,
    ParameterTooSmall,
    PreconditionViolated,
    InstanceTooLarge,
    NotMinimalModel,
    NotSplitMultiplicative,
    PointIsOrigin,
    DuplicatePoints,
)
